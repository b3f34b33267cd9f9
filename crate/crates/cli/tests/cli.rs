use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn zpflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zpflow")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn one_dimensional_family() {
    let dir = TempDir::new().unwrap();
    let fam = write(dir.path(), "f.json", r#"{"p":3,"n":1,"kind":"full","bases":[[[{"i":1,"v":1}]],[[{"i":1,"v":2}]]]}"#);
    let out = zpflow(&["represent", s(&fam), "--target", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("pair ")).collect::<Vec<_>>(), ["pair 2 1"]);
    assert!(text.contains("VERIFY ok"));
}

#[test]
fn generated_family_represents_every_target() {
    let dir = TempDir::new().unwrap();
    let fam = dir.path().join("fam.json");
    let gen = zpflow(&["gen", "family", "--p", "3", "--n", "2", "--shadows", "1", "--bases", "41", "--seed", "7", "-o", s(&fam)]);
    assert_eq!(code(&gen), 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&fam).unwrap()).unwrap();
    assert_eq!(json["bases"].as_array().unwrap().len(), 41);
    for a in 0..3 {
        for b in 0..3 {
            let out = zpflow(&["represent", s(&fam), "--target", &format!("{a},{b}")]);
            assert_eq!(code(&out), 0, "target {a},{b}");
            assert!(stdout(&out).contains("VERIFY ok"));
        }
    }
}

#[test]
fn represent_errors() {
    let dir = TempDir::new().unwrap();
    let zs = dir.path().join("zs.json");
    assert_eq!(code(&zpflow(&["gen", "family", "--p", "3", "--n", "3", "--bases", "4", "--zero-sum", "--seed", "2", "-o", s(&zs)])), 0);
    let out = zpflow(&["represent", s(&zs), "--target", "1,0,0"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("TargetNotZeroSum"));
    assert_eq!(code(&zpflow(&["represent", s(&zs), "--target", "1,2,0"])), 0);

    let wide = write(
        dir.path(),
        "wide.json",
        r#"{"p":3,"n":3,"kind":"full","bases":[[[{"i":1,"v":1},{"i":2,"v":1},{"i":3,"v":1}],[{"i":2,"v":1}],[{"i":3,"v":1}]]]}"#,
    );
    assert_eq!(code(&zpflow(&["represent", s(&wide), "--target", "0,0,0"])), 4);
    let broken = write(dir.path(), "broken.json", "{");
    assert_eq!(code(&zpflow(&["represent", s(&broken), "--target", "0"])), 3);
}

#[test]
fn small_family_is_infeasible_or_stuck() {
    let dir = TempDir::new().unwrap();
    let fam = write(dir.path(), "f.json", r#"{"p":5,"n":1,"kind":"full","bases":[[[{"i":1,"v":1}]]]}"#);
    assert_eq!(code(&zpflow(&["represent", s(&fam), "--target", "3"])), 2);
    assert_eq!(code(&zpflow(&["represent", s(&fam), "--target", "3", "--force-constructive"])), 4);
    assert_eq!(code(&zpflow(&["represent", s(&fam), "--target", "1", "--oracle"])), 0);
}

#[test]
fn flows() {
    let dir = TempDir::new().unwrap();
    let cycle = write(dir.path(), "cycle.txt", "3 2 2\n1 2\n2 1\n");
    let out = zpflow(&["flow", s(&cycle), "--asf", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 1\n2 1\nVERIFY ok\n");

    let pair = write(dir.path(), "pair.txt", "9 2 4\n1 2\n1 2\n1 2\n1 2\n");
    let beta = write(dir.path(), "beta.txt", "1 1\n2 -1\n");
    let w = write(dir.path(), "w.txt", "1 3\n2 3\n3 3\n4 3\n");
    let out = zpflow(&["flow", s(&pair), s(&beta), "--weights", s(&w)]);
    assert_eq!((code(&out), stdout(&out).as_str()), (2, "infeasible\n"));
    // the contraction solver works over prime moduli only
    let out = zpflow(&["flow", s(&pair), s(&beta), "--weights", s(&w), "--solver", "inductive"]);
    assert_eq!(code(&out), 3);

    let arc = write(dir.path(), "arc.txt", "3 2 1\n1 2\n");
    let b = write(dir.path(), "b.txt", "1 1\n2 2\n");
    let out = zpflow(&["flow", s(&arc), s(&b), "--zero-one"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 1\nVERIFY ok\n");

    let lists = write(dir.path(), "l.txt", "1 1 2\n");
    let out = zpflow(&["flow", s(&arc), s(&b), "--lists", s(&lists)]);
    assert_eq!(stdout(&out), "1 1\nVERIFY ok\n");
}

#[test]
fn weighted_solvers_agree_on_generated_digraphs() {
    let dir = TempDir::new().unwrap();
    for seed in 0..6 {
        let d = dir.path().join(format!("d{seed}.txt"));
        let b = dir.path().join(format!("b{seed}.txt"));
        let seed = seed.to_string();
        let gen = zpflow(&["gen", "digraph", "--n", "4", "--m", "5", "--p", "3", "--seed", &seed, "--boundary", s(&b), "-o", s(&d)]);
        assert_eq!(code(&gen), 0);
        let w = write(dir.path(), "w.txt", "1 1\n2 2\n3 1\n4 1\n5 2\n");
        let codes: Vec<i32> = ["exact", "inductive", "oracle"]
            .iter()
            .map(|solver| code(&zpflow(&["flow", s(&d), s(&b), "--weights", s(&w), "--solver", solver])))
            .collect();
        assert!(codes.iter().all(|&c| c == codes[0] && (c == 0 || c == 2)), "{codes:?}");
    }
}

#[test]
fn generators_are_deterministic_and_checked() {
    let a = zpflow(&["gen", "graph", "--n", "6", "--conn", "4", "--seed", "1"]);
    let b = zpflow(&["gen", "graph", "--n", "6", "--conn", "4", "--seed", "1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let pairs: Vec<(usize, usize)> = stdout(&a)
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split_whitespace().map(|x| x.parse::<usize>().unwrap() - 1);
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    // every single vertex and every pair of vertices has at least 4 edges leaving it
    for mask in 1u32..(1 << 6) - 1 {
        let crossing = pairs.iter().filter(|(u, v)| (mask >> u & 1) != (mask >> v & 1)).count();
        assert!(crossing >= 4);
    }
    assert_eq!(code(&zpflow(&["gen", "graph", "--n", "6", "--conn", "4"])), 3);
    assert_eq!(code(&zpflow(&["gen", "family", "--p", "3", "--n", "2", "--shadows", "5", "--bases", "4", "--seed", "1"])), 3);
}

#[test]
fn accept_subset() {
    let out = zpflow(&["accept", "--only", "5,9", "--jobs", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("criterion  5 PASS"));
    assert!(lines[1].starts_with("criterion  9 PASS"));
}
