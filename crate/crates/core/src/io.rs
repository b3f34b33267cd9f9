//! Text and JSON formats for instances. Vertices, arcs, edges and
//! coordinates are 1-indexed in files and 0-indexed in memory.
//!
//! Graph and digraph text files start with `p n m` followed by `m` lines
//! `u v`. Boundary files hold lines `v beta`, list files lines `arc a b`,
//! weight files lines `edge w`. Blank lines and `#` comments are skipped.
//! Every reader also accepts the JSON mirror when the input starts with `{`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Modulus;
use crate::flows::{Arc, Boundary, Digraph, EdgeValues, ListAssignment};
use crate::graph::{Edge, Multigraph};
use crate::linear::{BasisFamily, GroupVec, SpaceKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

fn invalid(e: impl std::fmt::Display) -> ParseError {
    ParseError::Invalid(e.to_string())
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))
}

fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("plain data serialises");
    s.push('\n');
    s
}

/// Non-empty lines with comments removed, with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn numbers<const N: usize>(line: usize, words: &[&str]) -> Result<[i64; N], ParseError> {
    if words.len() != N {
        return Err(ParseError::Line {
            line,
            message: format!("expected {N} numbers, found {}", words.len()),
        });
    }
    let mut out = [0i64; N];
    for (slot, w) in out.iter_mut().zip(words) {
        *slot = w.parse().map_err(|_| ParseError::Line {
            line,
            message: format!("not an integer: {w:?}"),
        })?;
    }
    Ok(out)
}

fn index(line: usize, x: i64, count: usize, what: &str) -> Result<usize, ParseError> {
    if x < 1 || x as usize > count {
        return Err(ParseError::Line {
            line,
            message: format!("{what} {x} out of range 1..={count}"),
        });
    }
    Ok(x as usize - 1)
}

/// A multigraph or digraph together with the modulus of its instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct PairsJson {
    p: u32,
    n: usize,
    edges: Vec<[usize; 2]>,
}

type Pairs = (Modulus, usize, Vec<(usize, usize)>);

fn parse_pairs(text: &str) -> Result<Pairs, ParseError> {
    if is_json(text) {
        let j: PairsJson = from_json(text)?;
        let m = Modulus::new(j.p).map_err(invalid)?;
        let mut pairs = Vec::with_capacity(j.edges.len());
        for (k, [u, v]) in j.edges.into_iter().enumerate() {
            let u = index(k + 1, u as i64, j.n, "vertex")?;
            let v = index(k + 1, v as i64, j.n, "vertex")?;
            pairs.push((u, v));
        }
        return Ok((m, j.n, pairs));
    }
    let mut it = lines(text);
    let (line, head) = it.next().ok_or(ParseError::Line { line: 1, message: "missing header \"p n m\"".into() })?;
    let [p, n, m] = numbers::<3>(line, &head)?;
    if p < 0 || n < 1 || m < 0 {
        return Err(ParseError::Line { line, message: "header values must be non-negative, n >= 1".into() });
    }
    let modulus = Modulus::new(p as u32).map_err(|e| ParseError::Line { line, message: e.to_string() })?;
    let n = n as usize;
    let mut pairs = Vec::new();
    for (line, words) in it {
        let [u, v] = numbers::<2>(line, &words)?;
        pairs.push((index(line, u, n, "vertex")?, index(line, v, n, "vertex")?));
    }
    if pairs.len() != m as usize {
        return Err(ParseError::Invalid(format!("header announces {m} edges, found {}", pairs.len())));
    }
    Ok((modulus, n, pairs))
}

fn write_pairs(m: Modulus, n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> String {
    let pairs: Vec<_> = pairs.collect();
    let mut s = format!("{} {} {}\n", m.value(), n, pairs.len());
    for (u, v) in pairs {
        s.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInstance {
    pub modulus: Modulus,
    pub graph: Multigraph,
}

impl GraphInstance {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let (modulus, n, pairs) = parse_pairs(text)?;
        let graph = Multigraph::from_pairs(n, &pairs).map_err(invalid)?;
        Ok(Self { modulus, graph })
    }

    /// Vertices must be `0..n` and edge ids `0..m` in order.
    pub fn to_text(&self) -> String {
        write_pairs(self.modulus, self.graph.vertex_count(), self.graph.edges().iter().map(|e| (e.u, e.v)))
    }

    pub fn to_json(&self) -> String {
        to_json(&PairsJson {
            p: self.modulus.value(),
            n: self.graph.vertex_count(),
            edges: self.graph.edges().iter().map(|e| [e.u + 1, e.v + 1]).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigraphInstance {
    pub modulus: Modulus,
    pub digraph: Digraph,
}

impl DigraphInstance {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let (modulus, n, pairs) = parse_pairs(text)?;
        let digraph = Digraph::from_pairs(n, &pairs).map_err(invalid)?;
        Ok(Self { modulus, digraph })
    }

    pub fn to_text(&self) -> String {
        write_pairs(
            self.modulus,
            self.digraph.vertices().len(),
            self.digraph.arcs().iter().map(|a| (a.tail, a.head)),
        )
    }

    pub fn to_json(&self) -> String {
        to_json(&PairsJson {
            p: self.modulus.value(),
            n: self.digraph.vertices().len(),
            edges: self.digraph.arcs().iter().map(|a| [a.tail + 1, a.head + 1]).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct BoundaryJson {
    beta: Vec<VertexValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct VertexValue {
    v: usize,
    beta: i64,
}

/// Reads `v beta` lines for vertices `1..=n`. Unlisted vertices get 0.
pub fn parse_boundary(text: &str, modulus: Modulus, n: usize) -> Result<Boundary, ParseError> {
    let mut values: BTreeMap<usize, i64> = (0..n).map(|v| (v, 0)).collect();
    let mut set = |line: usize, v: i64, b: i64| -> Result<(), ParseError> {
        let v = index(line, v, n, "vertex")?;
        values.insert(v, b);
        Ok(())
    };
    if is_json(text) {
        let j: BoundaryJson = from_json(text)?;
        for (k, x) in j.beta.iter().enumerate() {
            set(k + 1, x.v as i64, x.beta)?;
        }
    } else {
        for (line, words) in lines(text) {
            let [v, b] = numbers::<2>(line, &words)?;
            set(line, v, b)?;
        }
    }
    Boundary::new(modulus, values).map_err(invalid)
}

pub fn boundary_to_text(beta: &Boundary) -> String {
    beta.values().iter().map(|(v, b)| format!("{} {}\n", v + 1, b)).collect()
}

pub fn boundary_to_json(beta: &Boundary) -> String {
    to_json(&BoundaryJson {
        beta: beta.values().iter().map(|(&v, &b)| VertexValue { v: v + 1, beta: b as i64 }).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ListsJson {
    lists: Vec<ArcList>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ArcList {
    arc: usize,
    a: i64,
    b: i64,
}

/// Reads `arc a b` lines; every one of the `arcs` arcs needs a list.
pub fn parse_lists(text: &str, modulus: Modulus, arcs: usize) -> Result<ListAssignment, ParseError> {
    let mut raw = BTreeMap::new();
    if is_json(text) {
        let j: ListsJson = from_json(text)?;
        for (k, x) in j.lists.iter().enumerate() {
            raw.insert(index(k + 1, x.arc as i64, arcs, "arc")?, (x.a, x.b));
        }
    } else {
        for (line, words) in lines(text) {
            let [e, a, b] = numbers::<3>(line, &words)?;
            raw.insert(index(line, e, arcs, "arc")?, (a, b));
        }
    }
    if let Some(missing) = (0..arcs).find(|e| !raw.contains_key(e)) {
        return Err(ParseError::Invalid(format!("no list for arc {}", missing + 1)));
    }
    ListAssignment::new(modulus, raw).map_err(invalid)
}

pub fn lists_to_text(lists: &ListAssignment) -> String {
    lists.lists().iter().map(|(e, (a, b))| format!("{} {} {}\n", e + 1, a, b)).collect()
}

pub fn lists_to_json(lists: &ListAssignment) -> String {
    to_json(&ListsJson {
        lists: lists
            .lists()
            .iter()
            .map(|(&e, &(a, b))| ArcList { arc: e + 1, a: a as i64, b: b as i64 })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ValuesJson {
    values: Vec<EdgeValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct EdgeValue {
    edge: usize,
    value: i64,
}

/// Reads `edge w` lines; every one of the `edges` edges needs a value.
pub fn parse_edge_values(text: &str, modulus: Modulus, edges: usize) -> Result<EdgeValues, ParseError> {
    let mut raw = BTreeMap::new();
    if is_json(text) {
        let j: ValuesJson = from_json(text)?;
        for (k, x) in j.values.iter().enumerate() {
            raw.insert(index(k + 1, x.edge as i64, edges, "edge")?, x.value);
        }
    } else {
        for (line, words) in lines(text) {
            let [e, w] = numbers::<2>(line, &words)?;
            raw.insert(index(line, e, edges, "edge")?, w);
        }
    }
    if let Some(missing) = (0..edges).find(|e| !raw.contains_key(e)) {
        return Err(ParseError::Invalid(format!("no value for edge {}", missing + 1)));
    }
    Ok(EdgeValues::new(modulus, raw))
}

/// `arc value` lines, also used to print flows.
pub fn edge_values_to_text(values: &EdgeValues) -> String {
    values.values().iter().map(|(e, w)| format!("{} {}\n", e + 1, w)).collect()
}

pub fn edge_values_to_json(values: &EdgeValues) -> String {
    to_json(&ValuesJson {
        values: values
            .values()
            .iter()
            .map(|(&e, &w)| EdgeValue { edge: e + 1, value: w as i64 })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct FamilyJson {
    p: u32,
    n: usize,
    kind: SpaceKind,
    /// `bases[s][c]` lists the non-zero entries of column `c` of basis `s`.
    bases: Vec<Vec<Vec<Entry>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Entry {
    i: usize,
    v: i64,
}

pub fn parse_family(text: &str) -> Result<BasisFamily, ParseError> {
    let j: FamilyJson = from_json(text)?;
    let m = Modulus::new(j.p).map_err(invalid)?;
    let bases = j
        .bases
        .into_iter()
        .map(|basis| {
            basis
                .into_iter()
                .map(|col| {
                    let mut entries = Vec::with_capacity(col.len());
                    for e in col {
                        if e.i < 1 || e.i > j.n {
                            return Err(ParseError::Invalid(format!("coordinate {} out of range 1..={}", e.i, j.n)));
                        }
                        entries.push((e.i - 1, e.v));
                    }
                    GroupVec::from_entries(m, j.n, entries).map_err(invalid)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    BasisFamily::new(m, j.n, j.kind, bases).map_err(invalid)
}

pub fn family_to_json(fam: &BasisFamily) -> String {
    to_json(&FamilyJson {
        p: fam.modulus().value(),
        n: fam.dim(),
        kind: fam.kind(),
        bases: fam
            .bases()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|v| v.entries().iter().map(|&(i, x)| Entry { i: i + 1, v: x as i64 }).collect())
                    .collect()
            })
            .collect(),
    })
}

/// Parses a target vector written as `a,b,c` or `a b c`.
pub fn parse_vector(text: &str, modulus: Modulus) -> Result<GroupVec, ParseError> {
    let values: Result<Vec<i64>, _> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(|w| w.parse::<i64>())
        .collect();
    let values = values.map_err(|e| ParseError::Invalid(format!("target: {e}")))?;
    Ok(GroupVec::from_dense(modulus, &values))
}

/// Builds a digraph with arcs numbered in the given order; convenience for
/// generators and tests.
pub fn digraph_from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Digraph, ParseError> {
    let arcs = arcs.iter().enumerate().map(|(id, &(tail, head))| Arc { id, tail, head }).collect();
    Digraph::new((0..n).collect(), arcs).map_err(invalid)
}

/// Graph with vertices `0..n` from explicit edges, keeping their ids.
pub fn graph_from_edges(n: usize, edges: Vec<Edge>) -> Result<Multigraph, ParseError> {
    Multigraph::new((0..n).collect(), edges).map_err(invalid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_text_and_json() {
        let text = "5 3 3\n1 2\n2 3\n# comment\n3 1\n";
        let g = GraphInstance::parse(text).unwrap();
        assert_eq!(g.graph.edge_count(), 3);
        assert_eq!(g.to_text(), "5 3 3\n1 2\n2 3\n3 1\n");
        assert_eq!(GraphInstance::parse(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = GraphInstance::parse("5 3 2\n1 2\n\n2 x\n").unwrap_err();
        assert_eq!(err, ParseError::Line { line: 4, message: "not an integer: \"x\"".into() });
        let err = GraphInstance::parse("5 3 1\n1 4\n").unwrap_err();
        assert!(matches!(err, ParseError::Line { line: 2, .. }));
        assert!(matches!(GraphInstance::parse("5 3 2\n1 2\n"), Err(ParseError::Invalid(_))));
        assert!(matches!(GraphInstance::parse("5 2 1\n1 1\n"), Err(ParseError::Invalid(_))));
    }

    #[test]
    fn boundary_lists_weights() {
        let m = Modulus::new(5).unwrap();
        let b = parse_boundary("1 2\n2 3\n", m, 2).unwrap();
        assert_eq!((b.get(0), b.get(1)), (2, 3));
        assert_eq!(parse_boundary(&boundary_to_json(&b), m, 2).unwrap(), b);
        assert_eq!(parse_boundary(&boundary_to_text(&b), m, 2).unwrap(), b);
        assert!(parse_boundary("1 2\n", m, 2).is_err());

        let l = parse_lists("1 4 1\n", m, 1).unwrap();
        assert_eq!(l.get(0), Some((1, 4)));
        assert_eq!(parse_lists(&lists_to_json(&l), m, 1).unwrap(), l);
        assert!(parse_lists("1 2 2\n", m, 1).is_err());
        assert!(parse_lists("", m, 1).is_err());

        let w = parse_edge_values("2 3\n1 -1\n", m, 2).unwrap();
        assert_eq!(w.get(0), Some(4));
        assert_eq!(parse_edge_values(&edge_values_to_text(&w), m, 2).unwrap(), w);
    }

    #[test]
    fn family_round_trip() {
        let text = r#"{"p":3,"n":2,"kind":"full","bases":[[[{"i":1,"v":1}],[{"i":1,"v":1},{"i":2,"v":2}]]]}"#;
        let fam = parse_family(text).unwrap();
        assert_eq!(fam.column(crate::ColumnRef { basis: 0, column: 1 }).to_dense(), vec![1, 2]);
        assert_eq!(parse_family(&family_to_json(&fam)).unwrap(), fam);
        let bad = r#"{"p":3,"n":2,"kind":"full","bases":[[[{"i":1,"v":1}],[{"i":1,"v":2}]]]}"#;
        assert!(matches!(parse_family(bad), Err(ParseError::Invalid(_))));
    }

    #[test]
    fn vectors() {
        let m = Modulus::new(3).unwrap();
        assert_eq!(parse_vector("1,2", m).unwrap().to_dense(), vec![1, 2]);
        assert_eq!(parse_vector("4 -1 0", m).unwrap().to_dense(), vec![1, 2, 0]);
        assert!(parse_vector("1,a", m).is_err());
    }
}
