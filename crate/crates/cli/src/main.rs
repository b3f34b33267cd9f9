use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zpflow::builder::{represent, represent_zero_sum, BuildError, Mode, RepresentOptions, Representation};
use zpflow::flows::{
    boundary_of_flow, construct_asf, orientation_via_subset_sum, solve_01_flow, solve_list_flow,
    solve_weighted_orientation, solve_weighted_orientation_inductive, Boundary, Digraph, FlowAssignment, FlowError,
};
use zpflow::gen::Gen;
use zpflow::io::{
    boundary_to_json, boundary_to_text, edge_values_to_text, family_to_json, parse_boundary, parse_edge_values,
    parse_family, parse_lists, parse_vector, DigraphInstance, GraphInstance,
};
use zpflow::oracle::{OracleConfig, OracleError};
use zpflow::{Modulus, SpaceKind};

const SOLVED: u8 = 0;
const INFEASIBLE: u8 = 2;
const INPUT: u8 = 3;
const UNSUPPORTED: u8 = 4;

#[derive(Parser)]
#[command(name = "zpflow", version, about = "Additive bases of Z_p^n and group-valued flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a target vector as a subset sum of a basis family.
    Represent(RepresentArgs),
    /// Solve a flow or orientation problem on a digraph.
    Flow(FlowArgs),
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Run the acceptance suite.
    Accept(AcceptArgs),
}

#[derive(Args)]
struct RepresentArgs {
    /// Family file (JSON).
    family: PathBuf,
    /// Target vector, e.g. `1,2,0`.
    #[arg(long, allow_hyphen_values = true)]
    target: String,
    /// Accepted for uniformity with the other commands; the construction
    /// is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// Fail with exit code 4 instead of calling the oracle.
    #[arg(long, conflicts_with = "oracle")]
    force_constructive: bool,
    /// Skip the construction and use the exact oracle only.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct FlowArgs {
    /// Digraph file.
    digraph: PathBuf,
    /// Boundary file; all zeros when omitted.
    boundary: Option<PathBuf>,
    /// Two allowed values per arc.
    #[arg(long, group = "kind")]
    lists: Option<PathBuf>,
    /// Flow values in {0, 1}.
    #[arg(long, group = "kind")]
    zero_one: bool,
    /// Antisymmetric Z_{2k+1}-flow with values in 1..=k.
    #[arg(long, group = "kind", value_name = "K")]
    asf: Option<u32>,
    /// Weighted orientation of the underlying graph; printed as the flow
    /// that is +w on kept arcs and -w on reversed ones.
    #[arg(long, group = "kind")]
    weights: Option<PathBuf>,
    /// Solver for `--weights`.
    #[arg(long, value_enum, default_value_t = Solver::Exact, requires = "weights")]
    solver: Solver,
}

#[derive(Clone, Copy, ValueEnum)]
enum Solver {
    Exact,
    Inductive,
    Oracle,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Seed of the generator; required so every output is reproducible.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file instead of standard output.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// JSON instead of the text format.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum GenKind {
    /// A family of linear bases (always JSON).
    Family {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        /// Number of distinct two-element shadows.
        #[arg(long, default_value_t = 1)]
        shadows: usize,
        /// Number of bases.
        #[arg(long)]
        bases: usize,
        /// Probability that a column has a single non-zero entry.
        #[arg(long, default_value_t = 0.25)]
        single: f64,
        /// Bases of the zero-sum subspace from random spanning trees.
        #[arg(long)]
        zero_sum: bool,
    },
    /// A multigraph with at least the given edge-connectivity.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        conn: usize,
        #[arg(long, default_value_t = 3)]
        p: u32,
    },
    /// A random digraph, with a random boundary written next to it.
    Digraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u32,
        /// Where to write the boundary.
        #[arg(long)]
        boundary: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AcceptArgs {
    /// Criteria run in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Run only these criteria, e.g. `2,5`.
    #[arg(long, value_delimiter = ',')]
    only: Vec<usize>,
}

struct Failure {
    code: u8,
    message: String,
}

fn input(message: impl std::fmt::Display) -> Failure {
    Failure { code: INPUT, message: message.to_string() }
}

fn unsupported(message: impl std::fmt::Display) -> Failure {
    Failure { code: UNSUPPORTED, message: message.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn in_file<E: std::fmt::Display>(path: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| input(format!("{}: {e}", path.display()))
}

fn build_failure(e: BuildError) -> Failure {
    match e {
        BuildError::UnsupportedSupportSize { .. } => unsupported(format!("UnsupportedSupportSize: {e}")),
        BuildError::ConstructionStuck => unsupported(format!("ConstructionStuck: {e}")),
        BuildError::Oracle(OracleError::StateBudgetExceeded { .. }) => unsupported(e),
        BuildError::TargetNotZeroSum => input(format!("TargetNotZeroSum: {e}")),
        other => input(other),
    }
}

fn flow_failure(e: FlowError) -> Failure {
    match e {
        FlowError::Oracle(OracleError::StateBudgetExceeded { .. }) => unsupported(e),
        other => input(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Represent(a) => cmd_represent(a),
        Command::Flow(a) => cmd_flow(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Accept(a) => cmd_accept(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_represent(a: RepresentArgs) -> Result<u8, Failure> {
    let fam = parse_family(&read(&a.family)?).map_err(in_file(&a.family))?;
    let beta = parse_vector(&a.target, fam.modulus()).map_err(input)?;
    let mode = match (a.force_constructive, a.oracle) {
        (true, _) => Mode::ForceConstructive,
        (_, true) => Mode::Oracle,
        _ => Mode::Auto,
    };
    let opts = RepresentOptions { mode, oracle: OracleConfig::from_env() };
    let out = match fam.kind() {
        SpaceKind::Full => represent(&fam, &beta, &opts),
        SpaceKind::ZeroSum => represent_zero_sum(&fam, &beta, &opts),
    }
    .map_err(build_failure)?;
    let (subset, branch) = match &out {
        Representation::Constructive { subset, .. } => (subset, "constructive"),
        Representation::Fallback { subset } => (subset, "fallback"),
        Representation::Infeasible => {
            println!("infeasible");
            return Ok(INFEASIBLE);
        }
    };
    println!("branch {branch}");
    for r in subset {
        println!("pair {} {}", r.basis + 1, r.column + 1);
    }
    if let Representation::Constructive { trace, .. } = &out {
        println!("trace {}", serde_json::to_string(trace).expect("trace serializes"));
    }
    let sum = fam.sum_of(subset);
    if sum == beta {
        println!("VERIFY ok");
        Ok(SOLVED)
    } else {
        let i = (0..beta.dim()).find(|&i| sum.get(i) != beta.get(i)).unwrap_or(0);
        println!("VERIFY fail {}", i + 1);
        Err(Failure { code: 1, message: "subset does not sum to the target".into() })
    }
}

fn cmd_flow(a: FlowArgs) -> Result<u8, Failure> {
    let inst = DigraphInstance::parse(&read(&a.digraph)?).map_err(in_file(&a.digraph))?;
    let d = inst.digraph;
    let m = match a.asf {
        Some(k) => Modulus::odd(2 * k + 1).map_err(input)?,
        None => inst.modulus,
    };
    let n = d.vertices().len();
    let beta = match &a.boundary {
        Some(path) => parse_boundary(&read(path)?, m, n).map_err(in_file(path))?,
        None => Boundary::zero(m, d.vertices()),
    };
    let flow: Option<FlowAssignment> = if let Some(k) = a.asf {
        if a.boundary.is_some() && beta.values().values().any(|&x| x != 0) {
            return Err(input("antisymmetric flows have zero boundary"));
        }
        construct_asf(&d, k).map_err(flow_failure)?
    } else if let Some(path) = &a.lists {
        let lists = parse_lists(&read(path)?, m, d.arcs().len()).map_err(in_file(path))?;
        solve_list_flow(&d, &lists, &beta).map_err(flow_failure)?
    } else if let Some(path) = &a.weights {
        let w = parse_edge_values(&read(path)?, m, d.arcs().len()).map_err(in_file(path))?;
        let g = d.arc_graph();
        let oriented = match a.solver {
            Solver::Exact => solve_weighted_orientation(&g, &w, &beta).map_err(flow_failure)?,
            Solver::Inductive => {
                let out = solve_weighted_orientation_inductive(&g, &w, &beta).map_err(flow_failure)?;
                println!("contractions {} fallbacks {}", out.contractions, out.fallbacks);
                out.orientation
            }
            Solver::Oracle => orientation_via_subset_sum(&d, &w, &beta, &OracleConfig::from_env()).map_err(flow_failure)?,
        };
        oriented.map(|o| signed_flow(&d, &o, &w))
    } else if a.zero_one {
        solve_01_flow(&d, &beta).map_err(flow_failure)?
    } else {
        return Err(input("choose one of --lists, --zero-one, --asf, --weights"));
    };
    let Some(f) = flow else {
        println!("infeasible");
        return Ok(INFEASIBLE);
    };
    print!("{}", edge_values_to_text(&f));
    let got = boundary_of_flow(&d, &f).map_err(input)?;
    match d.vertices().iter().find(|&&v| got.get(v) != beta.get(v)) {
        None => {
            println!("VERIFY ok");
            Ok(SOLVED)
        }
        Some(v) => {
            println!("VERIFY fail {}", v + 1);
            Err(Failure { code: 1, message: "flow misses the boundary".into() })
        }
    }
}

/// The orientation read as a flow on the original arcs.
fn signed_flow(d: &Digraph, oriented: &Digraph, w: &zpflow::flows::EdgeWeighting) -> FlowAssignment {
    let m = w.modulus();
    let values = d
        .arcs()
        .iter()
        .map(|a| {
            let x = w.get(a.id).unwrap_or(0) as i64;
            let kept = oriented.arc(a.id).is_some_and(|o| o.tail == a.tail);
            (a.id, if kept { x } else { -x })
        })
        .collect();
    FlowAssignment::new(m, values)
}

fn cmd_gen(a: GenArgs) -> Result<u8, Failure> {
    let seed = a.seed.ok_or_else(|| input("--seed is required"))?;
    let mut g = Gen::new(seed);
    let text = match a.kind {
        GenKind::Family { p, n, shadows, bases, single, zero_sum } => {
            let fam = if zero_sum { g.zero_sum_family(p, n, bases) } else { g.family(p, n, shadows, bases, single) }
                .map_err(input)?;
            family_to_json(&fam)
        }
        GenKind::Graph { n, conn, p } => {
            let modulus = Modulus::new(p).map_err(input)?;
            let graph = g.connected_multigraph(n, conn).map_err(input)?;
            let inst = GraphInstance { modulus, graph };
            if a.json { inst.to_json() } else { inst.to_text() }
        }
        GenKind::Digraph { n, m, p, boundary } => {
            let modulus = Modulus::new(p).map_err(input)?;
            let digraph = g.digraph(n, m).map_err(input)?;
            let beta = g.boundary(modulus, digraph.vertices());
            if let Some(path) = boundary {
                let b = if a.json { boundary_to_json(&beta) } else { boundary_to_text(&beta) };
                fs::write(&path, b).map_err(in_file(&path))?;
            }
            let inst = DigraphInstance { modulus, digraph };
            if a.json { inst.to_json() } else { inst.to_text() }
        }
    };
    match &a.out {
        Some(path) => fs::write(path, text).map_err(in_file(path))?,
        None => print!("{text}"),
    }
    Ok(SOLVED)
}

fn cmd_accept(a: AcceptArgs) -> Result<u8, Failure> {
    use zpflow::acceptance;
    let ids: Vec<usize> = if a.only.is_empty() { acceptance::CRITERIA.iter().map(|c| c.id).collect() } else { a.only };
    if let Some(bad) = ids.iter().find(|id| !acceptance::CRITERIA.iter().any(|c| c.id == **id)) {
        return Err(input(format!("no criterion {bad}")));
    }
    let reports = acceptance::run_selected(&ids, a.jobs);
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", reports.len() - failed);
    Ok(if failed == 0 { SOLVED } else { 1 })
}
