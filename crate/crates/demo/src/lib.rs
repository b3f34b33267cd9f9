//! Browser bindings. Every exported function takes plain numbers and
//! strings and returns a JSON document; failures come back as
//! `{"error": "..."}`.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use zpflow::builder::{represent, RepresentOptions, Representation, TraceStep};
use zpflow::flows::{construct_asf, is_asf, Digraph};
use zpflow::gen::Gen;
use zpflow::graph::{edge_connectivity, mader_extract};
use zpflow::io::parse_vector;

#[derive(Serialize)]
pub struct RepresentView {
    pub p: u32,
    pub n: usize,
    pub bases: Vec<Vec<Vec<u32>>>,
    pub target: Vec<u32>,
    /// "constructive", "fallback" or "infeasible".
    pub branch: String,
    /// `[basis, column]`, 0-based.
    pub subset: Vec<[usize; 2]>,
    pub steps: Vec<TraceStep>,
    pub verified: bool,
}

#[derive(Serialize)]
pub struct GraphView {
    pub vertices: usize,
    /// `[u, v]` per edge, arcs as `[tail, head]`.
    pub edges: Vec<[usize; 2]>,
}

#[derive(Serialize)]
pub struct AsfView {
    pub graph: GraphView,
    pub modulus: u32,
    /// Flow value per arc, empty when no flow was found.
    pub values: Vec<u32>,
    pub found: bool,
    pub verified: bool,
}

#[derive(Serialize)]
pub struct MaderView {
    pub graph: GraphView,
    pub average_degree: f64,
    pub block: Vec<usize>,
    pub block_connectivity: usize,
}

/// Generates a family over `Z_p^n` and represents `target` (written like
/// `1,0,2`) by a subset of its columns.
pub fn represent_view(
    p: u32,
    n: usize,
    shadows: usize,
    bases: usize,
    single: f64,
    seed: u64,
    target: &str,
) -> Result<RepresentView, String> {
    let fam = Gen::new(seed).family(p, n, shadows, bases, single).map_err(|e| e.to_string())?;
    let beta = parse_vector(target, fam.modulus()).map_err(|e| e.to_string())?;
    let out = represent(&fam, &beta, &RepresentOptions::default()).map_err(|e| e.to_string())?;
    let (branch, steps) = match &out {
        Representation::Constructive { trace, .. } => ("constructive", trace.steps.clone()),
        Representation::Fallback { .. } => ("fallback", Vec::new()),
        Representation::Infeasible => ("infeasible", Vec::new()),
    };
    let subset = out.subset().unwrap_or(&[]);
    Ok(RepresentView {
        p,
        n,
        bases: fam.bases().iter().map(|b| b.iter().map(|v| v.to_dense()).collect()).collect(),
        target: beta.to_dense(),
        branch: branch.into(),
        subset: subset.iter().map(|r| [r.basis, r.column]).collect(),
        steps,
        verified: out.subset().is_some_and(|s| fam.sum_of(s) == beta),
    })
}

/// A random orientation of a `conn`-edge-connected multigraph and an
/// antisymmetric `Z_{2k+1}`-flow on it, when one is found.
pub fn asf_view(n: usize, conn: usize, k: u32, seed: u64) -> Result<AsfView, String> {
    let mut g = Gen::new(seed);
    let und = g.connected_multigraph(n, conn).map_err(|e| e.to_string())?;
    let reversed: Vec<bool> = und.edges().iter().map(|_| g.chance(0.5)).collect();
    let d = Digraph::from_orientation(&und, &reversed);
    let flow = construct_asf(&d, k).map_err(|e| e.to_string())?;
    Ok(AsfView {
        graph: GraphView { vertices: n, edges: d.arcs().iter().map(|a| [a.tail, a.head]).collect() },
        modulus: 2 * k + 1,
        values: flow.as_ref().map(|f| d.arcs().iter().map(|a| f.get(a.id).unwrap_or(0)).collect()).unwrap_or_default(),
        found: flow.is_some(),
        verified: flow.as_ref().is_some_and(|f| is_asf(&d, f)),
    })
}

/// A random multigraph with average degree at least `4k` and a
/// `(k+1)`-edge-connected block inside it.
pub fn mader_view(n: usize, k: usize, seed: u64) -> Result<MaderView, String> {
    if n < 2 || k == 0 {
        return Err("need n >= 2 and k >= 1".into());
    }
    let g = Gen::new(seed).multigraph(n, 2 * k * n).map_err(|e| e.to_string())?;
    let block = mader_extract(&g, k).ok_or("no block found")?;
    Ok(MaderView {
        graph: GraphView { vertices: n, edges: g.edges().iter().map(|e| [e.u, e.v]).collect() },
        average_degree: g.average_degree(),
        block_connectivity: edge_connectivity(&g.induced(&block)),
        block,
    })
}

fn json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("views serialize"),
        Err(e) => serde_json::json!({ "error": e }).to_string(),
    }
}

#[wasm_bindgen(js_name = representDemo)]
pub fn represent_demo(p: u32, n: usize, shadows: usize, bases: usize, single: f64, seed: u64, target: &str) -> String {
    json(represent_view(p, n, shadows, bases, single, seed, target))
}

#[wasm_bindgen(js_name = asfDemo)]
pub fn asf_demo(n: usize, conn: usize, k: u32, seed: u64) -> String {
    json(asf_view(n, conn, k, seed))
}

#[wasm_bindgen(js_name = maderDemo)]
pub fn mader_demo(n: usize, k: usize, seed: u64) -> String {
    json(mader_view(n, k, seed))
}
