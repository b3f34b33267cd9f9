use std::collections::BTreeMap;

use super::{
    boundary_of_flow, check_modulus, solve_beta_orientation, solve_weighted_orientation, Boundary, Digraph,
    EdgeWeighting, FlowAssignment, FlowError, ListAssignment,
};
use crate::field::Modulus;
use crate::graph::{Multigraph, VertexId};

/// A list-flow instance rewritten as a weighted orientation problem.
///
/// For an arc `u -> v` with list `{a, b}` (`a < b`), any value is
/// `c + s*w` where `c = (a+b)/2`, `w = (a-b)/2` and `s = +1` picks `a`.
/// Keeping the arc yields `s = +1`, reversing it `s = -1`, once `c` is
/// moved out of `u` and into `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListReduction {
    graph: Multigraph,
    weights: EdgeWeighting,
    shift: BTreeMap<VertexId, u32>,
    shifted: Boundary,
    lists: ListAssignment,
}

impl ListReduction {
    /// Underlying graph with edge `(u, v)` for each arc `u -> v`.
    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn weights(&self) -> &EdgeWeighting {
        &self.weights
    }

    /// The boundary the weighted orientation has to meet.
    pub fn shifted(&self) -> &Boundary {
        &self.shifted
    }

    /// Maps a boundary of the list instance to the reduced boundary.
    pub fn map_boundary(&self, beta: &Boundary) -> Boundary {
        let m = beta.modulus();
        let values = beta
            .values()
            .iter()
            .map(|(&v, &x)| (v, m.add(x, self.shift.get(&v).copied().unwrap_or(0)) as i64))
            .collect();
        Boundary::new(m, values).expect("shift sums to zero")
    }

    /// Reads the flow value of every arc off an orientation of `graph()`.
    pub fn decode(&self, orientation: &Digraph) -> FlowAssignment {
        let values = self
            .graph
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = self.lists.get(e.id).expect("list per arc");
                let kept = orientation.is_forward(e);
                (e.id, if kept { a } else { b } as i64)
            })
            .collect();
        FlowAssignment::new(self.lists.modulus(), values)
    }
}

/// Builds the weights `2^{-1}(a-b)` and the boundary shifted by
/// `2^{-1}(a+b)` per arc.
pub fn reduce_list_flow(d: &Digraph, lists: &ListAssignment, beta: &Boundary) -> Result<ListReduction, FlowError> {
    let m = lists.modulus();
    check_modulus(m, beta.modulus())?;
    m.require_odd()?;
    let half = m.inv(2).expect("odd modulus");
    let mut weights = BTreeMap::new();
    let mut shift: BTreeMap<VertexId, u32> = d.vertices().iter().map(|&v| (v, 0)).collect();
    for arc in d.arcs() {
        let (a, b) = lists.get(arc.id).ok_or(FlowError::MissingArcValue(arc.id))?;
        weights.insert(arc.id, m.mul(half, m.sub(a, b)) as i64);
        let c = m.mul(half, m.add(a, b));
        let t = shift.get_mut(&arc.tail).expect("validated");
        *t = m.sub(*t, c);
        let h = shift.get_mut(&arc.head).expect("validated");
        *h = m.add(*h, c);
    }
    beta.check_against(d.underlying())?;
    let mut out = ListReduction {
        graph: d.arc_graph(),
        weights: EdgeWeighting::new(m, weights),
        shift,
        shifted: beta.clone(),
        lists: lists.clone(),
    };
    out.shifted = out.map_boundary(beta);
    Ok(out)
}

/// Exact list-respecting flow with boundary `beta`, or `None` when no such
/// flow exists.
pub fn solve_list_flow(
    d: &Digraph,
    lists: &ListAssignment,
    beta: &Boundary,
) -> Result<Option<FlowAssignment>, FlowError> {
    let reduction = reduce_list_flow(d, lists, beta)?;
    let Some(orientation) = solve_weighted_orientation(&reduction.graph, &reduction.weights, &reduction.shifted)?
    else {
        return Ok(None);
    };
    let flow = reduction.decode(&orientation);
    let got = boundary_of_flow(d, &flow)?;
    assert!(got.agrees_on(beta, d.vertices()), "decoded flow misses the boundary");
    Ok(Some(flow))
}

/// Exact flow with values in `{0, 1}` and boundary `beta`.
pub fn solve_01_flow(d: &Digraph, beta: &Boundary) -> Result<Option<FlowAssignment>, FlowError> {
    let lists = ListAssignment::constant(beta.modulus(), d.arcs(), 0, 1)?;
    solve_list_flow(d, &lists, beta)
}

/// Orientation where every edge carries weight `k`: a `k^{-1} beta`
/// orientation read with weights `k`.
pub fn scaled_orientation(g: &Multigraph, k: u32, beta: &Boundary) -> Result<Option<Digraph>, FlowError> {
    let m: Modulus = beta.modulus();
    m.require_odd()?;
    let inv = m.inv(m.reduce(k as i64)).ok_or(FlowError::NonCoprime { k, modulus: m.value() })?;
    let found = solve_beta_orientation(g, &beta.scaled(inv))?;
    if let Some(d) = &found {
        let f = EdgeWeighting::constant(m, g.edges(), k as i64);
        assert!(super::is_weighted_orientation(d, &f, beta));
    }
    Ok(found)
}

/// Connectivity guaranteeing list flows over a prime `p`: `(6p-8)(p-1)`.
pub fn list_flow_threshold(p: u32) -> usize {
    (6 * p as usize - 8) * (p as usize - 1)
}

/// Connectivity guaranteeing `{0,1}`-flows over `Z_{2k+1}`: `6k`.
pub fn zero_one_threshold(modulus: Modulus) -> Option<usize> {
    super::beta_orientation_threshold(modulus)
}
