//! Orientations and flows over `Z_k`: weighted `beta`-orientations, list
//! flows, `{0,1}`-flows, antisymmetric flows and degree-prescribed
//! bipartite subgraphs.
//!
//! Every solver here is exact at desk scale. The connectivity thresholds
//! under which the corresponding existence theorems guarantee a solution
//! are exposed as functions, but are never used to decide infeasibility.

mod asf;
mod correspondence;
mod degrees;
mod inductive;
mod list;
mod orient;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{FieldError, Modulus, Residue};
use crate::graph::{Edge, EdgeId, GraphError, Multigraph, VertexId};
use crate::oracle::OracleError;

pub use asf::{asf_connectivity_threshold, construct_asf, is_asf};
pub use correspondence::{
    edge_vector_correspondence, orientation_via_subset_sum, shifted_target, tree_basis,
};
pub use degrees::{prescribed_degrees_threshold, solve_prescribed_degrees};
pub use inductive::{solve_weighted_orientation_inductive, InductiveOutcome};
pub use list::{
    list_flow_threshold, reduce_list_flow, scaled_orientation, solve_01_flow, solve_list_flow,
    zero_one_threshold, ListReduction,
};
pub use orient::{beta_orientation_threshold, solve_beta_orientation, solve_weighted_orientation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("boundary values sum to {0}, not 0")]
    NotZeroSum(u32),
    #[error("no value given for arc {0}")]
    MissingArcValue(EdgeId),
    #[error("boundary has no value for vertex {0}")]
    MissingVertex(VertexId),
    #[error("weight of edge {0} is zero")]
    ZeroWeight(EdgeId),
    #[error("list of arc {0} does not hold two distinct values")]
    DegenerateList(EdgeId),
    #[error("{k} and {modulus} are not coprime")]
    NonCoprime { k: u32, modulus: u32 },
    #[error("mixed moduli {0} and {1}")]
    ModulusMismatch(u32, u32),
    #[error("antisymmetric flows need k >= 2, got {0}")]
    KTooSmall(u32),
    #[error("graph is not bipartite with the given sides (edge {0})")]
    NotBipartite(EdgeId),
    #[error("prescribed degrees do not balance across the bipartition")]
    UnbalancedPrescription,
}

/// An arc `tail -> head`, carrying the id of its underlying edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

/// An orientation of a multigraph. Connectivity of a digraph always refers
/// to its underlying undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    underlying: Multigraph,
    arcs: Vec<Arc>,
}

impl Digraph {
    pub fn new(vertices: Vec<VertexId>, arcs: Vec<Arc>) -> Result<Self, FlowError> {
        let edges = arcs
            .iter()
            .map(|a| Edge { id: a.id, u: a.tail, v: a.head })
            .collect();
        let underlying = Multigraph::new(vertices, edges)?;
        Ok(Self { underlying, arcs })
    }

    /// Vertices `0..n`, arc `i` going `pairs[i].0 -> pairs[i].1`.
    pub fn from_pairs(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self, FlowError> {
        let arcs = pairs
            .iter()
            .enumerate()
            .map(|(id, &(tail, head))| Arc { id, tail, head })
            .collect();
        Self::new((0..n).collect(), arcs)
    }

    /// Orients edge `e = (u, v)` as `u -> v`, or `v -> u` when `reversed[i]`.
    pub fn from_orientation(g: &Multigraph, reversed: &[bool]) -> Self {
        assert_eq!(reversed.len(), g.edge_count());
        let arcs = g
            .edges()
            .iter()
            .zip(reversed)
            .map(|(e, &r)| {
                let (tail, head) = if r { (e.v, e.u) } else { (e.u, e.v) };
                Arc { id: e.id, tail, head }
            })
            .collect();
        Self {
            underlying: g.clone(),
            arcs,
        }
    }

    pub fn underlying(&self) -> &Multigraph {
        &self.underlying
    }

    pub fn vertices(&self) -> &[VertexId] {
        self.underlying.vertices()
    }

    /// The underlying graph with every edge stored as `(tail, head)`.
    pub fn arc_graph(&self) -> Multigraph {
        let edges = self
            .arcs
            .iter()
            .map(|a| Edge { id: a.id, u: a.tail, v: a.head })
            .collect();
        Multigraph::new(self.vertices().to_vec(), edges).expect("arcs already validated")
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: EdgeId) -> Option<&Arc> {
        self.arcs.iter().find(|a| a.id == id)
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.arcs.iter().filter(|a| a.tail == v).count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.arcs.iter().filter(|a| a.head == v).count()
    }

    /// Same arcs with every direction flipped.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            underlying: self.underlying.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc { id: a.id, tail: a.head, head: a.tail })
                .collect(),
        }
    }

    /// Whether the arc over edge `e` runs from `e.u` to `e.v`.
    pub fn is_forward(&self, e: &Edge) -> bool {
        let a = self.arc(e.id).expect("arc for every edge");
        a.tail == e.u
    }
}

/// A vertex labelling over `Z_k` whose values sum to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    modulus: Modulus,
    values: BTreeMap<VertexId, u32>,
}

impl Boundary {
    pub fn new(modulus: Modulus, values: BTreeMap<VertexId, i64>) -> Result<Self, FlowError> {
        let values: BTreeMap<VertexId, u32> = values.into_iter().map(|(v, x)| (v, modulus.reduce(x))).collect();
        let sum = values.values().fold(0, |a, &x| modulus.add(a, x));
        if sum != 0 {
            return Err(FlowError::NotZeroSum(sum));
        }
        Ok(Self { modulus, values })
    }

    /// Values listed in vertex order for vertices `0..n`.
    pub fn from_slice(modulus: Modulus, values: &[i64]) -> Result<Self, FlowError> {
        Self::new(modulus, values.iter().copied().enumerate().collect())
    }

    pub fn zero(modulus: Modulus, vertices: &[VertexId]) -> Self {
        Self {
            modulus,
            values: vertices.iter().map(|&v| (v, 0)).collect(),
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn get(&self, v: VertexId) -> u32 {
        self.values.get(&v).copied().unwrap_or(0)
    }

    pub fn residue(&self, v: VertexId) -> Residue {
        self.modulus.residue(self.get(v) as i64)
    }

    pub fn values(&self) -> &BTreeMap<VertexId, u32> {
        &self.values
    }

    pub fn negated(&self) -> Boundary {
        self.scaled(self.modulus.neg(1))
    }

    pub fn scaled(&self, c: u32) -> Boundary {
        let m = self.modulus;
        Boundary {
            modulus: m,
            values: self.values.iter().map(|(&v, &x)| (v, m.mul(x, c))).collect(),
        }
    }

    /// Checks that the boundary covers the vertices of `g` and shares `m`.
    pub(crate) fn check_against(&self, g: &Multigraph) -> Result<(), FlowError> {
        for &v in g.vertices() {
            if !self.values.contains_key(&v) {
                return Err(FlowError::MissingVertex(v));
            }
        }
        Ok(())
    }

    /// Whether both boundaries agree on every vertex of `vertices`.
    pub fn agrees_on(&self, other: &Boundary, vertices: &[VertexId]) -> bool {
        self.modulus == other.modulus && vertices.iter().all(|&v| self.get(v) == other.get(v))
    }
}

/// Edge or arc values over `Z_k`: used both as orientation weights and as
/// flow values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeValues {
    modulus: Modulus,
    values: BTreeMap<EdgeId, u32>,
}

/// Weights `f` of an `f`-weighted orientation problem.
pub type EdgeWeighting = EdgeValues;
/// Values of a flow on the arcs of a digraph.
pub type FlowAssignment = EdgeValues;

impl EdgeValues {
    pub fn new(modulus: Modulus, values: BTreeMap<EdgeId, i64>) -> Self {
        Self {
            modulus,
            values: values.into_iter().map(|(e, x)| (e, modulus.reduce(x))).collect(),
        }
    }

    /// Values listed in edge order for edge ids `0..m`.
    pub fn from_slice(modulus: Modulus, values: &[i64]) -> Self {
        Self::new(modulus, values.iter().copied().enumerate().collect())
    }

    pub fn constant(modulus: Modulus, edges: &[Edge], value: i64) -> Self {
        Self::new(modulus, edges.iter().map(|e| (e.id, value)).collect())
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn get(&self, e: EdgeId) -> Option<u32> {
        self.values.get(&e).copied()
    }

    pub fn values(&self) -> &BTreeMap<EdgeId, u32> {
        &self.values
    }

    pub(crate) fn require(&self, e: EdgeId) -> Result<u32, FlowError> {
        self.get(e).ok_or(FlowError::MissingArcValue(e))
    }

    pub(crate) fn require_nonzero(&self, g: &Multigraph) -> Result<(), FlowError> {
        for e in g.edges() {
            if self.require(e.id)? == 0 {
                return Err(FlowError::ZeroWeight(e.id));
            }
        }
        Ok(())
    }
}

/// An unordered pair of distinct values per arc, stored in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    modulus: Modulus,
    lists: BTreeMap<EdgeId, (u32, u32)>,
}

impl ListAssignment {
    pub fn new(modulus: Modulus, lists: BTreeMap<EdgeId, (i64, i64)>) -> Result<Self, FlowError> {
        let mut out = BTreeMap::new();
        for (e, (a, b)) in lists {
            let (a, b) = (modulus.reduce(a), modulus.reduce(b));
            if a == b {
                return Err(FlowError::DegenerateList(e));
            }
            out.insert(e, (a.min(b), a.max(b)));
        }
        Ok(Self { modulus, lists: out })
    }

    pub fn constant(modulus: Modulus, arcs: &[Arc], a: i64, b: i64) -> Result<Self, FlowError> {
        Self::new(modulus, arcs.iter().map(|x| (x.id, (a, b))).collect())
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn get(&self, e: EdgeId) -> Option<(u32, u32)> {
        self.lists.get(&e).copied()
    }

    pub fn lists(&self) -> &BTreeMap<EdgeId, (u32, u32)> {
        &self.lists
    }
}

/// `v -> (sum of values leaving v) - (sum entering v)` modulo `k`.
pub fn boundary_of_flow(d: &Digraph, f: &FlowAssignment) -> Result<Boundary, FlowError> {
    let m = f.modulus;
    let mut values: BTreeMap<VertexId, u32> = d.vertices().iter().map(|&v| (v, 0)).collect();
    for a in &d.arcs {
        let x = f.require(a.id)?;
        let t = values.get_mut(&a.tail).expect("validated");
        *t = m.add(*t, x);
        let h = values.get_mut(&a.head).expect("validated");
        *h = m.sub(*h, x);
    }
    Ok(Boundary { modulus: m, values })
}

/// Checks `d` is an `f`-weighted `beta`-orientation.
pub fn is_weighted_orientation(d: &Digraph, f: &EdgeWeighting, beta: &Boundary) -> bool {
    match boundary_of_flow(d, f) {
        Ok(b) => b.agrees_on(beta, d.vertices()),
        Err(_) => false,
    }
}

pub(crate) fn check_modulus(a: Modulus, b: Modulus) -> Result<(), FlowError> {
    if a == b {
        Ok(())
    } else {
        Err(FlowError::ModulusMismatch(a.value(), b.value()))
    }
}
