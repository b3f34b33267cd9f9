//! Undirected multigraphs with stable edge identities.

mod cut;
mod mader;
mod packing;
mod partition;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cut::{edge_connectivity, min_cut, Cut};
pub use mader::mader_extract;
pub use packing::{spanning_tree_packing, PackingCertificate, PackingOutcome};
pub use partition::{choose_partition, EdgeSide, PartitionCut};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {0} is a loop")]
    Loop(EdgeId),
    #[error("edge {edge} uses unknown vertex {vertex}")]
    UnknownVertex { edge: EdgeId, vertex: VertexId },
    #[error("edge id {0} used twice")]
    DuplicateEdge(EdgeId),
    #[error("vertex id {0} listed twice")]
    DuplicateVertex(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A loopless multigraph. Vertex ids are kept sorted; edges keep their ids
/// through subgraph and contraction operations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multigraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
}

impl Multigraph {
    pub fn new(vertices: Vec<VertexId>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut vs = vertices;
        vs.sort_unstable();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex(w[0]));
            }
        }
        let mut ids = BTreeSet::new();
        for e in &edges {
            if e.u == e.v {
                return Err(GraphError::Loop(e.id));
            }
            for x in [e.u, e.v] {
                if vs.binary_search(&x).is_err() {
                    return Err(GraphError::UnknownVertex { edge: e.id, vertex: x });
                }
            }
            if !ids.insert(e.id) {
                return Err(GraphError::DuplicateEdge(e.id));
            }
        }
        Ok(Self { vertices: vs, edges })
    }

    /// Vertices `0..n`, edge `i` joining `pairs[i]`.
    pub fn from_pairs(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(id, &(u, v))| Edge { id, u, v })
            .collect();
        Self::new((0..n).collect(), edges)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Position of `v` in the sorted vertex list.
    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn degrees(&self) -> BTreeMap<VertexId, usize> {
        let mut d: BTreeMap<VertexId, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for e in &self.edges {
            *d.get_mut(&e.u).expect("validated") += 1;
            *d.get_mut(&e.v).expect("validated") += 1;
        }
        d
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    pub fn average_degree(&self) -> f64 {
        if self.vertices.is_empty() {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / self.vertices.len() as f64
    }

    /// Induced subgraph on `keep`; vertices outside the graph are ignored.
    pub fn induced(&self, keep: &[VertexId]) -> Multigraph {
        let set: BTreeSet<VertexId> = keep.iter().copied().filter(|&v| self.has_vertex(v)).collect();
        Multigraph {
            vertices: set.iter().copied().collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| set.contains(&e.u) && set.contains(&e.v))
                .copied()
                .collect(),
        }
    }

    /// Spanning subgraph keeping only the listed edge ids.
    pub fn edge_subgraph(&self, keep: &BTreeSet<EdgeId>) -> Multigraph {
        Multigraph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().filter(|e| keep.contains(&e.id)).copied().collect(),
        }
    }

    pub fn without_vertex(&self, v: VertexId) -> Multigraph {
        let keep: Vec<VertexId> = self.vertices.iter().copied().filter(|&x| x != v).collect();
        self.induced(&keep)
    }

    /// Merges `set` into its smallest vertex and drops the resulting loops.
    /// Endpoint order of surviving edges is preserved. Returns the graph and
    /// the id of the merged vertex.
    pub fn contract(&self, set: &[VertexId]) -> (Multigraph, VertexId) {
        let set: BTreeSet<VertexId> = set.iter().copied().collect();
        let x = *set.iter().next().expect("contract a non-empty set");
        let map = |v: VertexId| if set.contains(&v) { x } else { v };
        let vertices = self
            .vertices
            .iter()
            .copied()
            .filter(|v| !set.contains(v) || *v == x)
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { id: e.id, u: map(e.u), v: map(e.v) })
            .filter(|e| e.u != e.v)
            .collect();
        (Multigraph { vertices, edges }, x)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for e in &self.edges {
            let a = find(&mut parent, self.index_of(e.u).expect("validated"));
            let b = find(&mut parent, self.index_of(e.v).expect("validated"));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(self.vertices[i]);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_spanning_tree(&self, edge_ids: &[EdgeId]) -> bool {
        if edge_ids.len() + 1 != self.vertices.len() {
            return false;
        }
        let keep: BTreeSet<EdgeId> = edge_ids.iter().copied().collect();
        keep.len() == edge_ids.len() && self.edge_subgraph(&keep).is_connected()
    }

    /// Number of edges with exactly one endpoint in `side`.
    pub fn cut_size(&self, side: &BTreeSet<VertexId>) -> usize {
        self.edges
            .iter()
            .filter(|e| side.contains(&e.u) != side.contains(&e.v))
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_unknown_vertices() {
        assert_eq!(Multigraph::from_pairs(2, &[(1, 1)]), Err(GraphError::Loop(0)));
        assert_eq!(
            Multigraph::from_pairs(2, &[(0, 2)]),
            Err(GraphError::UnknownVertex { edge: 0, vertex: 2 })
        );
        let dup = vec![Edge { id: 3, u: 0, v: 1 }, Edge { id: 3, u: 1, v: 0 }];
        assert_eq!(Multigraph::new(vec![0, 1], dup), Err(GraphError::DuplicateEdge(3)));
    }

    #[test]
    fn contraction_keeps_ids_and_drops_loops() {
        let g = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let (h, x) = g.contract(&[2, 0]);
        assert_eq!(x, 0);
        assert_eq!(h.vertices(), &[0, 1, 3]);
        let ids: Vec<_> = h.edges().iter().map(|e| e.id).collect();
        assert_eq!(ids, vec![0, 1, 2, 3]);
        assert_eq!(h.edges()[1], Edge { id: 1, u: 1, v: 0 });
    }

    #[test]
    fn induced_and_components() {
        let g = Multigraph::from_pairs(5, &[(0, 1), (1, 0), (2, 3)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3], vec![4]]);
        let h = g.induced(&[0, 1, 4]);
        assert_eq!(h.edge_count(), 2);
        assert!(!h.is_connected());
        assert_eq!(g.degree(0), 2);
        assert!(g.induced(&[0, 1]).is_spanning_tree(&[1]));
    }
}
