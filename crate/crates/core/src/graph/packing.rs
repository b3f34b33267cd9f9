use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Edge, EdgeId, Multigraph, VertexId};

/// A vertex partition `P` with fewer than `count * (|P| - 1)` crossing
/// edges, which rules out `count` edge-disjoint spanning trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingCertificate {
    pub partition: Vec<Vec<VertexId>>,
    pub crossing: usize,
}

impl PackingCertificate {
    pub fn verify(&self, g: &Multigraph, count: usize) -> bool {
        let mut class = BTreeMap::new();
        for (i, part) in self.partition.iter().enumerate() {
            for &v in part {
                if class.insert(v, i).is_some() {
                    return false;
                }
            }
        }
        if class.len() != g.vertex_count() || g.vertices().iter().any(|v| !class.contains_key(v)) {
            return false;
        }
        let crossing = g.edges().iter().filter(|e| class[&e.u] != class[&e.v]).count();
        crossing == self.crossing && crossing < count * (self.partition.len().saturating_sub(1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PackingOutcome {
    Packed(Vec<Vec<EdgeId>>),
    Infeasible(PackingCertificate),
}

struct Forests<'a> {
    g: &'a Multigraph,
    count: usize,
    owner: Vec<Option<usize>>,
}

impl Forests<'_> {
    fn edge(&self, i: usize) -> Edge {
        self.g.edges()[i]
    }

    fn idx(&self, v: VertexId) -> usize {
        self.g.index_of(v).expect("validated")
    }

    fn adjacency(&self) -> Vec<Vec<Vec<(usize, usize)>>> {
        let n = self.g.vertex_count();
        let mut adj = vec![vec![Vec::new(); n]; self.count];
        for (i, o) in self.owner.iter().enumerate() {
            if let Some(f) = *o {
                let e = self.edge(i);
                let (a, b) = (self.idx(e.u), self.idx(e.v));
                adj[f][a].push((b, i));
                adj[f][b].push((a, i));
            }
        }
        adj
    }

    /// Edge indices on the forest path between `a` and `b`, if connected.
    fn path(adj: &[Vec<(usize, usize)>], a: usize, b: usize) -> Option<Vec<usize>> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
        let mut seen = vec![false; adj.len()];
        seen[a] = true;
        let mut q = VecDeque::from([a]);
        while let Some(x) = q.pop_front() {
            if x == b {
                let mut out = Vec::new();
                let mut y = b;
                while let Some((px, e)) = prev[y] {
                    out.push(e);
                    y = px;
                }
                return Some(out);
            }
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, e));
                    q.push_back(y);
                }
            }
        }
        None
    }

    /// Breadth-first search in the exchange graph from `sources`. On success
    /// the shortest augmenting path is applied. On failure the set of
    /// labelled edges is returned.
    fn augment(&mut self, sources: &[usize]) -> Result<(), Vec<bool>> {
        let adj = self.adjacency();
        let m = self.owner.len();
        let mut label: Vec<Option<(usize, usize)>> = vec![None; m];
        let mut seen = vec![false; m];
        let mut q = VecDeque::new();
        for &s in sources {
            seen[s] = true;
            q.push_back(s);
        }
        while let Some(x) = q.pop_front() {
            let e = self.edge(x);
            let (a, b) = (self.idx(e.u), self.idx(e.v));
            for (f, forest) in adj.iter().enumerate() {
                if self.owner[x] == Some(f) {
                    continue;
                }
                match Self::path(forest, a, b) {
                    None => {
                        // x joins forest f; each predecessor takes the slot
                        // its successor vacated
                        let mut cur = x;
                        let mut into = f;
                        loop {
                            let vacated = self.owner[cur];
                            self.owner[cur] = Some(into);
                            match label[cur] {
                                Some((prev, _)) => {
                                    into = vacated.expect("labelled edges are owned");
                                    cur = prev;
                                }
                                None => break,
                            }
                        }
                        return Ok(());
                    }
                    Some(cycle) => {
                        for y in cycle {
                            if !seen[y] {
                                seen[y] = true;
                                label[y] = Some((x, f));
                                q.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        Err(seen)
    }
}

/// Packs `count` edge-disjoint spanning trees by matroid partitioning:
/// each edge is inserted along a shortest augmenting path of exchanges
/// between forests. When the union falls short, the edges reachable from
/// the leftovers span a vertex partition violating the Nash-Williams-Tutte
/// condition, which is returned as the certificate.
pub fn spanning_tree_packing(g: &Multigraph, count: usize) -> PackingOutcome {
    let mut state = Forests {
        g,
        count,
        owner: vec![None; g.edge_count()],
    };
    if count > 0 {
        for i in 0..g.edge_count() {
            let _ = state.augment(&[i]);
        }
    }
    let need = g.vertex_count().saturating_sub(1);
    let mut trees = vec![Vec::new(); count];
    for (i, o) in state.owner.iter().enumerate() {
        if let Some(f) = *o {
            trees[f].push(g.edges()[i].id);
        }
    }
    if trees.iter().all(|t| t.len() == need) {
        debug_assert!(trees.iter().all(|t| g.is_spanning_tree(t)));
        return PackingOutcome::Packed(trees);
    }
    let leftovers: Vec<usize> = (0..g.edge_count()).filter(|&i| state.owner[i].is_none()).collect();
    let reached = match state.augment(&leftovers) {
        Err(seen) => seen,
        Ok(()) => unreachable!("greedy matroid partition left an augmentable edge"),
    };
    let keep: BTreeSet<EdgeId> = (0..g.edge_count())
        .filter(|&i| reached[i])
        .map(|i| g.edges()[i].id)
        .collect();
    let partition = g.edge_subgraph(&keep).components();
    let class: BTreeMap<VertexId, usize> = partition
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.iter().map(move |&v| (v, i)))
        .collect();
    let crossing = g.edges().iter().filter(|e| class[&e.u] != class[&e.v]).count();
    let cert = PackingCertificate { partition, crossing };
    debug_assert!(cert.verify(g, count));
    PackingOutcome::Infeasible(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_packed(g: &Multigraph, count: usize) -> Vec<Vec<EdgeId>> {
        match spanning_tree_packing(g, count) {
            PackingOutcome::Packed(trees) => {
                let mut used = BTreeSet::new();
                for t in &trees {
                    assert!(g.is_spanning_tree(t));
                    for &e in t {
                        assert!(used.insert(e), "edge {e} reused");
                    }
                }
                assert_eq!(trees.len(), count);
                trees
            }
            PackingOutcome::Infeasible(c) => panic!("unexpected infeasible: {c:?}"),
        }
    }

    #[test]
    fn examples() {
        let fat = Multigraph::from_pairs(2, &[(0, 1); 4]).unwrap();
        let trees = assert_packed(&fat, 2);
        assert!(trees.iter().all(|t| t.len() == 1));

        let c4 = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        match spanning_tree_packing(&c4, 2) {
            PackingOutcome::Infeasible(c) => assert!(c.verify(&c4, 2)),
            other => panic!("{other:?}"),
        }

        let mut pairs = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                pairs.push((i, j));
            }
        }
        let k5 = Multigraph::from_pairs(5, &pairs).unwrap();
        assert_packed(&k5, 2);
        // 10 edges cannot hold three trees of 4 edges
        assert!(matches!(spanning_tree_packing(&k5, 3), PackingOutcome::Infeasible(_)));
    }

    #[test]
    fn needs_exchanges() {
        // K4 holds exactly two disjoint spanning trees, but a greedy forest
        // built in this edge order blocks the second one without swaps
        let k4 = Multigraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (1, 3)]).unwrap();
        assert_packed(&k4, 2);
    }

    #[test]
    fn two_triangles_joined_by_one_edge() {
        let g = Multigraph::from_pairs(
            6,
            &[(0, 1), (1, 2), (2, 0), (0, 1), (1, 2), (3, 4), (4, 5), (5, 3), (3, 4), (4, 5), (2, 3)],
        )
        .unwrap();
        match spanning_tree_packing(&g, 2) {
            PackingOutcome::Infeasible(c) => {
                assert!(c.verify(&g, 2));
                assert_eq!(c.partition, vec![vec![0, 1, 2], vec![3, 4, 5]]);
            }
            other => panic!("{other:?}"),
        }
    }
}
