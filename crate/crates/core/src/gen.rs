//! Seeded instance generators. Every generator is a pure function of its
//! parameters and the seed.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::Modulus;
use crate::flows::{Boundary, Digraph, EdgeWeighting, ListAssignment};
use crate::graph::{edge_connectivity, EdgeSide, Multigraph, VertexId};
use crate::linear::{rank, BasisFamily, GroupVec, Shadow, SpaceKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("generator self-check failed: {0}")]
    SelfCheck(String),
}

fn params(msg: impl Into<String>) -> GenError {
    GenError::Params(msg.into())
}

/// All two-element shadows over `Z_p`, in lexicographic order.
pub fn all_pair_shadows(p: u32) -> Vec<Shadow> {
    let mut out = Vec::new();
    for a in 1..p {
        for b in a..p {
            out.push(Shadow::new(vec![a, b]));
        }
    }
    out
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn nonzero(&mut self, m: Modulus) -> u32 {
        self.rng.gen_range(1..m.value())
    }

    pub fn residue(&mut self, m: Modulus) -> u32 {
        self.rng.gen_range(0..m.value())
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn distinct_pair(&mut self, n: usize) -> (usize, usize) {
        let u = self.below(n);
        let v = (u + 1 + self.below(n - 1)) % n;
        (u, v)
    }

    /// A full family of `bases` linear bases of `Z_p^n` whose two-element
    /// shadows are exactly `shadows` distinct ones. Columns have a single
    /// entry with probability `single`.
    pub fn family(&mut self, p: u32, n: usize, shadows: usize, bases: usize, single: f64) -> Result<BasisFamily, GenError> {
        let m = Modulus::prime(p).map_err(|e| params(e.to_string()))?;
        let pool = all_pair_shadows(p);
        if n == 0 || shadows > pool.len() || (n == 1 && shadows > 0) || (n > 1 && shadows == 0 && single < 1.0) {
            return Err(params(format!("cannot place {shadows} shadows in Z_{p}^{n}")));
        }
        if shadows > bases {
            return Err(params("more shadows than bases"));
        }
        if !(0.0..=1.0).contains(&single) {
            return Err(params("single-entry probability must lie in [0, 1]"));
        }
        let mut chosen = pool;
        chosen.shuffle(&mut self.rng);
        chosen.truncate(shadows);
        chosen.sort();
        for _ in 0..64 {
            let mut out = Vec::with_capacity(bases);
            // the first bases cycle through the shadows so that all occur
            let mut forced: VecDeque<Shadow> = chosen.iter().cloned().collect();
            for _ in 0..bases {
                out.push(self.basis(m, n, &chosen, single, &mut forced)?);
            }
            let fam = BasisFamily::new(m, n, SpaceKind::Full, out).map_err(|e| GenError::SelfCheck(e.to_string()))?;
            if fam.shadow_count_size2() == shadows {
                return Ok(fam);
            }
        }
        Err(GenError::SelfCheck(format!("could not realise {shadows} shadows")))
    }

    fn basis(
        &mut self,
        m: Modulus,
        n: usize,
        shadows: &[Shadow],
        single: f64,
        forced: &mut VecDeque<Shadow>,
    ) -> Result<Vec<GroupVec>, GenError> {
        for _ in 0..10_000 {
            let mut pending: Vec<Shadow> = Vec::new();
            // at most one forced shadow per basis: two forced columns can be
            // parallel (e.g. {1,4} and {2,3} over Z_5 in dimension 2)
            let cols: Vec<GroupVec> = (0..n)
                .map(|k| {
                    let pick = if n > 1 && k == 0 { forced.pop_front() } else { None };
                    if let Some(s) = pick {
                        pending.push(s.clone());
                        return self.pair_vector(m, n, &s);
                    }
                    if n == 1 || shadows.is_empty() || self.chance(single) {
                        let mut x = vec![0i64; n];
                        x[self.below(n)] = self.nonzero(m) as i64;
                        GroupVec::from_dense(m, &x)
                    } else {
                        let s = shadows[self.below(shadows.len())].clone();
                        self.pair_vector(m, n, &s)
                    }
                })
                .collect();
            if rank(&cols) == n {
                return Ok(cols);
            }
            // a rejected basis must not swallow shadows that were forced into it
            for s in pending.into_iter().rev() {
                forced.push_front(s);
            }
        }
        Err(GenError::SelfCheck("no linear basis found with these shadows".into()))
    }

    fn pair_vector(&mut self, m: Modulus, n: usize, s: &Shadow) -> GroupVec {
        let (i, j) = self.distinct_pair(n);
        let mut x = vec![0i64; n];
        x[i] = s.values()[0] as i64;
        x[j] = s.values()[1] as i64;
        GroupVec::from_dense(m, &x)
    }

    /// `bases` bases of the zero-sum subspace, each from a random spanning
    /// tree with random orientation and random non-zero weights.
    pub fn zero_sum_family(&mut self, p: u32, n: usize, bases: usize) -> Result<BasisFamily, GenError> {
        let m = Modulus::prime(p).map_err(|e| params(e.to_string()))?;
        if n == 0 {
            return Err(params("dimension must be positive"));
        }
        let out = (0..bases)
            .map(|_| {
                self.spanning_tree(n)
                    .into_iter()
                    .map(|(u, v)| {
                        let w = self.nonzero(m) as i64;
                        let mut x = vec![0i64; n];
                        x[u] = w;
                        x[v] = -w;
                        GroupVec::from_dense(m, &x)
                    })
                    .collect()
            })
            .collect();
        BasisFamily::new(m, n, SpaceKind::ZeroSum, out).map_err(|e| GenError::SelfCheck(e.to_string()))
    }

    /// Random labelled tree on `0..n`, each new vertex attached to an
    /// earlier one of a random order.
    pub fn spanning_tree(&mut self, n: usize) -> Vec<(VertexId, VertexId)> {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);
        (1..n)
            .map(|k| {
                let parent = order[self.below(k)];
                if self.chance(0.5) {
                    (order[k], parent)
                } else {
                    (parent, order[k])
                }
            })
            .collect()
    }

    /// Union of random Hamiltonian cycles, at least `conn`-edge-connected.
    pub fn connected_multigraph(&mut self, n: usize, conn: usize) -> Result<Multigraph, GenError> {
        if n < 2 {
            return Err(params("need at least two vertices"));
        }
        let mut pairs = Vec::new();
        for _ in 0..conn.div_ceil(2) {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut self.rng);
            for k in 0..n {
                let (u, v) = (order[k], order[(k + 1) % n]);
                if u != v {
                    pairs.push((u.min(v), u.max(v)));
                }
            }
            if n == 2 {
                // a 2-cycle on two vertices is the same edge twice
                pairs.push((0, 1));
            }
        }
        let g = Multigraph::from_pairs(n, &pairs).map_err(|e| GenError::SelfCheck(e.to_string()))?;
        let got = edge_connectivity(&g);
        if got < conn {
            return Err(GenError::SelfCheck(format!("connectivity {got} < {conn}")));
        }
        Ok(g)
    }

    /// `m` uniformly random edges between distinct vertices of `0..n`.
    pub fn multigraph(&mut self, n: usize, m: usize) -> Result<Multigraph, GenError> {
        if n < 2 && m > 0 {
            return Err(params("edges need two vertices"));
        }
        let pairs: Vec<_> = (0..m).map(|_| self.distinct_pair(n)).collect();
        Multigraph::from_pairs(n, &pairs).map_err(|e| GenError::SelfCheck(e.to_string()))
    }

    /// Random bipartite multigraph with sides `0..n1` and `n1..n1+n2`.
    pub fn bipartite(&mut self, n1: usize, n2: usize, m: usize) -> Result<Multigraph, GenError> {
        if (n1 == 0 || n2 == 0) && m > 0 {
            return Err(params("both sides need a vertex"));
        }
        let pairs: Vec<_> = (0..m).map(|_| (self.below(n1), n1 + self.below(n2))).collect();
        Multigraph::from_pairs(n1 + n2, &pairs).map_err(|e| GenError::SelfCheck(e.to_string()))
    }

    /// `m` random arcs on `0..n`.
    pub fn digraph(&mut self, n: usize, m: usize) -> Result<Digraph, GenError> {
        let g = self.multigraph(n, m)?;
        Ok(Digraph::from_orientation(&g, &vec![false; m]))
    }

    /// Uniform random boundary on the given vertices.
    pub fn boundary(&mut self, m: Modulus, vertices: &[VertexId]) -> Boundary {
        let mut values: Vec<i64> = vertices.iter().map(|_| self.residue(m) as i64).collect();
        if let Some(last) = values.len().checked_sub(1) {
            values[last] -= values.iter().sum::<i64>();
        }
        Boundary::new(m, vertices.iter().copied().zip(values).collect()).expect("sums to zero")
    }

    pub fn weights(&mut self, m: Modulus, g: &Multigraph) -> EdgeWeighting {
        EdgeWeighting::new(m, g.edges().iter().map(|e| (e.id, self.nonzero(m) as i64)).collect())
    }

    pub fn lists(&mut self, m: Modulus, d: &Digraph) -> ListAssignment {
        let lists = d
            .arcs()
            .iter()
            .map(|a| {
                let x = self.residue(m);
                let y = (x + 1 + self.below(m.value() as usize - 1) as u32) % m.value();
                (a.id, (x as i64, y as i64))
            })
            .collect();
        ListAssignment::new(m, lists).expect("distinct by construction")
    }

    /// Random multigraph with a random side requirement per edge.
    pub fn sided(&mut self, n: usize, m: usize) -> Result<(Multigraph, Vec<EdgeSide>), GenError> {
        let g = self.multigraph(n, m)?;
        let sides = g
            .edges()
            .iter()
            .map(|e| match self.below(3) {
                0 => EdgeSide::Either,
                1 => EdgeSide::X1At(e.u),
                _ => EdgeSide::X1At(e.v),
            })
            .collect();
        Ok((g, sides))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_has_requested_shadow_count() {
        let fam = Gen::new(7).family(3, 2, 1, 41, 0.3).unwrap();
        assert_eq!(fam.len(), 41);
        assert_eq!(fam.shadow_count_size2(), 1);
        let fam = Gen::new(1).family(5, 3, 4, 10, 0.2).unwrap();
        assert_eq!(fam.shadow_count_size2(), 4);
        assert!(Gen::new(1).family(3, 2, 4, 10, 0.2).is_err());
    }

    #[test]
    fn same_seed_same_output() {
        let a = Gen::new(42).family(5, 3, 2, 12, 0.25).unwrap();
        let b = Gen::new(42).family(5, 3, 2, 12, 0.25).unwrap();
        assert_eq!(a, b);
        assert_eq!(Gen::new(3).multigraph(5, 9).unwrap(), Gen::new(3).multigraph(5, 9).unwrap());
    }

    #[test]
    fn zero_sum_bases() {
        let fam = Gen::new(9).zero_sum_family(5, 4, 6).unwrap();
        assert_eq!(fam.kind(), SpaceKind::ZeroSum);
        assert!(fam.union().all(|(_, v)| v.coordinate_sum() == 0 && v.support_size() == 2));
    }

    #[test]
    fn connectivity_is_met() {
        for (n, conn) in [(6, 4), (2, 3), (8, 5)] {
            let g = Gen::new(1).connected_multigraph(n, conn).unwrap();
            assert!(edge_connectivity(&g) >= conn);
        }
    }
}
