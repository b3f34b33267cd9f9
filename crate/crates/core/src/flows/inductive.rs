use std::collections::{BTreeMap, BTreeSet};

use super::list::scaled_orientation;
use super::orient::orient_raw;
use super::{check_modulus, is_weighted_orientation, Boundary, Digraph, EdgeWeighting, FlowError};
use crate::field::Modulus;
use crate::graph::{mader_extract, EdgeId, Multigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductiveOutcome {
    pub orientation: Option<Digraph>,
    /// Monochromatic subgraphs contracted on the successful path.
    pub contractions: usize,
    /// Sub-instances handed to the exact solver.
    pub fallbacks: usize,
}

struct Solver {
    modulus: Modulus,
    weights: BTreeMap<EdgeId, u32>,
    contractions: usize,
    fallbacks: usize,
}

/// Edge id to "kept as stored", for the edges of one sub-instance.
type Orient = BTreeMap<EdgeId, bool>;

impl Solver {
    fn exact(&mut self, g: &Multigraph, beta: &BTreeMap<VertexId, u32>) -> Option<Orient> {
        self.fallbacks += 1;
        let w: Vec<u32> = g.edges().iter().map(|e| self.weights[&e.id]).collect();
        let b = Boundary::new(self.modulus, beta.iter().map(|(&v, &x)| (v, x as i64)).collect())
            .expect("sub-boundaries sum to zero");
        let rev = orient_raw(g, self.modulus, &w, &b)?;
        Some(g.edges().iter().zip(rev).map(|(e, r)| (e.id, !r)).collect())
    }

    fn solve(&mut self, g: &Multigraph, beta: &BTreeMap<VertexId, u32>) -> Option<Orient> {
        if g.vertex_count() <= 1 {
            return beta.values().all(|&x| x == 0).then(Orient::new);
        }
        let m = self.modulus;
        let k = 3 * m.value() as usize - 4;
        let mut classes: BTreeMap<u32, BTreeSet<EdgeId>> = BTreeMap::new();
        for e in g.edges() {
            classes.entry(self.weights[&e.id]).or_default().insert(e.id);
        }
        let mut ordered: Vec<(u32, BTreeSet<EdgeId>)> = classes.into_iter().collect();
        ordered.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
        let found = ordered.iter().find_map(|(w, ids)| {
            mader_extract(&g.edge_subgraph(ids), k).map(|x| (*w, ids.clone(), x))
        });
        let Some((weight, class, x)) = found else {
            return self.exact(g, beta);
        };

        let (quotient, merged) = g.contract(&x);
        let in_x: BTreeSet<VertexId> = x.iter().copied().collect();
        let mut outer_beta: BTreeMap<VertexId, u32> =
            beta.iter().filter(|(v, _)| !in_x.contains(v)).map(|(&v, &b)| (v, b)).collect();
        outer_beta.insert(merged, in_x.iter().fold(0, |a, v| m.add(a, beta[v])));
        let Some(mut orient) = self.solve(&quotient, &outer_beta) else {
            return self.exact(g, beta);
        };

        // edges inside X outside the class are kept as stored
        let mut residual: BTreeMap<VertexId, u32> = in_x.iter().map(|&v| (v, beta[&v])).collect();
        let mut h_ids = BTreeSet::new();
        for e in g.edges() {
            let (iu, iv) = (in_x.contains(&e.u), in_x.contains(&e.v));
            if !iu && !iv {
                continue;
            }
            if iu && iv && class.contains(&e.id) {
                h_ids.insert(e.id);
                continue;
            }
            if iu && iv {
                orient.insert(e.id, true);
            }
            let w = self.weights[&e.id];
            let (tail, head) = if orient[&e.id] { (e.u, e.v) } else { (e.v, e.u) };
            if let Some(r) = residual.get_mut(&tail) {
                *r = m.sub(*r, w);
            }
            if let Some(r) = residual.get_mut(&head) {
                *r = m.add(*r, w);
            }
        }
        let h = g.induced(&x).edge_subgraph(&h_ids);
        let hb = Boundary::new(m, residual.iter().map(|(&v, &b)| (v, b as i64)).collect())
            .expect("residual of a boundary sums to zero");
        let inner = match scaled_orientation(&h, weight, &hb) {
            Ok(Some(d)) => d,
            _ => return self.exact(g, beta),
        };
        for e in h.edges() {
            orient.insert(e.id, inner.is_forward(e));
        }
        self.contractions += 1;
        Some(orient)
    }
}

/// Weighted orientation by repeatedly contracting a highly edge-connected
/// subgraph of one weight class. Each contracted block is finished by a
/// constant-weight orientation after the rest of the graph is oriented.
///
/// Whenever a step finds no suitable block, or a sub-instance turns out
/// infeasible, that sub-instance is solved by the exact search instead, so
/// the verdict is always exact.
pub fn solve_weighted_orientation_inductive(
    g: &Multigraph,
    f: &EdgeWeighting,
    beta: &Boundary,
) -> Result<InductiveOutcome, FlowError> {
    let m = f.modulus();
    check_modulus(m, beta.modulus())?;
    m.require_prime()?;
    f.require_nonzero(g)?;
    beta.check_against(g)?;
    let half = (m.value() - 1) / 2;
    // an edge of weight w > (p-1)/2 is the same edge reversed with weight -w
    let mut flipped = BTreeSet::new();
    let mut weights = BTreeMap::new();
    for e in g.edges() {
        let w = f.require(e.id)?;
        if w > half {
            flipped.insert(e.id);
            weights.insert(e.id, m.neg(w));
        } else {
            weights.insert(e.id, w);
        }
    }
    let mut solver = Solver {
        modulus: m,
        weights,
        contractions: 0,
        fallbacks: 0,
    };
    let target = g.vertices().iter().map(|&v| (v, beta.get(v))).collect();
    let orientation = solver.solve(g, &target).map(|kept| {
        let reversed: Vec<bool> = g
            .edges()
            .iter()
            .map(|e| kept[&e.id] == flipped.contains(&e.id))
            .collect();
        Digraph::from_orientation(g, &reversed)
    });
    if let Some(d) = &orientation {
        assert!(is_weighted_orientation(d, f, beta), "inductive solver produced a wrong orientation");
    }
    Ok(InductiveOutcome {
        orientation,
        contractions: solver.contractions,
        fallbacks: solver.fallbacks,
    })
}
