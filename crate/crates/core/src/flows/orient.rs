use std::collections::{BTreeMap, HashSet};

use super::{check_modulus, Boundary, Digraph, EdgeWeighting, FlowError};
use crate::field::Modulus;
use crate::graph::Multigraph;

/// Failed search states kept per component before the memo stops growing.
const MEMO_CAP: usize = 1 << 21;

/// An exact search over edges that each take one of two choices. Choice `c`
/// of edge `(u, v)` adds `delta[c].0` at `u` and `delta[c].1` at `v`. The
/// goal is to hit `target` at every vertex modulo `modulus`.
///
/// Orientations use `(+w, -w)` against `(-w, +w)`; subgraph selection uses
/// `(0, 0)` against `(1, 1)`.
/// Endpoints and the two `(delta_u, delta_v)` choices of one edge.
pub(crate) type BinaryEdge = (usize, usize, [(u32, u32); 2]);

pub(crate) struct BinaryProblem {
    pub modulus: Modulus,
    pub vertex_count: usize,
    pub edges: Vec<BinaryEdge>,
    pub target: Vec<u32>,
}

impl BinaryProblem {
    /// Choice per edge, or `None` when no assignment exists.
    pub fn solve(&self) -> Option<Vec<u8>> {
        let n = self.vertex_count;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(u, v, _) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a.max(b)] = a.min(b);
        }
        let mut comps: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            comps.entry(r).or_default().0.push(v);
        }
        for (i, &(u, _, _)) in self.edges.iter().enumerate() {
            let r = find(&mut parent, u);
            comps.get_mut(&r).expect("root").1.push(i);
        }
        let mut choice = vec![0u8; self.edges.len()];
        for (verts, edges) in comps.values() {
            let mut search = Search::new(self, verts, edges);
            if !search.run() {
                return None;
            }
            for (k, &e) in search.order.iter().enumerate() {
                choice[e] = search.picked[k];
            }
        }
        debug_assert!(self.check(&choice));
        Some(choice)
    }

    pub fn check(&self, choice: &[u8]) -> bool {
        let m = self.modulus;
        let mut sum = vec![0u32; self.vertex_count];
        for (&(u, v, d), &c) in self.edges.iter().zip(choice) {
            let (a, b) = d[c as usize];
            sum[u] = m.add(sum[u], a);
            sum[v] = m.add(sum[v], b);
        }
        sum == self.target
    }
}

struct Search<'a> {
    p: &'a BinaryProblem,
    /// Component vertices; `slot[v]` is the position of `v` in this list.
    verts: Vec<usize>,
    slot: BTreeMap<usize, usize>,
    order: Vec<usize>,
    picked: Vec<u8>,
    residual: Vec<u32>,
    used: Vec<usize>,
    /// `reach[s][j]`: values reachable at vertex slot `s` from its incident
    /// edges numbered `j..` in search order.
    reach: Vec<Vec<Vec<bool>>>,
    memo: HashSet<(usize, Vec<u32>)>,
}

impl<'a> Search<'a> {
    fn new(p: &'a BinaryProblem, verts: &[usize], edges: &[usize]) -> Self {
        let slot: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let order = edge_order(p, &slot, edges);
        let k = p.modulus.value() as usize;
        let mut incident: Vec<Vec<u32>> = vec![Vec::new(); verts.len()];
        let mut incident_alt: Vec<Vec<u32>> = vec![Vec::new(); verts.len()];
        for &e in &order {
            let (u, v, d) = p.edges[e];
            incident[slot[&u]].push(d[0].0);
            incident_alt[slot[&u]].push(d[1].0);
            incident[slot[&v]].push(d[0].1);
            incident_alt[slot[&v]].push(d[1].1);
        }
        let reach = (0..verts.len())
            .map(|s| {
                let deg = incident[s].len();
                let mut levels = vec![vec![false; k]; deg + 1];
                levels[deg][0] = true;
                for j in (0..deg).rev() {
                    let (a, b) = (incident[s][j] as usize, incident_alt[s][j] as usize);
                    for x in 0..k {
                        if levels[j + 1][x] {
                            levels[j][(x + a) % k] = true;
                            levels[j][(x + b) % k] = true;
                        }
                    }
                }
                levels
            })
            .collect();
        Self {
            p,
            verts: verts.to_vec(),
            residual: verts.iter().map(|&v| p.target[v]).collect(),
            used: vec![0; verts.len()],
            picked: vec![0; order.len()],
            slot,
            order,
            reach,
            memo: HashSet::new(),
        }
    }

    fn feasible(&self, s: usize) -> bool {
        self.reach[s][self.used[s]][self.residual[s] as usize]
    }

    fn run(&mut self) -> bool {
        (0..self.verts.len()).all(|s| self.feasible(s)) && self.dfs(0)
    }

    fn dfs(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let key = (pos, self.residual.clone());
        if self.memo.contains(&key) {
            return false;
        }
        let m = self.p.modulus;
        let (u, v, d) = self.p.edges[self.order[pos]];
        let (su, sv) = (self.slot[&u], self.slot[&v]);
        for c in 0..2u8 {
            let (a, b) = d[c as usize];
            self.residual[su] = m.sub(self.residual[su], a);
            self.residual[sv] = m.sub(self.residual[sv], b);
            self.used[su] += 1;
            self.used[sv] += 1;
            if self.feasible(su) && self.feasible(sv) {
                self.picked[pos] = c;
                if self.dfs(pos + 1) {
                    return true;
                }
            }
            self.used[su] -= 1;
            self.used[sv] -= 1;
            self.residual[su] = m.add(self.residual[su], a);
            self.residual[sv] = m.add(self.residual[sv], b);
        }
        if self.memo.len() < MEMO_CAP {
            self.memo.insert(key);
        }
        false
    }
}

/// Edges whose endpoints have the fewest undecided incident edges go first,
/// so vertices close early and their residual checks bite.
fn edge_order(p: &BinaryProblem, slot: &BTreeMap<usize, usize>, edges: &[usize]) -> Vec<usize> {
    let mut open = vec![0usize; slot.len()];
    for &e in edges {
        let (u, v, _) = p.edges[e];
        open[slot[&u]] += 1;
        open[slot[&v]] += 1;
    }
    let mut left: Vec<usize> = edges.to_vec();
    let mut order = Vec::with_capacity(edges.len());
    while !left.is_empty() {
        let (best, _) = left
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let (u, v, _) = p.edges[e];
                let (a, b) = (open[slot[&u]], open[slot[&v]]);
                (i, (a.min(b), a.max(b), e))
            })
            .min_by_key(|&(_, key)| key)
            .expect("non-empty");
        let e = left.swap_remove(best);
        let (u, v, _) = p.edges[e];
        open[slot[&u]] -= 1;
        open[slot[&v]] -= 1;
        order.push(e);
    }
    order
}

/// Orientation problem on `g` with per-edge weights (edge order) and target
/// boundary. Returns `reversed[i]` for edge `i` of `g.edges()`.
pub(crate) fn orient_raw(g: &Multigraph, m: Modulus, weights: &[u32], beta: &Boundary) -> Option<Vec<bool>> {
    let edges = g
        .edges()
        .iter()
        .zip(weights)
        .map(|(e, &w)| {
            let (u, v) = (g.index_of(e.u).expect("valid"), g.index_of(e.v).expect("valid"));
            (u, v, [(w, m.neg(w)), (m.neg(w), w)])
        })
        .collect();
    let problem = BinaryProblem {
        modulus: m,
        vertex_count: g.vertex_count(),
        edges,
        target: g.vertices().iter().map(|&v| beta.get(v)).collect(),
    };
    problem.solve().map(|c| c.into_iter().map(|x| x == 1).collect())
}

/// Exact `f`-weighted `beta`-orientation. `Ok(None)` is a certified
/// infeasibility: the search space was exhausted.
pub fn solve_weighted_orientation(
    g: &Multigraph,
    f: &EdgeWeighting,
    beta: &Boundary,
) -> Result<Option<Digraph>, FlowError> {
    check_modulus(f.modulus(), beta.modulus())?;
    f.require_nonzero(g)?;
    beta.check_against(g)?;
    let weights: Vec<u32> = g.edges().iter().map(|e| f.require(e.id)).collect::<Result<_, _>>()?;
    let found = orient_raw(g, beta.modulus(), &weights, beta).map(|r| Digraph::from_orientation(g, &r));
    if let Some(d) = &found {
        assert!(super::is_weighted_orientation(d, f, beta), "solver returned a wrong orientation");
    }
    Ok(found)
}

/// Exact `beta`-orientation: out-degree minus in-degree congruent to `beta`.
pub fn solve_beta_orientation(g: &Multigraph, beta: &Boundary) -> Result<Option<Digraph>, FlowError> {
    let ones = EdgeWeighting::constant(beta.modulus(), g.edges(), 1);
    solve_weighted_orientation(g, &ones, beta)
}

/// Edge-connectivity above which every `Z_{2k+1}`-boundary has a
/// `beta`-orientation (`6k`). `None` for even moduli.
pub fn beta_orientation_threshold(modulus: Modulus) -> Option<usize> {
    modulus.is_odd().then(|| 3 * (modulus.value() as usize - 1))
}
