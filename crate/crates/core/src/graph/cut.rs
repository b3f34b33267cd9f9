use std::collections::VecDeque;

use super::{Multigraph, VertexId};

/// A global minimum cut: `side` contains the first vertex of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub value: usize,
    pub side: Vec<VertexId>,
}

fn capacity_matrix(g: &Multigraph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut cap = vec![vec![0u32; n]; n];
    for e in g.edges() {
        let a = g.index_of(e.u).expect("validated");
        let b = g.index_of(e.v).expect("validated");
        cap[a][b] += 1;
        cap[b][a] += 1;
    }
    cap
}

/// Edmonds-Karp on a dense matrix. Returns the flow value and the vertices
/// reachable from `s` in the final residual graph.
fn max_flow(cap: &[Vec<u32>], s: usize, t: usize, limit: usize) -> (usize, Vec<bool>) {
    let n = cap.len();
    let mut res: Vec<Vec<i64>> = cap.iter().map(|r| r.iter().map(|&c| c as i64).collect()).collect();
    let mut flow = 0usize;
    loop {
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for y in 0..n {
                if !seen[y] && res[x][y] > 0 {
                    seen[y] = true;
                    prev[y] = x;
                    q.push_back(y);
                }
            }
        }
        if !seen[t] || flow >= limit {
            return (flow, seen);
        }
        let mut bottleneck = i64::MAX;
        let mut y = t;
        while y != s {
            let x = prev[y];
            bottleneck = bottleneck.min(res[x][y]);
            y = x;
        }
        let mut y = t;
        while y != s {
            let x = prev[y];
            res[x][y] -= bottleneck;
            res[y][x] += bottleneck;
            y = x;
        }
        flow += bottleneck as usize;
    }
}

/// Global minimum cut by max-flow from the first vertex to every other one.
/// Multiplicities act as capacities. `None` when there are fewer than two
/// vertices.
pub fn min_cut(g: &Multigraph) -> Option<Cut> {
    let n = g.vertex_count();
    if n < 2 {
        return None;
    }
    let cap = capacity_matrix(g);
    let mut best: Option<(usize, Vec<bool>)> = None;
    for t in 1..n {
        let limit = best.as_ref().map_or(usize::MAX, |b| b.0);
        let (value, side) = max_flow(&cap, 0, t, limit);
        if best.as_ref().is_none_or(|b| value < b.0) {
            let zero = value == 0;
            best = Some((value, side));
            if zero {
                break;
            }
        }
    }
    let (value, side) = best.expect("n >= 2");
    Some(Cut {
        value,
        side: g
            .vertices()
            .iter()
            .zip(side)
            .filter(|(_, s)| *s)
            .map(|(&v, _)| v)
            .collect(),
    })
}

/// Edge-connectivity counting multiplicities; 0 for disconnected graphs and
/// for graphs with fewer than two vertices.
pub fn edge_connectivity(g: &Multigraph) -> usize {
    min_cut(g).map_or(0, |c| c.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute_force(g: &Multigraph) -> usize {
        let n = g.vertex_count();
        (1u32..(1 << (n - 1)))
            .map(|mask| {
                // vertex 0 always outside, so every proper bipartition appears once
                let side: BTreeSet<_> = (1..n).filter(|i| mask >> (i - 1) & 1 == 1).map(|i| g.vertices()[i]).collect();
                g.cut_size(&side)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn examples() {
        let c5 = Multigraph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(edge_connectivity(&c5), 2);
        let fat = Multigraph::from_pairs(2, &[(0, 1); 4]).unwrap();
        assert_eq!(edge_connectivity(&fat), 4);
        let k4 = Multigraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(brute_force(&k4), 3);
        assert_eq!(edge_connectivity(&k4), 3);
    }

    #[test]
    fn degenerate_graphs() {
        let single = Multigraph::from_pairs(1, &[]).unwrap();
        assert_eq!(edge_connectivity(&single), 0);
        let split = Multigraph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        let cut = min_cut(&split).unwrap();
        assert_eq!(cut.value, 0);
        assert_eq!(cut.side, vec![0, 1]);
    }

    #[test]
    fn cut_side_realises_value() {
        let g = Multigraph::from_pairs(
            6,
            &[(0, 1), (0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (3, 4)],
        )
        .unwrap();
        let cut = min_cut(&g).unwrap();
        assert_eq!(cut.value, 1);
        assert_eq!(cut.value, brute_force(&g));
        let side: BTreeSet<_> = cut.side.iter().copied().collect();
        assert_eq!(g.cut_size(&side), cut.value);
    }
}
