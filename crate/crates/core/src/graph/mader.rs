use super::{min_cut, Multigraph, VertexId};

/// Finds `X` with `|X| > 1` such that `G[X]` is `(k+1)`-edge-connected.
///
/// Splits along cuts of size at most `k`. A `(k+1)`-edge-connected induced
/// subgraph never straddles such a cut, and the sides of successive cuts are
/// disjoint, so exploring both sides is an exact search costing at most
/// `|V|` min-cut computations. `None` therefore means no such `X` exists.
///
/// The side explored first is one keeping `e(S) >= 2k(|S|-1) + 1`. Graphs
/// with average degree at least `4k` satisfy this at the root, and a cut of
/// at most `k` edges always leaves one side satisfying it, so above that
/// density the first branch already succeeds.
pub fn mader_extract(g: &Multigraph, k: usize) -> Option<Vec<VertexId>> {
    assert!(k >= 1, "k must be positive");
    search(g.clone(), k)
}

fn dense_enough(h: &Multigraph, k: usize) -> bool {
    let n = h.vertex_count();
    n >= 1 && h.edge_count() > 2 * k * (n - 1)
}

/// Repeatedly drops vertices of degree at most `k`: they cannot belong to a
/// `(k+1)`-edge-connected subgraph on two or more vertices.
fn prune(mut h: Multigraph, k: usize) -> Multigraph {
    loop {
        let degrees = h.degrees();
        let low: Vec<VertexId> = degrees.iter().filter(|(_, &d)| d <= k).map(|(&v, _)| v).collect();
        if low.is_empty() {
            return h;
        }
        let keep: Vec<VertexId> = h.vertices().iter().copied().filter(|v| !low.contains(v)).collect();
        h = h.induced(&keep);
    }
}

fn search(h: Multigraph, k: usize) -> Option<Vec<VertexId>> {
    let h = prune(h, k);
    if h.vertex_count() < 2 {
        return None;
    }
    let cut = min_cut(&h).expect("two or more vertices");
    if cut.value > k {
        return Some(h.vertices().to_vec());
    }
    let other: Vec<VertexId> = h
        .vertices()
        .iter()
        .copied()
        .filter(|v| !cut.side.contains(v))
        .collect();
    let degrees = h.degrees();
    let mut sides: Vec<(bool, usize, VertexId, Vec<VertexId>)> = [cut.side, other]
        .into_iter()
        .map(|s| {
            let sub = h.induced(&s);
            let total: usize = s.iter().map(|v| degrees[v]).sum();
            (dense_enough(&sub, k), total, s[0], s)
        })
        .collect();
    // dense side first, then larger total degree, then smallest vertex id
    sides.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
    sides.into_iter().find_map(|(_, _, _, s)| search(h.induced(&s), k))
}

#[cfg(test)]
mod tests {
    use super::super::edge_connectivity;
    use super::*;

    fn complete(n: usize) -> Multigraph {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Multigraph::from_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn examples() {
        let fat = Multigraph::from_pairs(2, &[(0, 1); 4]).unwrap();
        assert_eq!(mader_extract(&fat, 1), Some(vec![0, 1]));
        let k9 = complete(9);
        let x = mader_extract(&k9, 2).unwrap();
        assert!(x.len() > 1);
        assert!(edge_connectivity(&k9.induced(&x)) >= 3);
        let p3 = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(mader_extract(&p3, 1), None);
    }

    #[test]
    fn finds_dense_block_behind_sparse_part() {
        // K5 (4-edge-connected) hanging off a long path
        let mut pairs = vec![];
        for i in 0..5 {
            for j in i + 1..5 {
                pairs.push((i, j));
            }
        }
        for i in 4..9 {
            pairs.push((i, i + 1));
        }
        let g = Multigraph::from_pairs(10, &pairs).unwrap();
        assert_eq!(mader_extract(&g, 3), Some(vec![0, 1, 2, 3, 4]));
        assert_eq!(mader_extract(&g, 4), None);
    }

    #[test]
    fn cycle_is_two_edge_connected() {
        let c5 = Multigraph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(mader_extract(&c5, 1), Some(vec![0, 1, 2, 3, 4]));
        assert_eq!(mader_extract(&c5, 2), None);
    }
}
