use super::{check_modulus, Boundary, Digraph, EdgeWeighting, FlowError};
use crate::field::Modulus;
use crate::graph::EdgeId;
use crate::linear::GroupVec;
use crate::oracle::{subset_sum, OracleConfig};

fn arc_vector(d: &Digraph, m: Modulus, tail: usize, head: usize, w: u32) -> GroupVec {
    let g = d.underlying();
    let (i, j) = (g.index_of(tail).expect("valid"), g.index_of(head).expect("valid"));
    GroupVec::from_entries(m, g.vertex_count(), [(i, w as i64), (j, -(w as i64))]).expect("distinct endpoints")
}

/// One zero-sum vector per arc (in arc order): `f(e)` at the tail, `-f(e)`
/// at the head. Coordinates follow the sorted vertex list.
pub fn edge_vector_correspondence(d: &Digraph, f: &EdgeWeighting) -> Result<Vec<GroupVec>, FlowError> {
    let m = f.modulus();
    m.require_prime()?;
    f.require_nonzero(d.underlying())?;
    Ok(d
        .arcs()
        .iter()
        .map(|a| arc_vector(d, m, a.tail, a.head, f.get(a.id).expect("checked")))
        .collect())
}

/// The vectors of the arcs in `tree`; a spanning tree gives a linear basis
/// of the zero-sum subspace.
pub fn tree_basis(d: &Digraph, f: &EdgeWeighting, tree: &[EdgeId]) -> Result<Vec<GroupVec>, FlowError> {
    let all = edge_vector_correspondence(d, f)?;
    tree
        .iter()
        .map(|&id| {
            let i = d.arcs().iter().position(|a| a.id == id).ok_or(FlowError::MissingArcValue(id))?;
            Ok(all[i].clone())
        })
        .collect::<Result<_, FlowError>>()
}

/// `beta + sum(x_e)`: with `a_e = 2b_e - 1`, signs `a_e` summing to `beta`
/// become coefficients `b_e` in `{0,1}` on the vectors `2x_e`.
pub fn shifted_target(d: &Digraph, f: &EdgeWeighting, beta: &Boundary) -> Result<GroupVec, FlowError> {
    check_modulus(f.modulus(), beta.modulus())?;
    let m = beta.modulus();
    let base: Vec<i64> = d.vertices().iter().map(|&v| beta.get(v) as i64).collect();
    let start = GroupVec::from_dense(m, &base);
    Ok(edge_vector_correspondence(d, f)?.iter().fold(start, |acc, x| acc.add(x)))
}

/// Solves the `f`-weighted `beta`-orientation of the underlying graph of `d`
/// as a subset-sum over the vectors `2x_e`. Chosen arcs keep their direction.
pub fn orientation_via_subset_sum(
    d: &Digraph,
    f: &EdgeWeighting,
    beta: &Boundary,
    config: &OracleConfig,
) -> Result<Option<Digraph>, FlowError> {
    beta.check_against(d.underlying())?;
    let doubled: Vec<GroupVec> = edge_vector_correspondence(d, f)?.iter().map(|x| x.scale(2)).collect();
    let target = shifted_target(d, f, beta)?;
    let Some(chosen) = subset_sum(&doubled, &target, config)? else {
        return Ok(None);
    };
    let mut reversed = vec![true; d.arcs().len()];
    for i in chosen {
        reversed[i] = false;
    }
    let out = Digraph::from_orientation(&d.arc_graph(), &reversed);
    assert!(super::is_weighted_orientation(&out, f, beta));
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::rank;

    #[test]
    fn single_arc_vector() {
        let m = Modulus::new(5).unwrap();
        let d = Digraph::from_pairs(3, &[(0, 1)]).unwrap();
        let x = edge_vector_correspondence(&d, &EdgeWeighting::from_slice(m, &[2])).unwrap();
        assert_eq!(x[0].to_dense(), vec![2, 3, 0]);
    }

    #[test]
    fn spanning_tree_gives_zero_sum_basis() {
        let m = Modulus::new(3).unwrap();
        let d = Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let f = EdgeWeighting::constant(m, d.underlying().edges(), 1);
        let b = tree_basis(&d, &f, &[0, 1]).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(rank(&b), 2);
        assert!(b.iter().all(|x| x.coordinate_sum() == 0));
    }

    #[test]
    fn pipeline_finds_orientation() {
        let m = Modulus::new(3).unwrap();
        let d = Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let f = EdgeWeighting::constant(m, d.underlying().edges(), 1);
        let beta = Boundary::zero(m, &[0, 1, 2]);
        let out = orientation_via_subset_sum(&d, &f, &beta, &OracleConfig::default()).unwrap();
        assert!(out.is_some());
        let beta = Boundary::from_slice(m, &[1, 1, 1]).unwrap();
        // 1 = -2 (mod 3) would need both edges entering every vertex
        assert_eq!(orientation_via_subset_sum(&d, &f, &beta, &OracleConfig::default()).unwrap(), None);
    }
}
