use std::collections::{BTreeMap, BTreeSet};

use super::orient::BinaryProblem;
use super::FlowError;
use crate::field::Modulus;
use crate::graph::{EdgeId, Multigraph, VertexId};

/// Finds `H` with `d_H(v) = f(v) (mod k)` for every vertex of a bipartite
/// multigraph whose first side is `side_one`. Exact: `Ok(None)` means no
/// edge subset works.
pub fn solve_prescribed_degrees(
    g: &Multigraph,
    side_one: &BTreeSet<VertexId>,
    k: Modulus,
    f: &BTreeMap<VertexId, i64>,
) -> Result<Option<Vec<EdgeId>>, FlowError> {
    k.require_odd()?;
    for e in g.edges() {
        if side_one.contains(&e.u) == side_one.contains(&e.v) {
            return Err(FlowError::NotBipartite(e.id));
        }
    }
    let mut target = Vec::with_capacity(g.vertex_count());
    let (mut one, mut two) = (0, 0);
    for &v in g.vertices() {
        let x = k.reduce(*f.get(&v).ok_or(FlowError::MissingVertex(v))?);
        if side_one.contains(&v) {
            one = k.add(one, x);
        } else {
            two = k.add(two, x);
        }
        target.push(x);
    }
    if one != two {
        return Err(FlowError::UnbalancedPrescription);
    }
    let problem = BinaryProblem {
        modulus: k,
        vertex_count: g.vertex_count(),
        edges: g
            .edges()
            .iter()
            .map(|e| (g.index_of(e.u).expect("valid"), g.index_of(e.v).expect("valid"), [(0, 0), (1, 1)]))
            .collect(),
        target,
    };
    Ok(problem.solve().map(|choice| {
        g.edges()
            .iter()
            .zip(choice)
            .filter(|(_, c)| *c == 1)
            .map(|(e, _)| e.id)
            .collect()
    }))
}

/// `3k - 3`: connectivity guaranteeing every balanced prescription.
pub fn prescribed_degrees_threshold(k: u32) -> usize {
    3 * k as usize - 3
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Modulus {
        Modulus::new(3).unwrap()
    }

    #[test]
    fn examples() {
        let g = Multigraph::from_pairs(2, &[(0, 1); 3]).unwrap();
        let one = BTreeSet::from([0]);
        let h = solve_prescribed_degrees(&g, &one, k3(), &BTreeMap::from([(0, 2), (1, 2)]))
            .unwrap()
            .unwrap();
        assert_eq!(h.len(), 2);
        let zero = solve_prescribed_degrees(&g, &one, k3(), &BTreeMap::from([(0, 0), (1, 0)])).unwrap();
        assert_eq!(zero, Some(vec![]));

        let single = Multigraph::from_pairs(2, &[(0, 1)]).unwrap();
        let none = solve_prescribed_degrees(&single, &one, k3(), &BTreeMap::from([(0, 2), (1, 2)])).unwrap();
        assert_eq!(none, None);
    }

    #[test]
    fn errors() {
        let tri = Multigraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let f = BTreeMap::from([(0, 0), (1, 0), (2, 0)]);
        assert_eq!(
            solve_prescribed_degrees(&tri, &BTreeSet::from([0]), k3(), &f),
            Err(FlowError::NotBipartite(1))
        );
        let g = Multigraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(
            solve_prescribed_degrees(&g, &BTreeSet::from([0]), k3(), &BTreeMap::from([(0, 1), (1, 2)])),
            Err(FlowError::UnbalancedPrescription)
        );
        assert!(solve_prescribed_degrees(&g, &BTreeSet::from([0]), Modulus::new(4).unwrap(), &BTreeMap::new()).is_err());
    }

    #[test]
    fn threshold() {
        assert_eq!(prescribed_degrees_threshold(3), 6);
        assert_eq!(prescribed_degrees_threshold(5), 12);
    }
}
