use std::collections::{BTreeMap, BTreeSet};

use super::{boundary_of_flow, solve_01_flow, Arc, Boundary, Digraph, FlowAssignment, FlowError};
use crate::field::Modulus;

/// Antisymmetric `Z_{2k+1}`-flow with values in `{1, ..., k}`.
///
/// Each arc is split into `k-1` parallel copies and a `{0,1}`-flow with
/// boundary `d^- - d^+` is sought there. Summing the copies gives values in
/// `{0, ..., k-1}` per arc, and adding one everywhere cancels the boundary.
/// `Ok(None)` means the split graph has no such `{0,1}`-flow; other
/// antisymmetric flows may still exist.
pub fn construct_asf(d: &Digraph, k: u32) -> Result<Option<FlowAssignment>, FlowError> {
    if k < 2 {
        return Err(FlowError::KTooSmall(k));
    }
    let m = Modulus::new(2 * k + 1)?;
    let copies = (k - 1) as usize;
    let mut split = Vec::with_capacity(d.arcs().len() * copies);
    let mut origin = Vec::with_capacity(split.capacity());
    for a in d.arcs() {
        for _ in 0..copies {
            split.push(Arc { id: split.len(), tail: a.tail, head: a.head });
            origin.push(a.id);
        }
    }
    let h = Digraph::new(d.vertices().to_vec(), split)?;
    let beta = Boundary::new(
        m,
        d.vertices()
            .iter()
            .map(|&v| (v, d.in_degree(v) as i64 - d.out_degree(v) as i64))
            .collect(),
    )?;
    let Some(f) = solve_01_flow(&h, &beta)? else {
        return Ok(None);
    };
    let mut g: BTreeMap<usize, i64> = d.arcs().iter().map(|a| (a.id, 1)).collect();
    for (copy, &orig) in origin.iter().enumerate() {
        *g.get_mut(&orig).expect("arc") += f.get(copy).expect("value per copy") as i64;
    }
    let flow = FlowAssignment::new(m, g);
    assert!(is_asf(d, &flow), "constructed flow is not antisymmetric");
    assert!(flow.values().values().all(|&x| (1..=k).contains(&x)));
    Ok(Some(flow))
}

/// A nowhere-zero flow (zero boundary) where no value occurs together with
/// its negative.
pub fn is_asf(d: &Digraph, f: &FlowAssignment) -> bool {
    let m = f.modulus();
    let Ok(b) = boundary_of_flow(d, f) else {
        return false;
    };
    if b.values().values().any(|&x| x != 0) {
        return false;
    }
    let used: BTreeSet<u32> = d.arcs().iter().filter_map(|a| f.get(a.id)).collect();
    !used.contains(&0) && used.iter().all(|&x| !used.contains(&m.neg(x)))
}

/// `ceil(6k / (k-1))`: connectivity guaranteeing a `Z_{2k+1}`-ASF.
pub fn asf_connectivity_threshold(k: u32) -> Option<usize> {
    (k >= 2).then(|| (6 * k as usize).div_ceil(k as usize - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycle() {
        let d = Digraph::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        let f = construct_asf(&d, 2).unwrap().unwrap();
        assert_eq!((f.get(0), f.get(1)), (Some(1), Some(1)));
        assert_eq!(f.modulus().value(), 5);
    }

    #[test]
    fn rejects_small_k() {
        let tri = Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(construct_asf(&tri, 1), Err(FlowError::KTooSmall(1)));
    }

    #[test]
    fn predicate() {
        let tri = Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let m = Modulus::new(5).unwrap();
        assert!(is_asf(&tri, &FlowAssignment::from_slice(m, &[2, 2, 2])));
        assert!(!is_asf(&tri, &FlowAssignment::from_slice(m, &[0, 0, 0])));
        assert!(!is_asf(&tri, &FlowAssignment::from_slice(m, &[1, 1, 2])));
        let d = Digraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        // zero boundary, but 1 and 4 are inverse
        assert!(!is_asf(&d, &FlowAssignment::from_slice(m, &[1, 4])));
    }

    #[test]
    fn connectivity_table() {
        let table: Vec<_> = [7u32, 4, 3, 2]
            .iter()
            .map(|&k| (asf_connectivity_threshold(k).unwrap(), 2 * k + 1))
            .collect();
        assert_eq!(table, vec![(7, 15), (8, 9), (9, 7), (12, 5)]);
        assert_eq!(asf_connectivity_threshold(1), None);
    }
}
