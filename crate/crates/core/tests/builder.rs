use proptest::prelude::*;
use zpflow::builder::{replay, represent, represent_zero_sum, Mode, RepresentOptions, Representation};
use zpflow::gen::Gen;
use zpflow::oracle::{subset_sum, OracleConfig};
use zpflow::GroupVec;

fn target(g: &mut Gen, p: u32, n: usize) -> GroupVec {
    let m = zpflow::Modulus::new(p).unwrap();
    let xs: Vec<i64> = (0..n).map(|_| g.residue(m) as i64).collect();
    GroupVec::from_dense(m, &xs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Small families are below every threshold, so this checks that the
    /// verdict of the default mode is always the exact one.
    #[test]
    fn verdict_matches_oracle(seed in any::<u64>(), p in prop::sample::select(vec![3u32, 5]), n in 1usize..4, t in 1usize..6) {
        let mut g = Gen::new(seed);
        let shadows = if n == 1 { 0 } else { 1 };
        let fam = g.family(p, n, shadows, t, 0.4).unwrap();
        let beta = target(&mut g, p, n);
        let out = represent(&fam, &beta, &RepresentOptions::default()).unwrap();
        let vecs: Vec<GroupVec> = fam.union().map(|(_, v)| v.clone()).collect();
        let oracle = subset_sum(&vecs, &beta, &OracleConfig::default()).unwrap();
        prop_assert_eq!(out.subset().is_some(), oracle.is_some());
        if let Some(s) = out.subset() {
            prop_assert_eq!(fam.sum_of(s), beta.clone());
        }
        if let Representation::Constructive { subset, trace } = &out {
            prop_assert_eq!(&replay(&fam, &beta, trace).unwrap(), subset);
        }
    }

    #[test]
    fn large_families_are_constructive(seed in any::<u64>(), n in 2usize..4) {
        let mut g = Gen::new(seed);
        let fam = g.family(3, n, 1, 41, 0.25).unwrap();
        let beta = target(&mut g, 3, n);
        let opts = RepresentOptions { mode: Mode::ForceConstructive, ..Default::default() };
        let out = represent(&fam, &beta, &opts).unwrap();
        prop_assert!(out.is_constructive());
        prop_assert_eq!(fam.sum_of(out.subset().unwrap()), beta);
    }

    #[test]
    fn zero_sum_targets(seed in any::<u64>(), n in 2usize..4) {
        let mut g = Gen::new(seed);
        let fam = g.zero_sum_family(3, n, 41).unwrap();
        let mut beta = target(&mut g, 3, n).to_dense().into_iter().map(i64::from).collect::<Vec<_>>();
        let total: i64 = beta.iter().sum();
        beta[n - 1] -= total;
        let beta = GroupVec::from_dense(fam.modulus(), &beta);
        let out = represent_zero_sum(&fam, &beta, &RepresentOptions::default()).unwrap();
        prop_assert_eq!(fam.sum_of(out.subset().unwrap()), beta);
    }
}
