//! Exact subset-sum over `Z_p^n` by reachability over all `p^n` group
//! elements. Used as a fallback solver and as ground truth in tests.

use thiserror::Error;

use crate::field::Modulus;
use crate::linear::GroupVec;

pub const DEFAULT_STATE_BUDGET: u64 = 10_000_000;
pub const STATE_BUDGET_ENV: &str = "ZPFLOW_STATE_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{states} group elements exceed the state budget of {budget}")]
    StateBudgetExceeded { states: u128, budget: u64 },
    #[error("vector {index} does not live in the target space")]
    SpaceMismatch { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub state_budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

impl OracleConfig {
    /// Default budget, overridden by `ZPFLOW_STATE_BUDGET` when it parses.
    pub fn from_env() -> Self {
        let state_budget = std::env::var(STATE_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_STATE_BUDGET);
        Self { state_budget }
    }
}

const UNREACHED: u32 = u32::MAX;

/// Reachability table over `Z_p^n`.
///
/// `first[s]` is the length of the shortest prefix of the items whose subset
/// sums reach `s`. Coordinate 0 is the most significant base-`p` digit, so
/// state order is lexicographic order on vectors.
#[derive(Debug, Clone)]
pub struct GroupStateTable {
    modulus: Modulus,
    dim: usize,
    weights: Vec<usize>,
    items: Vec<GroupVec>,
    first: Vec<u32>,
    reached: usize,
}

impl GroupStateTable {
    fn empty(modulus: Modulus, dim: usize, config: &OracleConfig) -> Result<Self, OracleError> {
        let states = (modulus.value() as u128).pow(dim as u32);
        if states > config.state_budget as u128 {
            return Err(OracleError::StateBudgetExceeded {
                states,
                budget: config.state_budget,
            });
        }
        let p = modulus.value() as usize;
        let mut weights = vec![1usize; dim];
        for j in (0..dim.saturating_sub(1)).rev() {
            weights[j] = weights[j + 1] * p;
        }
        let mut first = vec![UNREACHED; states as usize];
        first[0] = 0;
        Ok(Self {
            modulus,
            dim,
            weights,
            items: Vec::new(),
            first,
            reached: 1,
        })
    }

    /// Builds the full table for `items`.
    pub fn build(
        modulus: Modulus,
        dim: usize,
        items: &[GroupVec],
        config: &OracleConfig,
    ) -> Result<Self, OracleError> {
        let mut table = Self::empty(modulus, dim, config)?;
        table.extend(items, |_| false)?;
        Ok(table)
    }

    fn extend(
        &mut self,
        items: &[GroupVec],
        mut done: impl FnMut(&Self) -> bool,
    ) -> Result<(), OracleError> {
        for (index, v) in items.iter().enumerate() {
            if v.dim() != self.dim || v.modulus() != self.modulus {
                return Err(OracleError::SpaceMismatch { index });
            }
        }
        let total = self.first.len();
        let mut frontier: Vec<usize> = (0..total).filter(|&s| self.first[s] != UNREACHED).collect();
        for v in items {
            if done(self) || self.reached == total {
                self.items.push(v.clone());
                continue;
            }
            let label = self.items.len() as u32;
            let before = frontier.len();
            for k in 0..before {
                let ns = self.shift(frontier[k], v);
                if self.first[ns] == UNREACHED {
                    self.first[ns] = label + 1;
                    self.reached += 1;
                    frontier.push(ns);
                }
            }
            self.items.push(v.clone());
        }
        Ok(())
    }

    fn shift(&self, s: usize, v: &GroupVec) -> usize {
        let p = self.modulus.value() as usize;
        let mut out = s;
        for &(j, x) in v.entries() {
            let w = self.weights[j];
            let d = (s / w) % p;
            let nd = (d + x as usize) % p;
            out = out + nd * w - d * w;
        }
        out
    }

    fn unshift(&self, s: usize, v: &GroupVec) -> usize {
        self.shift(s, &v.scale(self.modulus.neg(1)))
    }

    pub fn encode(&self, x: &GroupVec) -> usize {
        x.entries().iter().map(|&(j, v)| v as usize * self.weights[j]).sum()
    }

    pub fn decode(&self, mut s: usize) -> GroupVec {
        let p = self.modulus.value() as usize;
        let mut dense = vec![0i64; self.dim];
        for j in (0..self.dim).rev() {
            dense[j] = (s % p) as i64;
            s /= p;
        }
        GroupVec::from_dense(self.modulus, &dense)
    }

    pub fn is_reachable(&self, target: &GroupVec) -> bool {
        self.first[self.encode(target)] != UNREACHED
    }

    pub fn reached_count(&self) -> usize {
        self.reached
    }

    pub fn state_count(&self) -> usize {
        self.first.len()
    }

    /// Indices (ascending) of a subset summing to `target`. The witness is
    /// forced once reachability is recorded by prefix: the last item used is
    /// always the one that first made the state reachable.
    pub fn witness(&self, target: &GroupVec) -> Option<Vec<usize>> {
        let mut s = self.encode(target);
        if self.first[s] == UNREACHED {
            return None;
        }
        let mut picked = Vec::new();
        while self.first[s] != 0 {
            let i = (self.first[s] - 1) as usize;
            picked.push(i);
            s = self.unshift(s, &self.items[i]);
        }
        picked.reverse();
        Some(picked)
    }

    fn states(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.first.iter().enumerate().map(|(s, &f)| (s, f != UNREACHED))
    }
}

/// Finds a sub-multiset of `vecs` summing to `target`, as ascending indices.
/// `Ok(None)` means no such subset exists.
pub fn subset_sum(
    vecs: &[GroupVec],
    target: &GroupVec,
    config: &OracleConfig,
) -> Result<Option<Vec<usize>>, OracleError> {
    let mut table = GroupStateTable::empty(target.modulus(), target.dim(), config)?;
    let goal = table.encode(target);
    table.extend(vecs, |t| t.first[goal] != UNREACHED)?;
    let out = table.witness(target);
    if let Some(idx) = &out {
        debug_assert_eq!(
            idx.iter()
                .fold(GroupVec::zero(target.modulus(), target.dim()), |a, &i| a.add(&vecs[i])),
            *target
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveBasisReport {
    /// Lexicographically least target that no subset reaches.
    pub missing: Option<GroupVec>,
    pub reached: usize,
    pub targets: usize,
}

impl AdditiveBasisReport {
    pub fn is_additive_basis(&self) -> bool {
        self.missing.is_none()
    }
}

/// Checks whether every element of `Z_p^n` (or only of the zero-sum
/// subspace, when `zero_sum` is set) is a subset sum of `vecs`.
pub fn is_additive_basis(
    modulus: Modulus,
    dim: usize,
    vecs: &[GroupVec],
    zero_sum: bool,
    config: &OracleConfig,
) -> Result<AdditiveBasisReport, OracleError> {
    let table = GroupStateTable::build(modulus, dim, vecs, config)?;
    let mut missing = None;
    let mut reached = 0;
    let mut targets = 0;
    for (s, ok) in table.states() {
        let x = table.decode(s);
        if zero_sum && x.coordinate_sum() != 0 {
            continue;
        }
        targets += 1;
        if ok {
            reached += 1;
        } else if missing.is_none() {
            missing = Some(x);
        }
    }
    Ok(AdditiveBasisReport {
        missing,
        reached,
        targets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn v(p: u32, xs: &[i64]) -> GroupVec {
        GroupVec::from_dense(m(p), xs)
    }

    fn naive(vecs: &[GroupVec], target: &GroupVec) -> bool {
        (0u64..1 << vecs.len()).any(|mask| {
            let s = vecs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(GroupVec::zero(target.modulus(), target.dim()), |a, (_, x)| a.add(x));
            s == *target
        })
    }

    #[test]
    fn subset_sum_examples() {
        let cfg = OracleConfig::default();
        let vecs = [v(3, &[1, 0]), v(3, &[0, 1])];
        assert_eq!(subset_sum(&vecs, &v(3, &[1, 1]), &cfg).unwrap(), Some(vec![0, 1]));
        assert_eq!(subset_sum(&vecs, &v(3, &[0, 0]), &cfg).unwrap(), Some(vec![]));
        assert_eq!(subset_sum(&[], &v(7, &[0, 0, 0]), &cfg).unwrap(), Some(vec![]));
        assert_eq!(subset_sum(&[v(3, &[1])], &v(3, &[2]), &cfg).unwrap(), None);
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = OracleConfig { state_budget: 8 };
        let err = subset_sum(&[], &v(3, &[0, 0]), &cfg).unwrap_err();
        assert_eq!(err, OracleError::StateBudgetExceeded { states: 9, budget: 8 });
    }

    #[test]
    fn additive_basis_examples() {
        let cfg = OracleConfig::default();
        let r = is_additive_basis(m(3), 1, &[v(3, &[1]), v(3, &[2])], false, &cfg).unwrap();
        assert!(r.is_additive_basis());
        let two_identities = [v(3, &[1, 0]), v(3, &[0, 1]), v(3, &[1, 0]), v(3, &[0, 1])];
        assert!(is_additive_basis(m(3), 2, &two_identities, false, &cfg)
            .unwrap()
            .is_additive_basis());
        let r = is_additive_basis(m(3), 1, &[v(3, &[1])], false, &cfg).unwrap();
        assert_eq!(r.missing, Some(v(3, &[2])));
        // zero-sum restriction: (1,2) alone reaches (0,0),(1,2) but misses (2,1)
        let r = is_additive_basis(m(3), 2, &[v(3, &[1, 2])], true, &cfg).unwrap();
        assert_eq!(r.targets, 3);
        assert_eq!(r.missing, Some(v(3, &[2, 1])));
    }

    #[test]
    fn agrees_with_enumeration() {
        let cfg = OracleConfig::default();
        // small deterministic LCG corpus
        let mut seed = 12345u64;
        let mut next = |k: u64| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) % k
        };
        for _ in 0..200 {
            let p = [3u32, 5][next(2) as usize];
            let dim = 1 + next(if p == 3 { 4 } else { 3 }) as usize;
            let count = next(13) as usize;
            let vecs: Vec<_> = (0..count)
                .map(|_| {
                    let xs: Vec<i64> = (0..dim).map(|_| next(p as u64) as i64).collect();
                    v(p, &xs)
                })
                .collect();
            let t: Vec<i64> = (0..dim).map(|_| next(p as u64) as i64).collect();
            let target = v(p, &t);
            let got = subset_sum(&vecs, &target, &cfg).unwrap();
            assert_eq!(got.is_some(), naive(&vecs, &target));
            if let Some(idx) = got {
                let s = idx.iter().fold(GroupVec::zero(m(p), dim), |a, &i| a.add(&vecs[i]));
                assert_eq!(s, target);
            }
        }
    }
}
