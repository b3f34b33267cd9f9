//! Sparse vectors over `Z_p^n`, families of linear bases, and the row
//! transforms (scaling, contraction, deletion) used by the basis builder.
//!
//! Coordinates are 0-based internally; file formats use 1-based indices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, Modulus, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("coordinate {0} given twice")]
    DuplicateIndex(usize),
    #[error("basis {basis} has {found} vectors, expected {expected}")]
    WrongBasisSize { basis: usize, expected: usize, found: usize },
    #[error("basis {0} is not linearly independent")]
    NotABasis(usize),
    #[error("vector {column} of basis {basis} does not sum to zero")]
    NotZeroSum { basis: usize, column: usize },
    #[error("scaling factor is zero")]
    ZeroScalar,
    #[error("row sets overlap")]
    OverlappingRows,
    #[error("contraction needs at least two rows, got {0}")]
    TooFewRows(usize),
    #[error("operation requires a {expected} family")]
    WrongSpaceKind { expected: SpaceKind },
}

/// A vector of `Z_p^n` stored as its non-zero entries, sorted by coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupVec {
    modulus: Modulus,
    dim: usize,
    entries: Vec<(usize, u32)>,
}

impl GroupVec {
    pub fn zero(modulus: Modulus, dim: usize) -> Self {
        Self {
            modulus,
            dim,
            entries: Vec::new(),
        }
    }

    pub fn from_dense(modulus: Modulus, values: &[i64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, modulus.reduce(v)))
            .filter(|&(_, v)| v != 0)
            .collect();
        Self {
            modulus,
            dim: values.len(),
            entries,
        }
    }

    /// Builds a vector from `(coordinate, value)` pairs; zero values are dropped.
    pub fn from_entries(
        modulus: Modulus,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, i64)>,
    ) -> Result<Self, LinearError> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, v) in entries {
            if i >= dim {
                return Err(LinearError::IndexOutOfRange { index: i, dim });
            }
            if !seen.insert(i) {
                return Err(LinearError::DuplicateIndex(i));
            }
            let v = modulus.reduce(v);
            if v != 0 {
                out.push((i, v));
            }
        }
        out.sort_unstable();
        Ok(Self {
            modulus,
            dim,
            entries: out,
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries
            .binary_search_by_key(&i, |&(j, _)| j)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0)
    }

    pub fn residue(&self, i: usize) -> Residue {
        self.modulus.residue(self.get(i) as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.iter().map(|&(i, _)| i).collect()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn shadow(&self) -> Shadow {
        Shadow::new(self.entries.iter().map(|&(_, v)| v).collect())
    }

    pub fn to_dense(&self) -> Vec<u32> {
        let mut out = vec![0; self.dim];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }

    pub fn coordinate_sum(&self) -> u32 {
        self.entries
            .iter()
            .fold(0, |acc, &(_, v)| self.modulus.add(acc, v))
    }

    pub fn add(&self, other: &GroupVec) -> GroupVec {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus;
        let dense: Vec<i64> = self
            .to_dense()
            .iter()
            .zip(other.to_dense())
            .map(|(&a, b)| m.add(a, b) as i64)
            .collect();
        GroupVec::from_dense(m, &dense)
    }

    pub fn sub(&self, other: &GroupVec) -> GroupVec {
        self.add(&other.scale(self.modulus.neg(1)))
    }

    pub fn scale(&self, c: u32) -> GroupVec {
        let m = self.modulus;
        GroupVec {
            modulus: m,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|&(i, v)| (i, m.mul(v, c)))
                .filter(|&(_, v)| v != 0)
                .collect(),
        }
    }

    /// Multiplies coordinate `i` by `factors[i]`.
    pub fn scale_rows(&self, factors: &[u32]) -> GroupVec {
        assert_eq!(factors.len(), self.dim);
        let m = self.modulus;
        GroupVec {
            modulus: m,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|&(i, v)| (i, m.mul(v, factors[i])))
                .filter(|&(_, v)| v != 0)
                .collect(),
        }
    }

    /// Sends coordinate `i` to `map[i]` in a space of dimension `new_dim`,
    /// summing coordinates that collide.
    pub fn remap(&self, map: &[usize], new_dim: usize) -> GroupVec {
        let m = self.modulus;
        let mut dense = vec![0u32; new_dim];
        for &(i, v) in &self.entries {
            let j = map[i];
            dense[j] = m.add(dense[j], v);
        }
        GroupVec {
            modulus: m,
            dim: new_dim,
            entries: dense
                .into_iter()
                .enumerate()
                .filter(|&(_, v)| v != 0)
                .collect(),
        }
    }

    /// Deletes coordinate `row`, shifting later coordinates down.
    pub fn delete_row(&self, row: usize) -> GroupVec {
        GroupVec {
            modulus: self.modulus,
            dim: self.dim - 1,
            entries: self
                .entries
                .iter()
                .filter(|&&(i, _)| i != row)
                .map(|&(i, v)| if i > row { (i - 1, v) } else { (i, v) })
                .collect(),
        }
    }
}

impl fmt::Display for GroupVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dense = self.to_dense();
        write!(f, "(")?;
        for (i, v) in dense.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Unordered multiset of the non-zero entries of a vector, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shadow(Vec<u32>);

impl Shadow {
    pub fn new(mut values: Vec<u32>) -> Self {
        values.sort_unstable();
        Shadow(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Shadow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    /// Bases of `Z_p^n` (n vectors each).
    Full,
    /// Bases of the zero-sum subspace `(Z_p^n)_0` (n-1 vectors each).
    ZeroSum,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Full => write!(f, "full"),
            SpaceKind::ZeroSum => write!(f, "zero-sum"),
        }
    }
}

/// Position of a column in a family: basis `basis`, vector `column`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColumnRef {
    pub basis: usize,
    pub column: usize,
}

/// An ordered list of linear bases over the same space. The union with
/// repetitions is the multiset whose subset sums we are after.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisFamily {
    modulus: Modulus,
    dim: usize,
    kind: SpaceKind,
    bases: Vec<Vec<GroupVec>>,
}

impl BasisFamily {
    /// Validates every basis against `kind` before accepting the family.
    pub fn new(
        modulus: Modulus,
        dim: usize,
        kind: SpaceKind,
        bases: Vec<Vec<GroupVec>>,
    ) -> Result<Self, LinearError> {
        let fam = Self {
            modulus,
            dim,
            kind,
            bases,
        };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<(), LinearError> {
        self.modulus.require_prime()?;
        let expected = match self.kind {
            SpaceKind::Full => self.dim,
            SpaceKind::ZeroSum => self.dim.saturating_sub(1),
        };
        for (s, basis) in self.bases.iter().enumerate() {
            if basis.len() != expected {
                return Err(LinearError::WrongBasisSize {
                    basis: s,
                    expected,
                    found: basis.len(),
                });
            }
            for (c, v) in basis.iter().enumerate() {
                if v.dim() != self.dim {
                    return Err(LinearError::DimensionMismatch {
                        expected: self.dim,
                        found: v.dim(),
                    });
                }
                if v.modulus() != self.modulus {
                    return Err(FieldError::ModulusMismatch(
                        self.modulus.value(),
                        v.modulus().value(),
                    )
                    .into());
                }
                if self.kind == SpaceKind::ZeroSum && v.coordinate_sum() != 0 {
                    return Err(LinearError::NotZeroSum { basis: s, column: c });
                }
            }
            if rank(basis) != expected {
                return Err(LinearError::NotABasis(s));
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn bases(&self) -> &[Vec<GroupVec>] {
        &self.bases
    }

    /// Number of bases `t`.
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn column(&self, r: ColumnRef) -> &GroupVec {
        &self.bases[r.basis][r.column]
    }

    /// The union with repetitions, in basis-then-column order.
    pub fn union(&self) -> impl Iterator<Item = (ColumnRef, &GroupVec)> + '_ {
        self.bases.iter().enumerate().flat_map(|(s, b)| {
            b.iter()
                .enumerate()
                .map(move |(c, v)| (ColumnRef { basis: s, column: c }, v))
        })
    }

    pub fn union_len(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    pub fn size2_shadows(&self) -> BTreeSet<Shadow> {
        self.union()
            .filter(|(_, v)| v.support_size() == 2)
            .map(|(_, v)| v.shadow())
            .collect()
    }

    /// Number of distinct shadows of size 2 in the union.
    pub fn shadow_count_size2(&self) -> usize {
        self.size2_shadows().len()
    }

    pub fn max_support(&self) -> usize {
        self.union().map(|(_, v)| v.support_size()).max().unwrap_or(0)
    }

    pub fn sum_of(&self, refs: &[ColumnRef]) -> GroupVec {
        refs.iter().fold(GroupVec::zero(self.modulus, self.dim), |acc, &r| {
            acc.add(self.column(r))
        })
    }

    fn map_columns(&self, dim: usize, kind: SpaceKind, f: impl Fn(&GroupVec) -> GroupVec) -> Self {
        Self {
            modulus: self.modulus,
            dim,
            kind,
            bases: self
                .bases
                .iter()
                .map(|b| b.iter().map(&f).collect())
                .collect(),
        }
    }
}

/// Dense Gaussian elimination over `Z_p`; returns the row-echelon rows.
fn echelon(vecs: &[GroupVec]) -> Vec<Vec<u32>> {
    let Some(first) = vecs.first() else {
        return Vec::new();
    };
    let m = first.modulus();
    debug_assert!(m.is_prime(), "elimination needs a prime modulus");
    let dim = first.dim();
    let mut rows: Vec<Vec<u32>> = vecs.iter().map(GroupVec::to_dense).collect();
    let mut rank = 0;
    for col in 0..dim {
        // pivot: lowest-index row with a non-zero entry in this column
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = m.inv(rows[rank][col]).expect("prime modulus");
        for x in rows[rank].iter_mut() {
            *x = m.mul(*x, inv);
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let c = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = m.sub(*x, m.mul(c, y));
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Rank over `Z_p` (the modulus must be prime).
pub fn rank(vecs: &[GroupVec]) -> usize {
    echelon(vecs).len()
}

pub fn is_linear_basis(vecs: &[GroupVec], dim: usize) -> Result<bool, LinearError> {
    for v in vecs {
        if v.dim() != dim {
            return Err(LinearError::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
    }
    Ok(vecs.len() == dim && rank(vecs) == dim)
}

/// Greedily keeps each vector that is independent of those kept before it.
/// Returns indices of a maximal independent subset, earliest columns first.
pub fn independent_subset(vecs: &[GroupVec]) -> Vec<usize> {
    let Some(first) = vecs.first() else {
        return Vec::new();
    };
    let m = first.modulus();
    let dim = first.dim();
    // reduced basis rows, each with its pivot column
    let mut pivots: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut kept = Vec::new();
    for (idx, v) in vecs.iter().enumerate() {
        let mut row = v.to_dense();
        for (pc, prow) in &pivots {
            let c = row[*pc];
            if c != 0 {
                for j in 0..dim {
                    row[j] = m.sub(row[j], m.mul(c, prow[j]));
                }
            }
        }
        if let Some(pc) = row.iter().position(|&x| x != 0) {
            let inv = m.inv(row[pc]).expect("prime modulus");
            for x in row.iter_mut() {
                *x = m.mul(*x, inv);
            }
            for (_, prow) in pivots.iter_mut() {
                let c = prow[pc];
                if c != 0 {
                    for j in 0..dim {
                        prow[j] = m.sub(prow[j], m.mul(c, row[j]));
                    }
                }
            }
            pivots.push((pc, row));
            kept.push(idx);
            if pivots.len() == dim {
                break;
            }
        }
    }
    kept
}

/// Multiplies the rows in `x1` by `a1^{-1}` and the rows in `x2` by
/// `-a2^{-1}`. A vector carrying `a1` on an `x1` row and `a2` on an `x2` row
/// comes out as `+1` / `-1`.
pub fn scale_rows(
    fam: &BasisFamily,
    x1: &[usize],
    x2: &[usize],
    a1: Residue,
    a2: Residue,
) -> Result<BasisFamily, LinearError> {
    if a1.is_zero() || a2.is_zero() {
        return Err(LinearError::ZeroScalar);
    }
    let m = fam.modulus;
    let f1 = a1.inverse()?.value();
    let f2 = m.neg(a2.inverse()?.value());
    let mut factors = vec![1u32; fam.dim];
    let mut seen = BTreeSet::new();
    for (rows, f) in [(x1, f1), (x2, f2)] {
        for &i in rows {
            if i >= fam.dim {
                return Err(LinearError::IndexOutOfRange { index: i, dim: fam.dim });
            }
            if !seen.insert(i) {
                return Err(LinearError::OverlappingRows);
            }
            factors[i] = f;
        }
    }
    Ok(fam.map_columns(fam.dim, fam.kind, |v| v.scale_rows(&factors)))
}

/// Where each row goes when a set of rows is contracted into one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowContraction {
    /// `map[i]` is the new index of old row `i`.
    pub map: Vec<usize>,
    pub new_dim: usize,
    /// Index of the summed row, placed where the smallest contracted row was.
    pub new_row: usize,
}

impl RowContraction {
    pub fn new(dim: usize, rows: &BTreeSet<usize>) -> Result<Self, LinearError> {
        if rows.len() < 2 {
            return Err(LinearError::TooFewRows(rows.len()));
        }
        if let Some(&bad) = rows.iter().find(|&&r| r >= dim) {
            return Err(LinearError::IndexOutOfRange { index: bad, dim });
        }
        let first = *rows.iter().next().expect("non-empty");
        let mut map = vec![0; dim];
        let mut next = 0;
        let mut new_row = 0;
        for (i, slot) in map.iter_mut().enumerate() {
            if i == first {
                new_row = next;
                *slot = next;
                next += 1;
            } else if !rows.contains(&i) {
                *slot = next;
                next += 1;
            }
        }
        for &r in rows {
            map[r] = new_row;
        }
        Ok(Self {
            map,
            new_dim: next,
            new_row,
        })
    }

    pub fn apply(&self, v: &GroupVec) -> GroupVec {
        v.remap(&self.map, self.new_dim)
    }
}

/// Result of contracting rows: matrices are rectangular (`n` columns in a
/// space of dimension `m`), so they are not validated as bases.
#[derive(Debug, Clone)]
pub struct ContractedFamily {
    pub modulus: Modulus,
    pub contraction: RowContraction,
    pub matrices: Vec<Vec<GroupVec>>,
    /// Columns that became zero.
    pub zero_columns: Vec<ColumnRef>,
}

impl ContractedFamily {
    pub fn dim(&self) -> usize {
        self.contraction.new_dim
    }
}

/// Replaces the rows in `rows` by their sum.
pub fn contract_rows(fam: &BasisFamily, rows: &BTreeSet<usize>) -> Result<ContractedFamily, LinearError> {
    let contraction = RowContraction::new(fam.dim, rows)?;
    let matrices: Vec<Vec<GroupVec>> = fam
        .bases
        .iter()
        .map(|b| b.iter().map(|v| contraction.apply(v)).collect())
        .collect();
    let zero_columns = matrices
        .iter()
        .enumerate()
        .flat_map(|(s, b)| {
            b.iter()
                .enumerate()
                .filter(|(_, v)| v.is_zero())
                .map(move |(c, _)| ColumnRef { basis: s, column: c })
        })
        .collect();
    Ok(ContractedFamily {
        modulus: fam.modulus,
        contraction,
        matrices,
        zero_columns,
    })
}

/// Deletes the last coordinate of every vector of a zero-sum family. Each
/// basis of `(Z_p^n)_0` becomes a basis of `Z_p^{n-1}`.
pub fn drop_last_row(fam: &BasisFamily) -> Result<BasisFamily, LinearError> {
    if fam.kind != SpaceKind::ZeroSum {
        return Err(LinearError::WrongSpaceKind {
            expected: SpaceKind::ZeroSum,
        });
    }
    let last = fam.dim.saturating_sub(1);
    let out = fam.map_columns(last, SpaceKind::Full, |v| v.delete_row(last));
    debug_assert!(out.validate().is_ok());
    Ok(out)
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

    /// Enumerates all `p^k` coefficient combinations of `vecs` and counts the
    /// distinct results: the span size is `p^rank`.
    fn span_size(p: u32, vecs: &[GroupVec]) -> usize {
        let dim = vecs[0].dim();
        let mut seen = BTreeSet::new();
        let total = (p as usize).pow(vecs.len() as u32);
        for mut code in 0..total {
            let mut acc = GroupVec::zero(m(p), dim);
            for x in vecs {
                acc = acc.add(&x.scale((code % p as usize) as u32));
                code /= p as usize;
            }
            seen.insert(acc.to_dense());
        }
        seen.len()
    }

    #[test]
    fn support_and_shadow_sizes_agree() {
        let x = v(5, &[0, 3, 0, 3, 1]);
        assert_eq!(x.support(), vec![1, 3, 4]);
        assert_eq!(x.shadow(), Shadow::new(vec![3, 1, 3]));
        assert_eq!(x.shadow().values(), &[1, 3, 3]);
        assert_eq!(x.support_size(), x.shadow().len());
    }

    #[test]
    fn from_entries_rejects_bad_input() {
        assert_eq!(
            GroupVec::from_entries(m(3), 2, [(2, 1)]),
            Err(LinearError::IndexOutOfRange { index: 2, dim: 2 })
        );
        assert_eq!(
            GroupVec::from_entries(m(3), 2, [(0, 1), (0, 2)]),
            Err(LinearError::DuplicateIndex(0))
        );
        assert!(GroupVec::from_entries(m(3), 2, [(1, 3)]).unwrap().is_zero());
    }

    #[test]
    fn basis_examples() {
        assert!(is_linear_basis(&[v(3, &[1, 0]), v(3, &[0, 1])], 2).unwrap());
        assert!(!is_linear_basis(&[v(3, &[1, 0]), v(3, &[2, 0])], 2).unwrap());
        let b = [v(3, &[1, 2]), v(3, &[0, 1])];
        assert_eq!(span_size(3, &b), 9);
        assert!(is_linear_basis(&b, 2).unwrap());
        assert_eq!(
            is_linear_basis(&[v(3, &[1, 0, 0])], 2),
            Err(LinearError::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[v(3, &[0, 0])]), 0);
        assert_eq!(rank(&[v(3, &[1, 0]), v(3, &[0, 1]), v(3, &[1, 1])]), 2);
        assert_eq!(rank(&[v(5, &[1, 2, 3])]), 1);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn independent_subset_prefers_earliest() {
        let vecs = [v(3, &[1, 1]), v(3, &[2, 2]), v(3, &[0, 1]), v(3, &[1, 0])];
        assert_eq!(independent_subset(&vecs), vec![0, 2]);
    }

    fn family(p: u32, dim: usize, bases: Vec<Vec<Vec<i64>>>) -> BasisFamily {
        BasisFamily::new(
            m(p),
            dim,
            SpaceKind::Full,
            bases
                .into_iter()
                .map(|b| b.iter().map(|x| v(p, x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn family_validation() {
        let err = BasisFamily::new(m(3), 2, SpaceKind::Full, vec![vec![v(3, &[1, 0]), v(3, &[2, 0])]]);
        assert_eq!(err, Err(LinearError::NotABasis(0)));
        let err = BasisFamily::new(m(3), 2, SpaceKind::Full, vec![vec![v(3, &[1, 0])]]);
        assert!(matches!(err, Err(LinearError::WrongBasisSize { .. })));
        let err = BasisFamily::new(m(9), 1, SpaceKind::Full, vec![]);
        assert!(matches!(err, Err(LinearError::Field(FieldError::NonPrimeModulus(9)))));
        let err = BasisFamily::new(m(3), 2, SpaceKind::ZeroSum, vec![vec![v(3, &[1, 1])]]);
        assert_eq!(err, Err(LinearError::NotZeroSum { basis: 0, column: 0 }));
        let fam = family(3, 2, vec![vec![vec![1, 1], vec![0, 1]], vec![vec![1, 2], vec![1, 0]]]);
        assert_eq!(fam.shadow_count_size2(), 2);
        assert_eq!(fam.union_len(), 4);
    }

    #[test]
    fn scale_rows_example() {
        let fam = family(3, 2, vec![vec![vec![2, 2], vec![0, 1]]]);
        let r = |x| m(3).residue(x);
        let scaled = scale_rows(&fam, &[0], &[1], r(2), r(2)).unwrap();
        assert_eq!(scaled.bases()[0][0].to_dense(), vec![1, 2]);
        assert!(is_linear_basis(&scaled.bases()[0], 2).unwrap());
        let empty = scale_rows(&fam, &[], &[], r(1), r(4 % 3)).unwrap();
        assert_eq!(empty, fam);
        assert_eq!(scale_rows(&fam, &[0], &[0], r(1), r(1)), Err(LinearError::OverlappingRows));
        assert_eq!(scale_rows(&fam, &[0], &[1], r(0), r(1)), Err(LinearError::ZeroScalar));
    }

    #[test]
    fn scale_rows_round_trip() {
        let fam = family(
            5,
            3,
            vec![vec![vec![1, 4, 0], vec![0, 2, 3], vec![0, 0, 1]]],
        );
        let r = |x| m(5).residue(x);
        let (a1, a2) = (r(3), r(2));
        let there = scale_rows(&fam, &[0, 2], &[1], a1, a2).unwrap();
        let back = scale_rows(&there, &[0, 2], &[1], a1.inverse().unwrap(), a2.inverse().unwrap()).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn contract_rows_examples() {
        let fam = family(3, 2, vec![vec![vec![1, 2], vec![0, 1]]]);
        let c = contract_rows(&fam, &BTreeSet::from([0, 1])).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.matrices[0][0].is_zero());
        assert_eq!(c.zero_columns, vec![ColumnRef { basis: 0, column: 0 }]);

        let fam = family(3, 3, vec![vec![vec![1, 0, 2], vec![0, 1, 0], vec![0, 0, 1]]]);
        let c = contract_rows(&fam, &BTreeSet::from([1, 2])).unwrap();
        assert_eq!(c.matrices[0][0].to_dense(), vec![1, 2]);
        assert_eq!(c.contraction.new_row, 1);
        assert!(matches!(
            contract_rows(&fam, &BTreeSet::from([1])),
            Err(LinearError::TooFewRows(1))
        ));
    }

    #[test]
    fn contraction_places_new_row_at_smallest_index() {
        let c = RowContraction::new(5, &BTreeSet::from([1, 3, 4])).unwrap();
        assert_eq!(c.map, vec![0, 1, 2, 1, 1]);
        assert_eq!(c.new_dim, 3);
        assert_eq!(c.new_row, 1);
    }

    #[test]
    fn drop_last_row_examples() {
        let zs = |p: u32, dim, b: Vec<Vec<i64>>| {
            BasisFamily::new(m(p), dim, SpaceKind::ZeroSum, vec![b.iter().map(|x| v(p, x)).collect()]).unwrap()
        };
        let d = drop_last_row(&zs(3, 2, vec![vec![1, 2]])).unwrap();
        assert_eq!(d.dim(), 1);
        assert_eq!(d.bases()[0][0].to_dense(), vec![1]);
        let d = drop_last_row(&zs(5, 3, vec![vec![1, 4, 0], vec![0, 2, 3]])).unwrap();
        assert_eq!(d.bases()[0][0].to_dense(), vec![1, 4]);
        assert_eq!(d.bases()[0][1].to_dense(), vec![0, 2]);
        assert_eq!(d.kind(), SpaceKind::Full);
        let full = family(3, 1, vec![vec![vec![1]]]);
        assert!(matches!(drop_last_row(&full), Err(LinearError::WrongSpaceKind { .. })));
    }
}
