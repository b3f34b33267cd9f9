//! Explicit subset sums for unions of linear bases whose vectors have at
//! most two non-zero entries.
//!
//! The construction peels off one coordinate when some row has at least
//! `p-1` single-entry vectors, and otherwise contracts a highly connected
//! block of the graph formed by vectors sharing one two-element shadow.
//! Every level is checked by re-summation. When the construction gets stuck
//! (possible below the proven thresholds) the exact subset-sum oracle takes
//! over and the answer is labelled as a fallback.

mod trace;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::field::{cd_represent, FieldError, Modulus};
use crate::flows::{solve_prescribed_degrees, FlowError};
use crate::graph::{choose_partition, mader_extract, Edge, EdgeSide, GraphError, Multigraph};
use crate::linear::{
    drop_last_row, independent_subset, BasisFamily, ColumnRef, GroupVec, LinearError, RowContraction, Shadow,
    SpaceKind,
};
use crate::oracle::{subset_sum, OracleConfig, OracleError};

pub use trace::{BuildTrace, TraceStep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vector {column} of basis {basis} has support of size {size}; at most 2 is supported")]
    UnsupportedSupportSize { basis: usize, column: usize, size: usize },
    #[error("target does not lie in the zero-sum subspace")]
    TargetNotZeroSum,
    #[error("target has dimension {found}, family has dimension {expected}")]
    TargetDimension { expected: usize, found: usize },
    #[error("the construction got stuck and the oracle was disabled")]
    ConstructionStuck,
    #[error("trace does not match the instance at step {0}")]
    TraceMismatch(usize),
}

/// How `represent` may answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Construction first, exact oracle when it gets stuck.
    #[default]
    Auto,
    /// Construction only; getting stuck is an error.
    ForceConstructive,
    /// Oracle only.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RepresentOptions {
    pub mode: Mode,
    pub oracle: OracleConfig,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representation {
    Constructive { subset: Vec<ColumnRef>, trace: BuildTrace },
    Fallback { subset: Vec<ColumnRef> },
    Infeasible,
}

impl Representation {
    pub fn subset(&self) -> Option<&[ColumnRef]> {
        match self {
            Representation::Constructive { subset, .. } | Representation::Fallback { subset } => Some(subset),
            Representation::Infeasible => None,
        }
    }

    pub fn is_constructive(&self) -> bool {
        matches!(self, Representation::Constructive { .. })
    }
}

/// `8l(3p-4) + p - 2` bases suffice when at most `l` two-element shadows
/// occur.
pub fn basis_count_threshold(p: u32, shadows: usize) -> usize {
    8 * shadows.max(1) * (3 * p as usize - 4) + p as usize - 2
}

/// The shadow-agnostic bound: `l = C(p, 2)`.
pub fn any_shadow_threshold(p: u32) -> usize {
    let p_ = p as usize;
    basis_count_threshold(p, p_ * (p_ - 1) / 2)
}

/// Bases of the zero-sum subspace needed: `4(p-1)(3p-4) + p - 2`.
pub fn zero_sum_threshold(p: u32) -> usize {
    let p_ = p as usize;
    4 * (p_ - 1) * (3 * p_ - 4) + p_ - 2
}

/// Whether `fam` has enough bases for the guarantee matching its kind.
pub fn meets_threshold(fam: &BasisFamily) -> bool {
    let p = fam.modulus().value();
    let need = match fam.kind() {
        SpaceKind::Full => basis_count_threshold(p, fam.shadow_count_size2()),
        SpaceKind::ZeroSum => zero_sum_threshold(p),
    };
    fam.len() >= need
}

#[derive(Debug, Clone)]
struct Column {
    id: ColumnRef,
    vec: GroupVec,
}

/// One recursion level: every basis holds exactly `dim` independent columns.
struct Level {
    dim: usize,
    bases: Vec<Vec<Column>>,
}

impl Level {
    fn columns(&self) -> impl Iterator<Item = &Column> {
        self.bases.iter().flatten()
    }

    fn sum(&self, modulus: Modulus, refs: &[ColumnRef]) -> GroupVec {
        let lookup: HashMap<ColumnRef, &GroupVec> = self.columns().map(|c| (c.id, &c.vec)).collect();
        refs.iter()
            .fold(GroupVec::zero(modulus, self.dim), |acc, r| acc.add(lookup[r]))
    }

    /// Keeps the earliest independent columns of each matrix. Every matrix
    /// must still have rank `dim`.
    fn extract(dim: usize, matrices: Vec<Vec<Column>>) -> Level {
        let bases = matrices
            .into_iter()
            .map(|cols| {
                let nonzero: Vec<Column> = cols.into_iter().filter(|c| !c.vec.is_zero()).collect();
                let vecs: Vec<GroupVec> = nonzero.iter().map(|c| c.vec.clone()).collect();
                let keep = independent_subset(&vecs);
                assert_eq!(keep.len(), dim, "reduced matrix lost rank");
                keep.into_iter().map(|i| nonzero[i].clone()).collect()
            })
            .collect();
        Level { dim, bases }
    }
}

struct Builder<'a> {
    p: Modulus,
    steps: Vec<TraceStep>,
    replay: Option<&'a [TraceStep]>,
    cursor: usize,
}

impl Builder<'_> {
    fn build(&mut self, level: &Level, beta: &GroupVec, depth: usize) -> Result<Option<Vec<ColumnRef>>, BuildError> {
        let mark = self.steps.len();
        let out = match self.next_replayed()? {
            Some(step) => self.follow(step, level, beta, depth)?,
            None if level.dim == 1 => self.base_case(level, beta, depth)?,
            None => self.search(level, beta, depth)?,
        };
        match &out {
            Some(subset) => assert_eq!(&level.sum(self.p, subset), beta, "level {depth} re-sum failed"),
            None => self.steps.truncate(mark),
        }
        Ok(out.map(|mut s| {
            s.sort_unstable();
            s
        }))
    }

    fn next_replayed(&mut self) -> Result<Option<TraceStep>, BuildError> {
        let Some(steps) = self.replay else {
            return Ok(None);
        };
        let step = steps.get(self.cursor).cloned().ok_or(BuildError::TraceMismatch(self.cursor))?;
        self.cursor += 1;
        Ok(Some(step))
    }

    fn follow(
        &mut self,
        step: TraceStep,
        level: &Level,
        beta: &GroupVec,
        depth: usize,
    ) -> Result<Option<Vec<ColumnRef>>, BuildError> {
        let at = self.cursor - 1;
        let bad = || BuildError::TraceMismatch(at);
        if step.depth() != depth {
            return Err(bad());
        }
        match step {
            TraceStep::BaseCase { .. } if level.dim == 1 => self.base_case(level, beta, depth),
            TraceStep::IVector { row, .. } if row < level.dim && level.dim > 1 => {
                self.i_vector_case(level, beta, depth, row)
            }
            TraceStep::ShadowGraph { shadow, x1, mader, .. } if level.dim > 1 => {
                let x1: BTreeSet<usize> = x1.into_iter().collect();
                if shadow.len() != 2 || mader.len() < 2 || mader.iter().any(|&r| r >= level.dim) {
                    return Err(bad());
                }
                self.shadow_case(level, beta, depth, &shadow, Some((x1, mader)))
            }
            _ => Err(bad()),
        }
    }

    fn base_case(&mut self, level: &Level, beta: &GroupVec, depth: usize) -> Result<Option<Vec<ColumnRef>>, BuildError> {
        let cols: Vec<&Column> = level.columns().collect();
        let elems: Vec<_> = cols.iter().map(|c| c.vec.residue(0)).collect();
        self.steps.push(TraceStep::BaseCase { depth });
        Ok(cd_represent(&elems, beta.residue(0))?.map(|idx| idx.into_iter().map(|i| cols[i].id).collect()))
    }

    fn search(&mut self, level: &Level, beta: &GroupVec, depth: usize) -> Result<Option<Vec<ColumnRef>>, BuildError> {
        let need = self.p.value() as usize - 1;
        let row = (0..level.dim).find(|&i| level.columns().filter(|c| is_i_vector(&c.vec, i)).count() >= need);
        if let Some(i) = row {
            if let Some(out) = self.i_vector_case(level, beta, depth, i)? {
                return Ok(Some(out));
            }
        }
        let mut classes: BTreeMap<Shadow, usize> = BTreeMap::new();
        for c in level.columns().filter(|c| c.vec.support_size() == 2) {
            *classes.entry(c.vec.shadow()).or_default() += 1;
        }
        let mut ordered: Vec<(Shadow, usize)> = classes.into_iter().collect();
        ordered.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        for (shadow, _) in ordered {
            if let Some(out) = self.shadow_case(level, beta, depth, &shadow, None)? {
                return Ok(Some(out));
            }
        }
        Ok(None)
    }

    /// Drops row `i` and the single-entry vectors on it, solves the rest,
    /// then fixes coordinate `i` with the dropped vectors.
    fn i_vector_case(
        &mut self,
        level: &Level,
        beta: &GroupVec,
        depth: usize,
        i: usize,
    ) -> Result<Option<Vec<ColumnRef>>, BuildError> {
        let singles: Vec<&Column> = level.columns().filter(|c| is_i_vector(&c.vec, i)).collect();
        self.steps.push(TraceStep::IVector { depth, row: i, count: singles.len() });
        let matrices = level
            .bases
            .iter()
            .map(|b| {
                b.iter()
                    .filter(|c| !is_i_vector(&c.vec, i))
                    .map(|c| Column { id: c.id, vec: c.vec.delete_row(i) })
                    .collect()
            })
            .collect();
        let sub = Level::extract(level.dim - 1, matrices);
        let Some(mut found) = self.build(&sub, &beta.delete_row(i), depth + 1)? else {
            return Ok(None);
        };
        let reached = level.sum(self.p, &found);
        let gap = self.p.residue(beta.get(i) as i64 - reached.get(i) as i64);
        let elems: Vec<_> = singles.iter().map(|c| c.vec.residue(i)).collect();
        let Some(fix) = cd_represent(&elems, gap)? else {
            return Ok(None);
        };
        found.extend(fix.into_iter().map(|k| singles[k].id));
        Ok(Some(found))
    }

    /// Scales the rows of a highly connected block of the shadow graph so its
    /// edges read `(1, -1)`, contracts the block to one row, solves the
    /// smaller instance and repairs the block with a degree-prescribed
    /// subgraph of its edges.
    fn shadow_case(
        &mut self,
        level: &Level,
        beta: &GroupVec,
        depth: usize,
        shadow: &Shadow,
        given: Option<(BTreeSet<usize>, Vec<usize>)>,
    ) -> Result<Option<Vec<ColumnRef>>, BuildError> {
        let p = self.p;
        let (a1, a2) = (shadow.values()[0], shadow.values()[1]);
        let class: Vec<&Column> = level
            .columns()
            .filter(|c| c.vec.support_size() == 2 && &c.vec.shadow() == shadow)
            .collect();
        let mut edges = Vec::with_capacity(class.len());
        let mut sides = Vec::with_capacity(class.len());
        for (k, c) in class.iter().enumerate() {
            let [(i, x), (j, _)] = [c.vec.entries()[0], c.vec.entries()[1]];
            edges.push(Edge { id: k, u: i, v: j });
            sides.push(if a1 == a2 {
                EdgeSide::Either
            } else if x == a1 {
                EdgeSide::X1At(i)
            } else {
                EdgeSide::X1At(j)
            });
        }
        let g = Multigraph::new((0..level.dim).collect(), edges)?;
        let (v1, block) = match given {
            Some(g) => g,
            None => {
                let part = choose_partition(&g, &sides);
                let selected: BTreeSet<usize> = part.selected.iter().copied().collect();
                let Some(block) = mader_extract(&g.edge_subgraph(&selected), 3 * p.value() as usize - 4) else {
                    return Ok(None);
                };
                (part.x1.into_iter().collect(), block)
            }
        };
        let in_block: BTreeSet<usize> = block.iter().copied().collect();
        let selected: BTreeSet<usize> = g
            .edges()
            .iter()
            .zip(&sides)
            .filter(|(e, side)| match side {
                EdgeSide::X1At(r) => v1.contains(r) && !v1.contains(&e.other(*r)),
                EdgeSide::Either => v1.contains(&e.u) != v1.contains(&e.v),
            })
            .map(|(e, _)| e.id)
            .collect();
        let h = g.edge_subgraph(&selected).induced(&block);

        let f1 = p.inv(a1).expect("non-zero shadow entry");
        let f2 = p.neg(p.inv(a2).expect("non-zero shadow entry"));
        let mut factors = vec![1u32; level.dim];
        for &r in &block {
            factors[r] = if v1.contains(&r) { f1 } else { f2 };
        }
        let scaled_beta = beta.scale_rows(&factors);
        let scaled: Vec<Vec<Column>> = level
            .bases
            .iter()
            .map(|b| b.iter().map(|c| Column { id: c.id, vec: c.vec.scale_rows(&factors) }).collect())
            .collect();
        for e in h.edges() {
            let (one, two) = if v1.contains(&e.u) { (e.u, e.v) } else { (e.v, e.u) };
            let v = class[e.id].vec.scale_rows(&factors);
            assert_eq!((v.get(one), v.get(two)), (1, p.neg(1)), "block edge not normalised");
        }

        let contraction = RowContraction::new(level.dim, &in_block)?;
        let matrices = scaled
            .iter()
            .map(|b| b.iter().map(|c| Column { id: c.id, vec: contraction.apply(&c.vec) }).collect())
            .collect();
        let sub = Level::extract(contraction.new_dim, matrices);
        let at = self.steps.len();
        self.steps.push(TraceStep::ShadowGraph {
            depth,
            shadow: shadow.clone(),
            x1: v1.iter().copied().collect(),
            x2: (0..level.dim).filter(|r| !v1.contains(r)).collect(),
            mader: block.clone(),
            contraction: contraction.map.clone(),
            repair: Vec::new(),
        });
        let Some(mut found) = self.build(&sub, &contraction.apply(&scaled_beta), depth + 1)? else {
            return Ok(None);
        };

        let scaled_level = Level { dim: level.dim, bases: scaled };
        let reached = scaled_level.sum(p, &found);
        let side_one: BTreeSet<usize> = block.iter().copied().filter(|r| v1.contains(r)).collect();
        let prescribed: BTreeMap<usize, i64> = block
            .iter()
            .map(|&r| {
                let gap = p.sub(scaled_beta.get(r), reached.get(r));
                (r, if side_one.contains(&r) { gap } else { p.neg(gap) } as i64)
            })
            .collect();
        let Some(chosen) = solve_prescribed_degrees(&h, &side_one, p, &prescribed)? else {
            return Ok(None);
        };
        let mut repair: Vec<ColumnRef> = chosen.into_iter().map(|k| class[k].id).collect();
        repair.sort_unstable();
        if let TraceStep::ShadowGraph { repair: slot, .. } = &mut self.steps[at] {
            *slot = repair.clone();
        }
        found.extend(repair);
        Ok(Some(found))
    }
}

fn is_i_vector(v: &GroupVec, i: usize) -> bool {
    v.support_size() == 1 && v.entries()[0].0 == i
}

fn check_inputs(fam: &BasisFamily, beta: &GroupVec) -> Result<(), BuildError> {
    if beta.dim() != fam.dim() {
        return Err(BuildError::TargetDimension { expected: fam.dim(), found: beta.dim() });
    }
    if beta.modulus() != fam.modulus() {
        return Err(FieldError::ModulusMismatch(fam.modulus().value(), beta.modulus().value()).into());
    }
    if let Some((r, v)) = fam.union().find(|(_, v)| v.support_size() > 2) {
        return Err(BuildError::UnsupportedSupportSize {
            basis: r.basis,
            column: r.column,
            size: v.support_size(),
        });
    }
    Ok(())
}

fn initial_level(fam: &BasisFamily) -> Level {
    Level {
        dim: fam.dim(),
        bases: fam
            .bases()
            .iter()
            .enumerate()
            .map(|(s, b)| {
                b.iter()
                    .enumerate()
                    .map(|(c, v)| Column { id: ColumnRef { basis: s, column: c }, vec: v.clone() })
                    .collect()
            })
            .collect(),
    }
}

fn oracle(fam: &BasisFamily, beta: &GroupVec, config: &OracleConfig) -> Result<Representation, BuildError> {
    let (refs, vecs): (Vec<ColumnRef>, Vec<GroupVec>) = fam.union().map(|(r, v)| (r, v.clone())).unzip();
    Ok(match subset_sum(&vecs, beta, config)? {
        Some(idx) => Representation::Fallback { subset: idx.into_iter().map(|i| refs[i]).collect() },
        None => Representation::Infeasible,
    })
}

/// A subset of the union of `fam` summing to `beta`.
pub fn represent(fam: &BasisFamily, beta: &GroupVec, options: &RepresentOptions) -> Result<Representation, BuildError> {
    if fam.kind() != SpaceKind::Full {
        return Err(LinearError::WrongSpaceKind { expected: SpaceKind::Full }.into());
    }
    check_inputs(fam, beta)?;
    let out = if options.mode == Mode::Oracle {
        oracle(fam, beta, &options.oracle)?
    } else {
        let mut b = Builder { p: fam.modulus(), steps: Vec::new(), replay: None, cursor: 0 };
        match b.build(&initial_level(fam), beta, 0)? {
            Some(subset) => Representation::Constructive { subset, trace: BuildTrace { steps: b.steps } },
            None if options.mode == Mode::ForceConstructive => return Err(BuildError::ConstructionStuck),
            None => oracle(fam, beta, &options.oracle)?,
        }
    };
    if let Some(s) = out.subset() {
        assert_eq!(&fam.sum_of(s), beta, "returned subset does not re-sum to the target");
    }
    Ok(out)
}

/// Re-runs the construction following `trace` instead of searching.
pub fn replay(fam: &BasisFamily, beta: &GroupVec, trace: &BuildTrace) -> Result<Vec<ColumnRef>, BuildError> {
    check_inputs(fam, beta)?;
    let mut b = Builder { p: fam.modulus(), steps: Vec::new(), replay: Some(&trace.steps), cursor: 0 };
    let out = b.build(&initial_level(fam), beta, 0)?.ok_or(BuildError::TraceMismatch(b.cursor))?;
    if b.cursor != trace.steps.len() || b.steps != trace.steps {
        return Err(BuildError::TraceMismatch(b.cursor));
    }
    Ok(out)
}

/// Representation over the zero-sum subspace: the last coordinate is
/// dropped, the remaining problem is solved in `Z_p^{n-1}`, and the chosen
/// columns sum to `beta` because every column sums to zero.
pub fn represent_zero_sum(
    fam: &BasisFamily,
    beta: &GroupVec,
    options: &RepresentOptions,
) -> Result<Representation, BuildError> {
    if fam.kind() != SpaceKind::ZeroSum {
        return Err(LinearError::WrongSpaceKind { expected: SpaceKind::ZeroSum }.into());
    }
    check_inputs(fam, beta)?;
    if beta.coordinate_sum() != 0 {
        return Err(BuildError::TargetNotZeroSum);
    }
    if fam.dim() <= 1 {
        return Ok(Representation::Constructive { subset: Vec::new(), trace: BuildTrace::default() });
    }
    let reduced = drop_last_row(fam)?;
    let out = represent(&reduced, &beta.delete_row(fam.dim() - 1), options)?;
    if let Some(s) = out.subset() {
        assert_eq!(&fam.sum_of(s), beta, "lifted subset does not sum to the target");
    }
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

    #[test]
    fn base_case() {
        let fam = BasisFamily::new(m(3), 1, SpaceKind::Full, vec![vec![v(3, &[1])], vec![v(3, &[2])]]).unwrap();
        let out = represent(&fam, &v(3, &[2]), &RepresentOptions::default()).unwrap();
        assert_eq!(out.subset().unwrap(), &[ColumnRef { basis: 1, column: 0 }]);
        assert!(out.is_constructive());
    }

    #[test]
    fn support_three_is_rejected() {
        let basis = vec![v(3, &[1, 1, 1]), v(3, &[0, 1, 0]), v(3, &[0, 0, 1])];
        let fam = BasisFamily::new(m(3), 3, SpaceKind::Full, vec![basis]).unwrap();
        let err = represent(&fam, &v(3, &[0, 0, 0]), &RepresentOptions::default()).unwrap_err();
        assert_eq!(err, BuildError::UnsupportedSupportSize { basis: 0, column: 0, size: 3 });
    }

    #[test]
    fn too_few_bases_fall_back_or_fail() {
        // one basis of Z_3^1 only reaches {0, 1}
        let fam = BasisFamily::new(m(3), 1, SpaceKind::Full, vec![vec![v(3, &[1])]]).unwrap();
        let out = represent(&fam, &v(3, &[2]), &RepresentOptions::default()).unwrap();
        assert_eq!(out, Representation::Infeasible);
        let force = RepresentOptions { mode: Mode::ForceConstructive, ..Default::default() };
        assert_eq!(represent(&fam, &v(3, &[2]), &force), Err(BuildError::ConstructionStuck));
    }

    #[test]
    fn i_vector_branch_and_replay() {
        // every basis is the identity: i-vectors everywhere
        let id = vec![v(3, &[1, 0]), v(3, &[0, 1])];
        let fam = BasisFamily::new(m(3), 2, SpaceKind::Full, vec![id.clone(), id]).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let target = v(3, &[a, b]);
                let out = represent(&fam, &target, &RepresentOptions::default()).unwrap();
                let Representation::Constructive { subset, trace } = out else { panic!() };
                assert!(matches!(trace.steps[0], TraceStep::IVector { row: 0, .. }));
                assert_eq!(replay(&fam, &target, &trace).unwrap(), subset);
            }
        }
    }

    #[test]
    fn shadow_branch() {
        // no single-entry vectors at all, one shadow {1,2}
        let basis = vec![v(5, &[1, 2]), v(5, &[2, 1])];
        let fam = BasisFamily::new(m(5), 2, SpaceKind::Full, vec![basis; 60]).unwrap();
        let out = represent(&fam, &v(5, &[3, 4]), &RepresentOptions::default()).unwrap();
        let Representation::Constructive { trace, .. } = &out else { panic!("{out:?}") };
        assert!(matches!(trace.steps[0], TraceStep::ShadowGraph { .. }));
    }

    #[test]
    fn zero_sum_examples() {
        let fam = BasisFamily::new(m(3), 2, SpaceKind::ZeroSum, vec![vec![v(3, &[1, 2])]; 4]).unwrap();
        let out = represent_zero_sum(&fam, &v(3, &[1, 2]), &RepresentOptions::default()).unwrap();
        assert_eq!(out.subset().unwrap().len(), 1);
        assert_eq!(
            represent_zero_sum(&fam, &v(3, &[1, 1]), &RepresentOptions::default()),
            Err(BuildError::TargetNotZeroSum)
        );
    }

    #[test]
    fn thresholds() {
        assert_eq!(basis_count_threshold(3, 1), 41);
        assert_eq!(any_shadow_threshold(3), 121);
        assert_eq!(any_shadow_threshold(5), 883);
        assert_eq!(any_shadow_threshold(5), basis_count_threshold(5, 10));
        assert_eq!(zero_sum_threshold(3), 41);
        assert_eq!(zero_sum_threshold(5), 179);
    }
}
