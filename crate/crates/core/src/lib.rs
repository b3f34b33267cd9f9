//! Exact solvers for additive bases of `Z_p^n` built from vectors with at
//! most two non-zero entries, and for the flow and orientation problems they
//! control: weighted `beta`-orientations, two-list flows, `{0,1}`-flows and
//! antisymmetric flows.

pub mod acceptance;
pub mod builder;
pub mod field;
pub mod flows;
pub mod gen;
pub mod graph;
pub mod io;
pub mod linear;
pub mod oracle;

pub use field::{FieldError, Modulus, Residue};
pub use linear::{BasisFamily, ColumnRef, GroupVec, Shadow, SpaceKind};
