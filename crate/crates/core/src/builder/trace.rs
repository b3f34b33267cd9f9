use serde::{Deserialize, Serialize};

use crate::linear::{ColumnRef, Shadow};

/// One level of a construction, recorded before descending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum TraceStep {
    BaseCase {
        depth: usize,
    },
    IVector {
        depth: usize,
        row: usize,
        count: usize,
    },
    ShadowGraph {
        depth: usize,
        shadow: Shadow,
        /// Partition of the rows of this level.
        x1: Vec<usize>,
        x2: Vec<usize>,
        /// Rows of the highly connected block that got contracted.
        mader: Vec<usize>,
        /// New index of each row after contraction.
        contraction: Vec<usize>,
        /// Block edges used to repair the contracted coordinates.
        repair: Vec<ColumnRef>,
    },
}

impl TraceStep {
    pub fn depth(&self) -> usize {
        match self {
            TraceStep::BaseCase { depth } | TraceStep::IVector { depth, .. } | TraceStep::ShadowGraph { depth, .. } => {
                *depth
            }
        }
    }
}

/// The construction steps in the order they were taken (pre-order).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildTrace {
    pub steps: Vec<TraceStep>,
}

impl BuildTrace {
    /// Number of contracted blocks.
    pub fn contractions(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, TraceStep::ShadowGraph { .. })).count()
    }

    pub fn max_depth(&self) -> usize {
        self.steps.iter().map(TraceStep::depth).max().unwrap_or(0)
    }
}
