//! Cover constructions: the per-stage builders and the full pipeline for
//! 3-edge-colorable cubic signed graphs.
//!
//! Every constructor returns a cover that passes [`validate_cover`] for its
//! declared target and certifies its length bound at runtime with exact
//! integer arithmetic. A missed bound is an error carrying the failed check,
//! never a silent degradation.
//!
//! [`validate_cover`]: crate::graph::validate_cover

use std::fmt;

use thiserror::Error;

use crate::coloring::{ColoringError, EdgeColoring3};
use crate::graph::{EdgeId, GraphError};
use crate::tjoin::TJoinError;

mod barbell;
mod pipeline;
mod tech1;
mod two_factor;

pub use barbell::{cycle_tree_cover, paired_barbell_cover, positive_blocks_cover};
pub use pipeline::{
    build_cycle_tree, cover_3ec_cubic, find_disjoint_unbalanced_barbell,
    strip_balanced_bridge_components, CoverOptions,
};
pub use tech1::{
    minimal_cosegment_cover, off_circuit_components, segment_decomposition, tech1_cover,
    Cosegment, CosegmentCover, OffCircuitComponent, Segment, SegmentDecomposition, Tech1Case,
};
pub use two_factor::two_factor_cover;

/// One runtime bound assertion, stated as `scale * length <= bound` in
/// integer arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub label: String,
    pub length: usize,
    pub scale: u64,
    pub bound: u64,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.length as u64 * self.scale <= self.bound
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}*{} = {} {} {}",
            self.label,
            self.scale,
            self.length,
            self.length as u64 * self.scale,
            if self.holds() { "<=" } else { ">" },
            self.bound
        )
    }
}

/// Accumulates asserted bounds and free-form notes while a cover is built.
#[derive(Debug, Clone, Default)]
pub struct TraceLog {
    pub checks: Vec<BoundCheck>,
    pub notes: Vec<String>,
}

impl TraceLog {
    pub fn new() -> TraceLog {
        TraceLog::default()
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records the check and fails the build if it does not hold.
    pub fn check(
        &mut self,
        label: impl Into<String>,
        length: usize,
        scale: u64,
        bound: u64,
    ) -> Result<(), CoverBuildError> {
        let check = BoundCheck {
            label: label.into(),
            length,
            scale,
            bound,
        };
        self.checks.push(check.clone());
        if check.holds() {
            Ok(())
        } else {
            Err(CoverBuildError::BoundViolation { check })
        }
    }

    pub fn checks_labeled<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a BoundCheck> {
        self.checks.iter().filter(move |c| c.label == label)
    }
}

/// Which branch of the case analysis produced the cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    /// The first two-factor has an unbalanced circuit.
    Case1,
    /// All first-two-factor circuits balanced; a second pair has an even
    /// number of unbalanced circuits.
    Case21,
    /// Exactly one unbalanced circuit in the second pair, covered by a
    /// disjoint barbell.
    Case22Barbell,
    /// Exactly one unbalanced circuit; the rest of the graph is balanced and
    /// the segment construction covers it (sub-case 1 or 2).
    Case22Tech1(Tech1Case),
    /// Both remaining pairs have an odd number (>= 3) of unbalanced
    /// circuits; covered through a cycle-tree.
    Case23,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::Case1 => write!(f, "1"),
            CaseLabel::Case21 => write!(f, "2.1"),
            CaseLabel::Case22Barbell => write!(f, "2.2a"),
            CaseLabel::Case22Tech1(Tech1Case::ThreeNegativeSegments) => write!(f, "2.2b(1)"),
            CaseLabel::Case22Tech1(Tech1Case::CosegmentCover) => write!(f, "2.2b(2)"),
            CaseLabel::Case23 => write!(f, "2.3"),
        }
    }
}

/// Full audit record of one pipeline run: the case taken, the coloring used,
/// every asserted bound, and the achieved length.
#[derive(Debug, Clone)]
pub struct BuildTrace {
    pub case: CaseLabel,
    pub coloring: EdgeColoring3,
    pub log: TraceLog,
    pub achieved_length: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverBuildError {
    #[error("graph is not cubic")]
    NotCubic,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not 2-edge-connected (bridge {bridge})")]
    NotTwoEdgeConnected { bridge: EdgeId },
    #[error("graph is not flow-admissible: {reason}")]
    NotFlowAdmissible { reason: String },
    #[error("graph admits no proper 3-edge coloring")]
    NotColorable,
    #[error("supplied coloring is not a proper 3-edge coloring")]
    InvalidColoring,
    #[error("coloring search failed: {0}")]
    ColoringSearch(#[from] ColoringError),
    #[error("two-factor carries an odd number of negative edges")]
    OddNegativeTwoFactor,
    #[error("must-cover edge {edge} lies outside the forest blocks")]
    MustCoverOutsideBlocks { edge: EdgeId },
    #[error("bridgeless-blocks are not circuits: {detail}")]
    BlocksNotCircuits { detail: String },
    #[error("union of blocks carries an odd number of negative edges")]
    NotPositiveUnion,
    #[error("forest component {component} has a single unbalanced block; no pairing exists")]
    OddUnbalancedBlocks { component: usize },
    #[error("{count} unbalanced blocks exceed the exact pairing limit of 20")]
    TooManyUnbalancedBlocks { count: usize },
    #[error("cycle-tree has a bridge {bridge} with a balanced side")]
    BadBridge { bridge: EdgeId },
    #[error("cycle-tree contains no unbalanced circuit; nothing would remain after stripping")]
    AllBlocksBalanced,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("component {component} has no attachment on the circuit")]
    NoAttachment { component: usize },
    #[error("component {component} determines {count} negative segments (odd expected)")]
    SegmentParity { component: usize, count: usize },
    #[error("cosegments miss edge {edge}; host cannot be flow-admissible")]
    CosegmentsDontCover { edge: EdgeId },
    #[error("structural claim violated: {0}")]
    ClaimViolation(String),
    #[error("bound violated: {check}")]
    BoundViolation { check: BoundCheck },
    #[error("t-join failed: {0}")]
    TJoin(#[from] TJoinError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal error: {0}")]
    Internal(String),
}

pub(crate) fn internal(msg: impl Into<String>) -> CoverBuildError {
    CoverBuildError::Internal(msg.into())
}
