//! The Leavitt path algebra `L(Q)`: normal forms under the Cuntz–Krieger
//! relations, the grading and involution, the finite stages of `L(Q)^0`
//! with their bimodules, and the inverting property of `ι_Q` and `κ_Q`.
//!
//! Words are written in composition order, so `αβ*` means `α ∘ β*`. Normal
//! monomials have the shape `q* p`: no arrow directly left of a ghost, and no
//! `γ_v* γ_v` for the special arrow `γ_v`, the first arrow leaving `v`.

mod inverting;
mod monomial;
mod rewrite;
mod stage;

use thiserror::Error;

pub use inverting::{verify_inverting, verify_iota_injective, InjectivityReport, InvertingReport, VertexInverse};
pub use monomial::{special_arrow, LeavittElement, LeavittMonomial};
pub use rewrite::{check_local_confluence, ConfluenceReport, CriticalPair, RewriteSystem, Rule, RuleKind, Word};
pub use stage::{
    bimodule_over, bimodule_stage, graded_basis, slice_basis, stage_algebra, verify_strongly_graded,
    BimoduleStage, DecompositionMethod, MonomialIndex, PairingReport, StageAlgebra, StrongGradingReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeavittError {
    #[error("vertex `{0}` is a sink")]
    HasSink(String),
    #[error("elements belong to different quivers")]
    QuiverMismatch,
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("product leaves the stage: {0}")]
    NotClosed(String),
    #[error("linear algebra: {0}")]
    Linalg(String),
}

impl From<qhw_linalg::LinalgError> for LeavittError {
    fn from(e: qhw_linalg::LinalgError) -> Self {
        LeavittError::Linalg(e.to_string())
    }
}
