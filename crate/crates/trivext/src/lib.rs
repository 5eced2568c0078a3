//! Trivial extensions `Λ = A⁰ ⋉ A^{-1}` of finite strongly graded stages.
//!
//! A stage is a window of homogeneous components `A^n` with their products.
//! From it we build `Λ`, the complete resolution `P` of `A⁰` with
//! `Pⁿ = Aⁿ ⊕ A^{n-1}`, stable Hom out of `A⁰` (by the `K_M / Im φ_M` formula
//! and by brute force), the decomposition of Gorenstein projectives, the
//! endomorphism complex of `P`, and the semisimple singularity model.
//!
//! Modules are left modules; action matrices act on column vectors.

mod endo;
mod ext;
mod resolution;
mod sing;
mod stable;
mod stage;
mod util;

use thiserror::Error;

pub use endo::{verify_phi_quasi_iso, verify_phi_quasi_iso_variant, EndDegree, PhiReport, PhiVariant};
pub use ext::{build_trivext, random_module, LambdaModule, TrivialExtension};
pub use resolution::{complete_resolution, verify_totally_acyclic, AcyclicityReport, CompleteResolutionWindow};
pub use sing::{singularity_model, SingularityModel};
pub use stable::{gproj_decompose, stable_endo_ring, stable_hom, GprojDecomposition, StableEndoReport, StableHomReport};
pub use stage::{stage_from_leavitt, GradedStageInput, PairCheck, Side, StrongGradingCheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrivextError {
    #[error("vertex `{0}` is a sink")]
    HasSink(String),
    #[error("stage is not strongly graded: {0}")]
    StageNotStronglyGraded(String),
    #[error("invalid stage data: {0}")]
    InvalidStage(String),
    #[error("degree {0} is outside the available window")]
    WindowNotGenerated(i64),
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("decomposition failed: {0}")]
    NotGorensteinProjective(String),
    #[error("degree-zero part is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("linear algebra: {0}")]
    Linalg(String),
}

impl From<qhw_linalg::LinalgError> for TrivextError {
    fn from(e: qhw_linalg::LinalgError) -> Self {
        match e {
            qhw_linalg::LinalgError::NotAModule(m) => TrivextError::NotAModule(m),
            qhw_linalg::LinalgError::NotSemisimple(m) => TrivextError::NotSemisimple(m),
            e => TrivextError::Linalg(e.to_string()),
        }
    }
}

impl From<qhw_leavitt::LeavittError> for TrivextError {
    fn from(e: qhw_leavitt::LeavittError) -> Self {
        match e {
            qhw_leavitt::LeavittError::HasSink(v) => TrivextError::HasSink(v),
            e => TrivextError::InvalidStage(e.to_string()),
        }
    }
}
