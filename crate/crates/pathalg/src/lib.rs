//! The path algebra `kQ` with its length grading, the radical-square-zero
//! algebra `kQ/J²`, and homogeneous maps between graded free `kQ`-modules.

mod element;
mod graded;
mod rep;
mod rs0;

use thiserror::Error;

pub use element::{split_signed_terms, PathElement};
pub use graded::{
    eta_map, verify_exact_window, xi_map, DegreeExactness, ExactnessReport, GradedFreeMap,
    GradedMapJson, Side,
};
pub use rep::{graded_hom_ext, GradedRep, HomExt};
pub use rs0::{build_rs0, Rs0Algebra};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathAlgError {
    #[error("elements belong to different quivers")]
    QuiverMismatch,
    #[error("vertex `{0}` is a sink")]
    VertexIsSink(String),
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("degree {needed} is needed but the window is [{lo}, {hi}]")]
    WindowTooSmall { needed: i64, lo: i64, hi: i64 },
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("invalid graded map: {0}")]
    InvalidMap(String),
    #[error(transparent)]
    Quiver(#[from] qhw_quiver::QuiverError),
}
