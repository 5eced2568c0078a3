//! Exact linear algebra over the rationals and prime fields.

pub mod algebra;
pub mod complex;
pub mod error;
pub mod matrix;
pub mod scalar;
pub mod semisimple;
pub mod smith;
pub mod sparse;

pub use algebra::{balanced_tensor, BalancedTensor, FinDimAlgebra, FinDimModule, QuotientSpace};
pub use complex::{BoundedComplex, Cohomology};
pub use error::LinalgError;
pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
pub use semisimple::{SimpleBlock, Wedderburn};
pub use smith::{smith_normal_form, IntMatrix, SmithForm};
pub use sparse::{Echelon, SparseMatrix, SparseVec};
