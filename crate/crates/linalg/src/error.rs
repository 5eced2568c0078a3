use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("degree {degree} outside window [{lo}, {hi}]")]
    DegreeOutsideWindow { degree: i64, lo: i64, hi: i64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("d∘d is nonzero at degree {0}")]
    NotAComplex(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("algebra check failed: {0}")]
    InvalidAlgebra(String),
    #[error("action matrices do not define a module: {0}")]
    NotAModule(String),
    #[error("not semisimple: {0}")]
    NotSemisimple(String),
}
