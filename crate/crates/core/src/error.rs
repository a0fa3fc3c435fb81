use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not symmetric: |entry[{i}][{j}] - entry[{j}][{i}]| = {deviation:e} exceeds tolerance")]
    AsymmetricInput { i: usize, j: usize, deviation: f64 },

    #[error("matrix is not positive definite: eigenvalue {eigenvalue:e} at or below the positivity floor")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("eigenvalue iteration failed to converge")]
    ConvergenceFailure,

    #[error("split index {k} out of range for dimension {n} (need 1 <= k < n)")]
    SplitOutOfRange { k: usize, n: usize },

    #[error("matrix is singular; exact inverse does not exist")]
    SingularMatrix,

    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },

    #[error("exponent at byte {offset} is zero; word factors must have nonzero exponents")]
    ZeroExponent { offset: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("exact mode unsupported: {reason}")]
    ExactModeUnsupported { reason: String },

    #[error("matrix does not have exactly two distinct eigenvalues")]
    NotTwoEigenvalues,

    #[error("matrix has more than two eigenvalue clusters (diameters {diameters:?} at relative tolerance {tolerance:e})")]
    MoreThanTwoEigenvalues { diameters: Vec<f64>, tolerance: f64 },

    #[error("no eigenvalue of multiplicity >= n-1: cluster sizes {sizes:?}")]
    MultiplicityTooLow { sizes: Vec<usize> },

    #[error("entry [{i}][{j}] = {value:e} is negative; a nonnegative matrix is required")]
    NegativeEntry { i: usize, j: usize, value: f64 },

    #[error("exponent {value} is not an integer; exact evaluation requires integer exponents")]
    NonIntegerExponent { value: String },

    #[error("exact inverse of a singular matrix requested during word evaluation")]
    SingularExactInverse,

    #[error("sequence is not normalized: first remaining alpha and beta must be positive")]
    NotNormalized,

    #[error("epsilon sweep exhausted: no dyadic epsilon in 2^-1..2^-{max_k} produced a negative trace")]
    SweepExhausted { max_k: u32 },

    #[error("sequence is not provably bad (reduced class {m} is not 2 or 3 mod 4)")]
    NotProvablyBad { m: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
