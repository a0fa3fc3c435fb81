//! Positivity of spectra of generalized two-letter matrix words.
//!
//! A generalized word `W(A,B) = A^{a1} B^{b1} ... A^{aN} B^{bN}` in positive
//! definite matrices always has positive spectrum at class 1, but not in
//! general. This crate evaluates such words, classifies exponent sequences
//! as 2-good or not via the cancellation calculus, reproduces the known
//! explicit counterexample constructions, certifies non-positivity exactly
//! over the rationals, and searches for new counterexamples.

pub mod certify;
pub mod constructions;
pub mod error;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod projections;
pub mod rational;
pub mod reduction;
pub mod search;
pub mod word;

pub use certify::{
    multeig_canonical, perron_positive, rationalize, sturm_decide, CanonicalPair, Certificate,
};
pub use constructions::{
    epsilon_family, epsilon_family_rational, hijo_example, hijo_sequence, pq_power,
    projection_identities_check, projection_limit, projection_p, projection_q, scale_factor,
    thfour_limit, thfour_word, EpsilonFamily, ThfourLimit,
};
pub use error::{Error, Result};
pub use io::{read_matrix, write_matrix, FileError, MatrixData};
pub use matrix::{
    eigenvalues_general, pd_power, schur_complement, spectral_factor, Matrix, PDMatrix, Spectrum,
    SymMatrix, C64,
};
pub use projections::{
    blockwise_evaluate, halmos_form, two_eigenvalue_split, FormBlock, OrthoProjection,
    TwoProjectionForm,
};
pub use rational::{rational_from_str, rational_to_string, RationalMatrix};
pub use reduction::{
    applicable_cancellations, apply_cancellation, classify, is_irreducible, reduced_class,
    CancellationSite, Classification, Goodness, ReducedClass, ReductionStep, ReductionTrace,
    Rule,
};
pub use search::{
    epsilon_sweep, hijo_witness, random_search, refine, sample_pd, thfour_witness, Provenance,
    RefineResult, SearchConfig, SearchOutcome, Witness, WitnessMatrices,
};
pub use word::{
    canonicalize, evaluate, evaluate_exact, format_word, parse_word, verdict_from_spectrum,
    EvalResult, ExponentSequence, Exponent, Letter, PositivityVerdict, Tolerances, VerdictKind,
    WordExpr,
};
