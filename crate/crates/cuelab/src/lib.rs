//! Numerical laboratory for the characteristic polynomial of Haar-random
//! unitary matrices (CUE) and the multiplicative-chaos measures built from it.
//!
//! The crate has three layers:
//!
//! * sampling — [`cue`] draws CUE spectra through Verblunsky coefficients and
//!   evaluates the log-characteristic-polynomial field; [`gaussian`] provides
//!   the Gaussian reference field with matching covariance.
//! * exact formulas — [`symbol`] and [`toeplitz`] compute Fourier
//!   coefficients, Toeplitz determinants, and orthogonal polynomials for
//!   Fisher–Hartwig symbols; [`asymptotics`] evaluates the closed-form
//!   predictions those determinants converge to.
//! * measures — [`chaos`] normalizes the exponentiated fields into random
//!   measures, decomposes their masses across dyadic barrier scales, and runs
//!   importance-sampled event estimates.
//!
//! Everything is deterministic given a master seed: draws are keyed to
//! counter-based RNG streams ([`rng`]) and reductions run in a fixed order, so
//! results do not depend on the worker count ([`par`]).

pub mod asymptotics;
pub mod chaos;
pub mod cue;
pub mod fft;
pub mod gaussian;
pub mod par;
pub mod quad;
pub mod rng;
pub mod symbol;
pub mod toeplitz;

pub use num_complex::Complex64;

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precision failure: {0}")]
    PrecisionFailure(String),
    #[error("point lies on a branch cut: {0}")]
    BranchCut(String),
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
