use num_complex::Complex64;
use thiserror::Error;

/// Every failure the library reports. Each variant names the violated
/// precondition so that the CLI can print it verbatim.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("Rouche regions undefined: n*|delta| = {n_delta} must exceed 3+2*sqrt(2)")]
    RegionsUndefined { n_delta: f64 },

    #[error("root finder did not converge in {iterations} iterations (max scaled residual {max_residual:e})")]
    RootsNotConverged {
        iterations: usize,
        max_residual: f64,
        best: Vec<Complex64>,
        residuals: Vec<f64>,
    },

    #[error("QR iteration stalled on deflation window [{lo}, {hi}] after {iterations} iterations")]
    EigenNotConverged { lo: usize, hi: usize, iterations: usize },

    #[error("shifted matrix is singular to working precision (pivot {pivot:e}); the shift is an eigenvalue")]
    SingularShift { pivot: f64 },

    #[error("eigenvector residual {residual:e} exceeds {threshold:e}; lambda is not an eigenvalue")]
    EigenvectorResidual { residual: f64, threshold: f64 },

    #[error("point lies on the symbol curve (distance {distance:e})")]
    OnCurve { distance: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("too many failed samples: {failed} of {total}")]
    TooManyFailures { failed: usize, total: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
