//! Exact spectra, pseudospectra and symbol curves of shift-power Toeplitz
//! matrices with rank-1 (all-ones) perturbations.
//!
//! Numerical kernels are generic over the real scalar type through
//! [`scalar::Real`]; the aliases below fix it to `f64`, which is what the CLI
//! and the experiments use.

pub mod error;
pub mod exact;
pub mod experiments;
pub mod linalg;
pub mod matrix;
pub mod model;
pub mod poly;
pub mod pseudospectrum;
pub mod rng;
pub mod scalar;
pub mod symbol;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use model::{ModelSpec, ModelVariant, RandomMatrixSpec};
pub use scalar::{Real, C};

pub type Complex64 = num_complex::Complex64;
pub type Matrix64 = ComplexMatrix<f64>;
pub type Model64 = ModelSpec<f64>;
