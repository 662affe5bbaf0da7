//! Dense complex linear algebra: the oracle layer under every other module.

pub mod eigen;
pub mod lu;
pub mod norm;
pub mod sigma;
pub mod svd;

pub use eigen::{eigenpairs, eigenvalues, schur_triangular, EigenResult};
pub use lu::{solve_shifted, Lu};
pub use norm::matrix_2norm;
pub use sigma::ShiftedSigmaMin;
pub use svd::{singular_min, singular_values};
