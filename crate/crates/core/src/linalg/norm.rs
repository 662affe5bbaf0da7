//! Spectral norm estimation.

use num_traits::{One, Zero};

use crate::matrix::{vec_norm, ComplexMatrix};
use crate::scalar::{C, Real};

use super::svd::singular_values;

const POWER_STEPS: usize = 300;

/// `||A||_2`: power iteration on `A^H A` from a fixed start vector; if the
/// estimate has not settled after a fixed budget the full SVD decides.
pub fn matrix_2norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    if n == 0 {
        return T::zero();
    }
    let maxabs = a.max_abs();
    if maxabs == T::zero() {
        return T::zero();
    }
    let mut x: Vec<C<T>> = (0..n)
        .map(|i| C::<T>::one() + C::new(T::lit(1e-3) * T::of_usize(i % 7), T::zero()))
        .collect();
    let mut prev = T::zero();
    let tol = T::epsilon() * T::lit(4.0);
    for _ in 0..POWER_STEPS {
        let nx = vec_norm(&x);
        x.iter_mut().for_each(|v| *v = *v / nx);
        let y = a.mul_vec(&x);
        let est = vec_norm(&y);
        if est == T::zero() {
            break;
        }
        if (est - prev).abs() <= tol * est {
            return est;
        }
        prev = est;
        x = a.adjoint_mul_vec(&y);
        if x.iter().all(|v| v.is_zero()) {
            break;
        }
    }
    singular_values(a).first().copied().unwrap_or_else(T::zero)
}
