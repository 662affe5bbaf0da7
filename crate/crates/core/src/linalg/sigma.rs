//! Smallest singular value of `zI - A` for many shifts `z`.
//!
//! `A` is reduced once to its triangular Schur factor `T`; for each shift the
//! largest eigenvalue of `((zI - T)^H (zI - T))^{-1}` is found by Lanczos with
//! full reorthogonalisation, each step costing two triangular solves.

use num_traits::Zero;

use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::scalar::{C, Real};

use super::eigen::schur_triangular;

const MAX_LANCZOS: usize = 60;

#[derive(Clone, Debug)]
pub struct ShiftedSigmaMin<T: Real> {
    t: ComplexMatrix<T>,
    start: Vec<C<T>>,
}

impl<T: Real> ShiftedSigmaMin<T> {
    pub fn new(a: &ComplexMatrix<T>) -> Result<Self> {
        let t = schur_triangular(a)?;
        let n = t.dim();
        // Fixed pseudo-random start vector: no structure shared with the test matrices.
        let start = (0..n)
            .map(|i| {
                let h = (i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                let u = (h >> 40) as f64 / (1u64 << 24) as f64;
                let v = ((h >> 16) & 0xff_ffff) as f64 / (1u64 << 24) as f64;
                C::new(T::lit(0.5 + u), T::lit(v - 0.5))
            })
            .collect();
        Ok(Self { t, start })
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    pub fn schur_factor(&self) -> &ComplexMatrix<T> {
        &self.t
    }

    /// `sigma_min(zI - A)`. Returns zero when the shifted factor is exactly
    /// singular or its inverse overflows.
    pub fn sigma_min(&self, z: C<T>) -> T {
        let n = self.t.dim();
        if n == 0 {
            return T::infinity();
        }
        let diag: Vec<C<T>> = (0..n).map(|i| z - self.t[(i, i)]).collect();
        if diag.iter().any(|d| d.is_zero()) {
            return T::zero();
        }
        let apply = |x: &[C<T>]| -> Vec<C<T>> {
            let y = self.solve_adjoint(&diag, x);
            self.solve_upper(&diag, &y)
        };

        let mut basis: Vec<Vec<C<T>>> = Vec::new();
        let mut alphas: Vec<T> = Vec::new();
        let mut betas: Vec<T> = Vec::new();
        let mut q = self.start.clone();
        let nq = norm(&q);
        q.iter_mut().for_each(|v| *v = *v / nq);
        let mut theta_prev = T::zero();
        let steps = MAX_LANCZOS.min(n);
        for k in 0..steps {
            let mut w = apply(&q);
            if w.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                return T::zero();
            }
            let alpha = dot(&q, &w).re;
            basis.push(q);
            alphas.push(alpha);
            // Full reorthogonalisation, twice.
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    for (wi, &bi) in w.iter_mut().zip(b) {
                        *wi = *wi - bi * c;
                    }
                }
            }
            let theta = largest_tridiagonal_eigenvalue(&alphas, &betas);
            let beta = norm(&w);
            let settled = k > 0 && (theta - theta_prev).abs() <= T::lit(1e-13) * theta;
            if settled || beta <= T::epsilon() * theta || k + 1 == steps {
                return finish(theta);
            }
            theta_prev = theta;
            betas.push(beta);
            q = w.into_iter().map(|v| v / beta).collect();
        }
        finish(theta_prev)
    }

    /// Solves `(zI - T)^H y = x` (lower triangular, forward).
    fn solve_adjoint(&self, diag: &[C<T>], x: &[C<T>]) -> Vec<C<T>> {
        let n = x.len();
        let mut y = x.to_vec();
        for i in 0..n {
            let yi = y[i] / diag[i].conj();
            y[i] = yi;
            // column i of (zI - T)^H below the diagonal is conj of row i of -T right of it
            let row = self.t.row(i);
            for j in i + 1..n {
                y[j] = y[j] + row[j].conj() * yi;
            }
        }
        y
    }

    /// Solves `(zI - T) w = y` (upper triangular, backward).
    fn solve_upper(&self, diag: &[C<T>], y: &[C<T>]) -> Vec<C<T>> {
        let n = y.len();
        let mut w = y.to_vec();
        for i in (0..n).rev() {
            let row = self.t.row(i);
            let mut s = w[i];
            for j in i + 1..n {
                s = s + row[j] * w[j];
            }
            w[i] = s / diag[i];
        }
        w
    }
}

fn finish<T: Real>(theta: T) -> T {
    if theta > T::zero() && theta.is_finite() {
        T::one() / theta.sqrt()
    } else {
        T::zero()
    }
}

fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(C::zero(), |acc, (&x, &y)| acc + x.conj() * y)
}

fn norm<T: Real>(a: &[C<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `alphas` and off-diagonal `betas`, by Sturm-sequence bisection.
fn largest_tridiagonal_eigenvalue<T: Real>(alphas: &[T], betas: &[T]) -> T {
    let k = alphas.len();
    if k == 1 {
        return alphas[0];
    }
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..k {
        let r = if i > 0 { betas[i - 1].abs() } else { T::zero() }
            + if i + 1 < k { betas[i].abs() } else { T::zero() };
        lo = lo.min(alphas[i] - r);
        hi = hi.max(alphas[i] + r);
    }
    // count of eigenvalues strictly less than x
    let count_below = |x: T| -> usize {
        let mut c = 0;
        let mut d = T::one();
        for i in 0..k {
            let b2 = if i > 0 { betas[i - 1] * betas[i - 1] } else { T::zero() };
            d = alphas[i] - x - if i > 0 { b2 / d } else { T::zero() };
            if d == T::zero() {
                d = T::epsilon() * (alphas[i].abs() + T::min_positive_value());
            }
            if d < T::zero() {
                c += 1;
            }
        }
        c
    };
    for _ in 0..200 {
        let mid = lo + (hi - lo) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}
