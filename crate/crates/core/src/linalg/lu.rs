//! LU factorisation with partial pivoting and shifted solves.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{vec_norm, ComplexMatrix};
use crate::scalar::{C, Real};

use super::norm::matrix_2norm;

#[derive(Clone, Debug)]
pub struct Lu<T: Real> {
    n: usize,
    lu: Vec<C<T>>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn factor(a: &ComplexMatrix<T>) -> Self {
        let n = a.dim();
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (mut p, mut best) = (k, T::zero());
            for i in k..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let piv = lu[k * n + k];
            if piv.is_zero() {
                continue;
            }
            let inv = C::<T>::one() / piv;
            for i in k + 1..n {
                let f = lu[i * n + k] * inv;
                lu[i * n + k] = f;
                if f.is_zero() {
                    continue;
                }
                let (top, bottom) = lu.split_at_mut(i * n);
                let rk = &top[k * n + k + 1..k * n + n];
                let ri = &mut bottom[k + 1..n];
                for (x, &y) in ri.iter_mut().zip(rk) {
                    *x = *x - f * y;
                }
            }
        }
        Self { n, lu, perm }
    }

    pub fn min_pivot(&self) -> T {
        (0..self.n).fold(T::infinity(), |m, k| m.min(self.lu[k * self.n + k].norm()))
    }

    /// Vector `x` with `U x = u_kk e_k`, where `k` is the first pivot at or
    /// below `tol` (the smallest pivot when none is). Back substitution only
    /// divides by the earlier, larger pivots, so it cannot overflow the way a
    /// full solve can when several pivots are tiny.
    pub fn upper_null_vector(&self, tol: T) -> Vec<C<T>> {
        let n = self.n;
        let piv = |k: usize| self.lu[k * n + k].norm();
        let k = (0..n)
            .find(|&k| piv(k) <= tol)
            .unwrap_or_else(|| (0..n).fold(0, |b, i| if piv(i) < piv(b) { i } else { b }));
        let mut x = vec![C::zero(); n];
        if n == 0 {
            return x;
        }
        x[k] = C::one();
        for i in (0..k).rev() {
            let mut s = C::<T>::zero();
            for j in i + 1..=k {
                s = s + self.lu[i * n + j] * x[j];
            }
            x[i] = -s / self.lu[i * n + i];
        }
        x
    }

    pub fn solve(&self, b: &[C<T>]) -> Vec<C<T>> {
        let n = self.n;
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }
}

/// Solves `(zI - A) x = b`.
///
/// Fails with [`Error::SingularShift`] when a pivot falls below
/// `n * eps * (|z| + ||A||)`, which happens exactly when `z` is an eigenvalue
/// to working precision.
pub fn solve_shifted<T: Real>(a: &ComplexMatrix<T>, z: C<T>, b: &[C<T>]) -> Result<Vec<C<T>>> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::InvalidParameter(format!("rhs length {} != {}", b.len(), n)));
    }
    let shifted = a.shifted(z);
    let lu = Lu::factor(&shifted);
    let scale = z.norm() + matrix_2norm(a);
    let pivot = lu.min_pivot();
    if pivot <= T::of_usize(n.max(1)) * T::epsilon() * scale {
        return Err(Error::SingularShift { pivot: pivot.to_f64_lossy() });
    }
    let x = lu.solve(b);
    let r: Vec<C<T>> = shifted.mul_vec(&x).iter().zip(b).map(|(&p, &q)| p - q).collect();
    let bound = T::lit(1e-10) * scale * vec_norm(&x);
    if !(vec_norm(&r) <= bound) {
        return Err(Error::SingularShift { pivot: pivot.to_f64_lossy() });
    }
    Ok(x)
}
