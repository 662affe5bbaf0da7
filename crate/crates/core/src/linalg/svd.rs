//! Singular values by one-sided (Hestenes) Jacobi rotations.

use num_traits::Zero;

use crate::matrix::ComplexMatrix;
use crate::scalar::{C, Real};

const MAX_SWEEPS: usize = 60;

/// All singular values in descending order.
///
/// Rows of `A` are orthogonalised in place (singular values of `A` and `A^T`
/// coincide), so every rotation works on contiguous memory.
pub fn singular_values<T: Real>(a: &ComplexMatrix<T>) -> Vec<T> {
    let n = a.dim();
    let mut rows: Vec<Vec<C<T>>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let tol = T::epsilon() * T::of_usize(n.max(1));
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (head, tail) = rows.split_at_mut(q);
                let x = &mut head[p];
                let y = &mut tail[0];
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = C::<T>::zero();
                for (&u, &v) in x.iter().zip(y.iter()) {
                    alpha = alpha + u.norm_sqr();
                    beta = beta + v.norm_sqr();
                    gamma = gamma + u * v.conj();
                }
                let g = gamma.norm();
                if g == T::zero() || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (g + g);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let sp = phase * s;
                let spc = phase.conj() * s;
                for (u, v) in x.iter_mut().zip(y.iter_mut()) {
                    let (uu, vv) = (*u, *v);
                    *u = uu * c - sp * vv;
                    *v = spc * uu + vv * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = rows.iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Smallest singular value from the full Jacobi SVD.
pub fn singular_min<T: Real>(a: &ComplexMatrix<T>) -> T {
    singular_values(a).last().copied().unwrap_or_else(T::zero)
}
