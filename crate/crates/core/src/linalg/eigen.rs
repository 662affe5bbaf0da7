//! Nonsymmetric complex eigensolver: Householder reduction to upper
//! Hessenberg form followed by single-shift complex QR with Wilkinson shifts
//! and Ahues–Tisseur deflation (the zlahqr scheme).

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{vec_norm, ComplexMatrix};
use crate::scalar::{abs1, C, Real};

use super::lu::Lu;
use super::norm::matrix_2norm;

#[derive(Clone, Debug)]
pub struct EigenResult<T: Real> {
    pub values: Vec<C<T>>,
    /// `max ||A v - lambda v|| / (||A|| ||v||)` over the returned pairs; only
    /// present when eigenvectors were computed.
    pub backward_error: Option<T>,
    pub vectors: Option<Vec<Vec<C<T>>>>,
}

/// All `n` eigenvalues, ordered as they deflate (bottom of the Hessenberg
/// matrix first). Deterministic for identical input.
pub fn eigenvalues<T: Real>(a: &ComplexMatrix<T>) -> Result<EigenResult<T>> {
    check_finite(a)?;
    let mut h = a.clone();
    hessenberg_in_place(&mut h);
    let values = hessenberg_qr(&mut h, false)?;
    Ok(EigenResult { values, backward_error: None, vectors: None })
}

/// Upper-triangular Schur factor `T` with `A = Q T Q^H` for some unitary `Q`
/// (not formed). Singular values of `zI - T` equal those of `zI - A`.
pub fn schur_triangular<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    check_finite(a)?;
    let mut h = a.clone();
    hessenberg_in_place(&mut h);
    hessenberg_qr(&mut h, true)?;
    let n = h.dim();
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = C::zero();
        }
    }
    Ok(h)
}

/// Eigenvalues plus eigenvectors obtained by up to three steps of inverse
/// iteration per eigenvalue. `O(n^4)`; meant for small matrices and verification.
pub fn eigenpairs<T: Real>(a: &ComplexMatrix<T>) -> Result<EigenResult<T>> {
    let EigenResult { values, .. } = eigenvalues(a)?;
    let n = a.dim();
    let norm = matrix_2norm(a).max(T::min_positive_value());
    let eps = T::epsilon();
    let mut vectors = Vec::with_capacity(n);
    let mut worst = T::zero();
    for &lambda in &values {
        // Nudge the shift off the eigenvalue so the factorisation stays regular.
        let mut shift = lambda + C::new(eps * norm * T::lit(4.0), eps * norm * T::lit(3.0));
        let lu = loop {
            let lu = Lu::factor(&a.shifted(shift));
            if lu.min_pivot() > T::zero() {
                break lu;
            }
            shift = shift + C::new(eps * norm * T::lit(64.0), T::zero());
        };
        // Fixed irrational phases avoid a start vector orthogonal to the
        // wanted singular direction (the all-ones vector often is).
        let mut x: Vec<C<T>> = (0..n)
            .map(|k| {
                let t = T::of_usize(k + 1) * T::lit(0.754_877_666_246_692_7);
                C::new(t.cos(), t.sin())
            })
            .collect();
        // For strongly nonnormal matrices the first step is usually the best
        // and later steps drift, so the smallest residual is kept.
        let mut best: Option<(T, Vec<C<T>>)> = None;
        for _ in 0..3 {
            x = lu.solve(&x);
            let s = vec_norm(&x);
            if !(s.is_finite() && s > T::zero()) {
                break;
            }
            x.iter_mut().for_each(|v| *v = *v / s);
            let ax = a.mul_vec(&x);
            let r: Vec<C<T>> = ax.iter().zip(&x).map(|(&p, &q)| p - q * lambda).collect();
            let rel = vec_norm(&r) / (norm * vec_norm(&x));
            if best.as_ref().is_none_or(|(b, _)| rel < *b) {
                best = Some((rel, x.clone()));
            }
        }
        if best.is_none() {
            // Several pivots are negligible; take a null vector of U directly.
            let mut x = lu.upper_null_vector(T::of_usize(n) * eps * norm);
            let s = vec_norm(&x);
            x.iter_mut().for_each(|v| *v = *v / s);
            let ax = a.mul_vec(&x);
            let r: Vec<C<T>> = ax.iter().zip(&x).map(|(&p, &q)| p - q * lambda).collect();
            best = Some((vec_norm(&r) / norm, x));
        }
        let (rel, x) = best.unwrap_or_else(|| (T::infinity(), x));
        worst = worst.max(rel);
        vectors.push(x);
    }
    Ok(EigenResult { values, backward_error: Some(worst), vectors: Some(vectors) })
}

fn check_finite<T: Real>(a: &ComplexMatrix<T>) -> Result<()> {
    if a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("matrix has non-finite entries".into()))
    }
}

/// In-place Householder reduction to upper Hessenberg form. Entries below the
/// first subdiagonal are set to exact zeros.
pub fn hessenberg_in_place<T: Real>(a: &mut ComplexMatrix<T>) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    let data = a.as_mut_slice();
    let mut v = vec![C::<T>::zero(); n];
    let mut w = vec![C::<T>::zero(); n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let mut scale = T::zero();
        for i in 0..len {
            scale = scale.max(abs1(data[(k + 1 + i) * n + k]));
        }
        if scale == T::zero() {
            continue;
        }
        // Work on the column divided by its largest entry so that the squared
        // norm neither underflows nor overflows.
        let mut sq = T::zero();
        for i in 0..len {
            let x = data[(k + 1 + i) * n + k] / scale;
            v[i] = x;
            sq = sq + x.norm_sqr();
        }
        let tail = sq - v[0].norm_sqr();
        if tail == T::zero() {
            continue;
        }
        let beta = sq.sqrt();
        let x0 = v[0];
        let r0 = x0.norm();
        let phase = if r0 == T::zero() { C::one() } else { x0 / r0 };
        // v = x + phase*beta*e1 so that H x = -phase*beta*e1
        v[0] = x0 + phase * beta;
        let vv = tail + v[0].norm_sqr();
        let tau = T::lit(2.0) / vv;

        // Left: rows k+1.., columns k..
        for wj in w[k..n].iter_mut() {
            *wj = C::zero();
        }
        for i in 0..len {
            let vc = v[i].conj();
            let row = &data[(k + 1 + i) * n..(k + 2 + i) * n];
            for (wj, &aij) in w[k..n].iter_mut().zip(&row[k..n]) {
                *wj = *wj + vc * aij;
            }
        }
        for i in 0..len {
            let f = v[i] * tau;
            let row = &mut data[(k + 1 + i) * n..(k + 2 + i) * n];
            for (aij, &wj) in row[k..n].iter_mut().zip(&w[k..n]) {
                *aij = *aij - f * wj;
            }
        }
        // Right: all rows, columns k+1..
        for r in 0..n {
            let row = &mut data[r * n..(r + 1) * n];
            let mut s = C::zero();
            for (&aij, &vi) in row[k + 1..n].iter().zip(&v[..len]) {
                s = s + aij * vi;
            }
            let f = s * tau;
            for (aij, &vi) in row[k + 1..n].iter_mut().zip(&v[..len]) {
                *aij = *aij - f * vi.conj();
            }
        }
        data[(k + 1) * n + k] = -(phase * beta * scale);
        for i in k + 2..n {
            data[i * n + k] = C::zero();
        }
    }
}

/// Single-shift complex QR on an upper Hessenberg matrix. With `want_t` the
/// whole matrix is updated so that it converges to the Schur factor;
/// otherwise only the active window is touched.
fn hessenberg_qr<T: Real>(h: &mut ComplexMatrix<T>, want_t: bool) -> Result<Vec<C<T>>> {
    let n = h.dim();
    let mut w = vec![C::zero(); n];
    if n == 0 {
        return Ok(w);
    }
    if n == 1 {
        w[0] = h[(0, 0)];
        return Ok(w);
    }
    let d = h.as_mut_slice();
    let at = |i: usize, j: usize| i * n + j;

    let ulp = T::epsilon();
    let safmin = T::min_positive_value();
    let smlnum = safmin * (T::of_usize(n) / ulp);
    let half = T::lit(0.5);
    let dat1 = T::lit(0.75);
    const KEXSH: usize = 10;

    // Make the subdiagonal real by a diagonal unitary similarity.
    for i in 1..n {
        let hij = d[at(i, i - 1)];
        if hij.im != T::zero() {
            let sc = hij / abs1(hij);
            let sc = sc.conj() / sc.norm();
            d[at(i, i - 1)] = C::new(hij.norm(), T::zero());
            for j in i..n {
                d[at(i, j)] = d[at(i, j)] * sc;
            }
            for r in 0..=(i + 1).min(n - 1) {
                d[at(r, i)] = d[at(r, i)] * sc.conj();
            }
        }
    }

    // Entries this far below the matrix scale are rounding noise; used to
    // deflate blocks whose local scale has collapsed to that level.
    let noise = ulp * T::of_usize(n) * d.iter().fold(T::zero(), |acc, &x| acc.max(abs1(x)));

    let itmax = 30 * n.max(10);
    let mut kdefl = 0usize;
    let mut i = n - 1;
    loop {
        // Active block is rows/cols l..=i.
        let mut l = 0usize;
        let mut converged = false;
        for _its in 0..=itmax {
            // Look for a single small subdiagonal element.
            let mut k = i;
            while k > l {
                let hk = d[at(k, k - 1)];
                if abs1(hk) <= smlnum {
                    break;
                }
                let mut tst = abs1(d[at(k - 1, k - 1)]) + abs1(d[at(k, k)]);
                if abs1(hk) <= noise && tst <= noise {
                    break;
                }
                if tst == T::zero() {
                    if k >= 2 {
                        tst = tst + d[at(k - 1, k - 2)].re.abs();
                    }
                    if k + 1 < n {
                        tst = tst + d[at(k + 1, k)].re.abs();
                    }
                }
                if hk.re.abs() <= ulp * tst {
                    let ab = abs1(hk).max(abs1(d[at(k - 1, k)]));
                    let ba = abs1(hk).min(abs1(d[at(k - 1, k)]));
                    let diff = d[at(k - 1, k - 1)] - d[at(k, k)];
                    let aa = abs1(d[at(k, k)]).max(abs1(diff));
                    let bb = abs1(d[at(k, k)]).min(abs1(diff));
                    let s = aa + ab;
                    if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                        break;
                    }
                }
                k -= 1;
            }
            l = k;
            if l > 0 {
                d[at(l, l - 1)] = C::zero();
            }
            if l >= i {
                converged = true;
                break;
            }
            kdefl += 1;

            let (i1, i2) = if want_t { (0, n - 1) } else { (l, i) };

            let t = if kdefl.is_multiple_of(2 * KEXSH) {
                let s = dat1 * d[at(i, i - 1)].re.abs();
                d[at(i, i)] + s
            } else if kdefl.is_multiple_of(KEXSH) {
                let s = dat1 * d[at(l + 1, l)].re.abs();
                d[at(l, l)] + s
            } else {
                wilkinson_shift(
                    d[at(i - 1, i - 1)],
                    d[at(i - 1, i)],
                    d[at(i, i - 1)],
                    d[at(i, i)],
                    half,
                )
            };

            // Look for two consecutive small subdiagonal elements.
            let mut m = i - 1;
            let mut v0;
            let mut v1;
            loop {
                let h11 = d[at(m, m)];
                let h22 = d[at(m + 1, m + 1)];
                let h11s = h11 - t;
                let h21 = d[at(m + 1, m)].re;
                let s = abs1(h11s) + h21.abs();
                v0 = h11s / s;
                v1 = C::new(h21 / s, T::zero());
                if m == l {
                    break;
                }
                let h10 = d[at(m, m - 1)].re;
                if h10.abs() * (h21 / s).abs() <= ulp * (abs1(v0) * (abs1(h11) + abs1(h22))) {
                    break;
                }
                m -= 1;
            }

            // Single-shift QR step from row m to row i.
            for k in m..i {
                if k > m {
                    v0 = d[at(k, k - 1)];
                    v1 = d[at(k + 1, k - 1)];
                }
                let (beta, v2, t1) = larfg2(v0, v1);
                if k > m {
                    d[at(k, k - 1)] = C::new(beta, T::zero());
                    d[at(k + 1, k - 1)] = C::zero();
                }
                let t2 = (t1 * v2).re;
                let t1c = t1.conj();
                {
                    let (upper, lower) = d.split_at_mut((k + 1) * n);
                    let rk = &mut upper[k * n + k..k * n + i2 + 1];
                    let rk1 = &mut lower[k..i2 + 1];
                    for (a, b) in rk.iter_mut().zip(rk1.iter_mut()) {
                        let sum = t1c * *a + *b * t2;
                        *a = *a - sum;
                        *b = *b - sum * v2;
                    }
                }
                let v2c = v2.conj();
                for j in i1..=(k + 2).min(i) {
                    let base = j * n + k;
                    let sum = t1 * d[base] + d[base + 1] * t2;
                    d[base] = d[base] - sum;
                    d[base + 1] = d[base + 1] - sum * v2c;
                }
                if k == m && m > l {
                    // Keep H(m, m-1) real after starting mid-block.
                    let temp = C::<T>::one() - t1;
                    let temp = temp / temp.norm();
                    d[at(m + 1, m)] = d[at(m + 1, m)] * temp.conj();
                    if m + 2 <= i {
                        d[at(m + 2, m + 1)] = d[at(m + 2, m + 1)] * temp;
                    }
                    for j in m..=i {
                        if j != m + 1 {
                            if i2 > j {
                                for c in j + 1..=i2 {
                                    d[at(j, c)] = d[at(j, c)] * temp;
                                }
                            }
                            for r in i1..j {
                                d[at(r, j)] = d[at(r, j)] * temp.conj();
                            }
                        }
                    }
                }
            }

            // Ensure H(i, i-1) is real.
            let temp = d[at(i, i - 1)];
            if temp.im != T::zero() {
                let rtemp = temp.norm();
                d[at(i, i - 1)] = C::new(rtemp, T::zero());
                let temp = temp / rtemp;
                if i2 > i {
                    for c in i + 1..=i2 {
                        d[at(i, c)] = d[at(i, c)] * temp.conj();
                    }
                }
                for r in i1..i {
                    d[at(r, i)] = d[at(r, i)] * temp;
                }
            }
        }
        if !converged {
            return Err(Error::EigenNotConverged { lo: l, hi: i, iterations: itmax });
        }
        w[i] = d[at(i, i)];
        kdefl = 0;
        if l == 0 {
            break;
        }
        i = l - 1;
        if i == 0 {
            w[0] = d[at(0, 0)];
            break;
        }
    }
    Ok(w)
}

fn wilkinson_shift<T: Real>(h00: C<T>, h01: C<T>, h10: C<T>, h11: C<T>, half: T) -> C<T> {
    let mut t = h11;
    let u = h01.sqrt() * h10.sqrt();
    let s = abs1(u);
    if s != T::zero() {
        let x = (h00 - t) * half;
        let sx = abs1(x);
        let s = s.max(abs1(x));
        let xs = x / s;
        let us = u / s;
        let mut y = (xs * xs + us * us).sqrt() * s;
        if sx > T::zero() {
            let xn = x / sx;
            if xn.re * y.re + xn.im * y.im < T::zero() {
                y = -y;
            }
        }
        t = t - u * (u / (x + y));
    }
    t
}

/// Elementary reflector of order two: returns `(beta, v2, tau)` with
/// `(I - tau [1; v2][1; v2]^H)^H [alpha; x] = [beta; 0]`, `beta` real.
fn larfg2<T: Real>(alpha: C<T>, x: C<T>) -> (T, C<T>, C<T>) {
    let xnorm = x.norm();
    if xnorm == T::zero() && alpha.im == T::zero() {
        return (alpha.re, C::zero(), C::zero());
    }
    let mag = (alpha.re * alpha.re + alpha.im * alpha.im + xnorm * xnorm).sqrt();
    let beta = if alpha.re >= T::zero() { -mag } else { mag };
    let tau = C::new((beta - alpha.re) / beta, -alpha.im / beta);
    let scale = C::<T>::one() / (alpha - beta);
    (beta, x * scale, tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64 as cplx;

    fn sorted(mut v: Vec<C<f64>>) -> Vec<C<f64>> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn diagonal_matrix() {
        let a = ComplexMatrix::diagonal(&[cplx(1.0, 0.0), cplx(0.0, 2.0), cplx(-3.0, 0.0)]);
        let ev = sorted(eigenvalues(&a).unwrap().values);
        let expect = [cplx(-3.0, 0.0), cplx(0.0, 2.0), cplx(1.0, 0.0)];
        for (e, x) in ev.iter().zip(&expect) {
            assert!((e - x).norm() < 1e-14);
        }
    }

    #[test]
    fn companion_quadratic() {
        // z^2 - 4z - 1: roots 2 +- sqrt(5)
        let a = ComplexMatrix::from_row_major(vec![
            cplx(4.0, 0.0),
            cplx(1.0, 0.0),
            cplx(1.0, 0.0),
            cplx(0.0, 0.0),
        ]);
        let ev = sorted(eigenvalues(&a).unwrap().values);
        assert!((ev[0] - cplx(2.0 - 5f64.sqrt(), 0.0)).norm() < 1e-13);
        assert!((ev[1] - cplx(2.0 + 5f64.sqrt(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn hessenberg_preserves_frobenius_norm_and_shape() {
        let a = ComplexMatrix::from_fn(7, |i, j| cplx((i * 3 + j) as f64 % 5.0 - 2.0, (i as f64 - j as f64) * 0.3));
        let mut h = a.clone();
        hessenberg_in_place(&mut h);
        assert!((h.frobenius_norm() - a.frobenius_norm()).abs() < 1e-12);
        for i in 2..7 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], cplx(0.0, 0.0));
            }
        }
    }

    #[test]
    fn schur_factor_is_triangular_with_same_trace() {
        let a = ComplexMatrix::from_fn(6, |i, j| cplx(((i + 2 * j) % 7) as f64, ((3 * i + j) % 4) as f64 - 1.5));
        let t = schur_triangular(&a).unwrap();
        let tr_a: C<f64> = (0..6).map(|i| a[(i, i)]).sum();
        let tr_t: C<f64> = (0..6).map(|i| t[(i, i)]).sum();
        assert!((tr_a - tr_t).norm() < 1e-12);
        assert!((t.frobenius_norm() - a.frobenius_norm()).abs() < 1e-11);
    }

    #[test]
    fn eigenpairs_have_small_backward_error() {
        let a = ComplexMatrix::from_fn(8, |i, j| cplx(((i * 5 + j * 3) % 11) as f64 / 7.0, ((i + j) % 3) as f64 - 1.0));
        let r = eigenpairs(&a).unwrap();
        assert!(r.backward_error.unwrap() < 1e-12);
    }

    #[test]
    fn rejects_nan() {
        let mut a = ComplexMatrix::<f64>::identity(3);
        a[(1, 2)] = cplx(f64::NAN, 0.0);
        assert!(eigenvalues(&a).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let a = ComplexMatrix::<f32>::diagonal(&[crate::scalar::cplx(1.0f32, 0.0), crate::scalar::cplx(2.0, 0.0), crate::scalar::cplx(0.0, 1.0)]);
        let ev = eigenvalues(&a).unwrap().values;
        let mut mods: Vec<f32> = ev.iter().map(|z| z.norm()).collect();
        mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((mods[2] - 2.0).abs() < 1e-5);
    }
}
