//! Dense complex polynomials and a simultaneous (Aberth–Ehrlich) root finder.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{C, Real};

/// `coeffs[k]` is the coefficient of `z^k`; the leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPolynomial<T: Real> {
    coeffs: Vec<C<T>>,
}

impl<T: Real> ComplexPolynomial<T> {
    pub fn new(coeffs: Vec<C<T>>) -> Result<Self> {
        match coeffs.last() {
            None => Err(Error::InvalidParameter("polynomial needs at least one coefficient".into())),
            Some(c) if c.is_zero() => {
                Err(Error::InvalidParameter("leading coefficient must be nonzero".into()))
            }
            Some(_) => Ok(Self { coeffs }),
        }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[C<T>]) -> Self {
        let mut c = vec![C::one()];
        for &r in roots {
            let mut next = vec![C::zero(); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] = next[k + 1] + ck;
                next[k] = next[k] - ck * r;
            }
            c = next;
        }
        Self { coeffs: c }
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C<T> {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, z: C<T>) -> C<T> {
        self.coeffs.iter().rev().fold(C::zero(), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` by Horner.
    pub fn eval_with_derivative(&self, z: C<T>) -> (C<T>, C<T>) {
        let mut p: C<T> = C::zero();
        let mut dp: C<T> = C::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum_k |a_k| |z|^k`, the magnitude scale that bounds rounding in `eval`.
    pub fn magnitude_at(&self, z: C<T>) -> T {
        let r = z.norm();
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * r + c.norm())
    }

    /// Backward-error residual `|p(z)| / sum_k |a_k| |z|^k`.
    pub fn scaled_residual(&self, z: C<T>) -> T {
        let r = z.norm();
        if r > T::one() {
            // Evaluate the reversed polynomial at 1/z; the common factor |z|^d cancels.
            let y = z.inv();
            let ry = y.norm();
            let mut p: C<T> = C::zero();
            let mut s = T::zero();
            for c in &self.coeffs {
                p = p * y + *c;
                s = s * ry + c.norm();
            }
            return if s > T::zero() { p.norm() / s } else { T::zero() };
        }
        let s = self.magnitude_at(z);
        if s > T::zero() {
            self.eval(z).norm() / s
        } else {
            T::zero()
        }
    }

    /// Newton correction `p(z) / p'(z)`, evaluated through the reversed
    /// polynomial when `|z| > 1` to stay clear of overflow.
    fn newton_ratio(&self, z: C<T>) -> C<T> {
        let d = T::of_usize(self.degree());
        if z.norm() <= T::one() {
            let (p, dp) = self.eval_with_derivative(z);
            return p / dp;
        }
        let y = z.inv();
        let mut q: C<T> = C::zero();
        let mut dq: C<T> = C::zero();
        for &c in &self.coeffs {
            dq = dq * y + q;
            q = q * y + c;
        }
        // p(z) = z^d q(y), p'(z) = z^{d-1} (d q(y) - y q'(y))
        z / (C::new(d, T::zero()) - y * dq / q)
    }
}

/// All `degree` roots (with multiplicity).
///
/// Aberth–Ehrlich iteration in Gauss–Seidel order, started from circles
/// whose radii come from the upper convex hull of `(k, log|a_k|)`, followed by
/// Newton polishing. Every returned root has
/// [`ComplexPolynomial::scaled_residual`] at most `tol`.
pub fn solve_polynomial<T: Real>(poly: &ComplexPolynomial<T>, tol: T, max_iter: usize) -> Result<Vec<C<T>>> {
    let d = poly.degree();
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let c = poly.coeffs();
    if d == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }

    // Exact zero roots factor out.
    let zeros = c.iter().take_while(|v| v.is_zero()).count();
    let reduced = ComplexPolynomial::new(c[zeros..].to_vec())?;
    let mut roots = if reduced.degree() == 0 {
        Vec::new()
    } else {
        aberth(&reduced, tol, max_iter)?
    };
    roots.extend(std::iter::repeat_n(C::zero(), zeros));
    Ok(roots)
}

fn aberth<T: Real>(poly: &ComplexPolynomial<T>, tol: T, max_iter: usize) -> Result<Vec<C<T>>> {
    let d = poly.degree();
    if d == 1 {
        let c = poly.coeffs();
        return Ok(vec![-c[0] / c[1]]);
    }
    let mut z = initial_guesses(poly);
    let mut done = vec![false; d];
    let small = T::epsilon() * T::lit(4.0);
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let mut active = 0;
        for i in 0..d {
            if done[i] {
                continue;
            }
            active += 1;
            let zi = z[i];
            let ratio = poly.newton_ratio(zi);
            if !(ratio.re.is_finite() && ratio.im.is_finite()) {
                // Stationary point of p: nudge off it.
                z[i] = zi + C::new(T::lit(1e-3), T::lit(1e-3)) * (T::one() + zi.norm());
                continue;
            }
            let mut sum = C::zero();
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    sum = sum + (zi - zj).inv();
                }
            }
            let denom = C::<T>::one() - ratio * sum;
            let step = if denom.is_zero() { ratio } else { ratio / denom };
            z[i] = zi - step;
            if step.norm() <= small * z[i].norm() || poly.scaled_residual(z[i]) <= tol * T::lit(1e-2) {
                done[i] = true;
            }
        }
        if active == 0 {
            break;
        }
    }

    // Newton polishing: accept a step only when it lowers the residual.
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let r0 = poly.scaled_residual(*zi);
            if r0 == T::zero() {
                break;
            }
            let cand = *zi - poly.newton_ratio(*zi);
            if cand.re.is_finite() && cand.im.is_finite() && poly.scaled_residual(cand) < r0 {
                *zi = cand;
            } else {
                break;
            }
        }
    }

    let residuals: Vec<T> = z.iter().map(|&zi| poly.scaled_residual(zi)).collect();
    let worst = residuals.iter().fold(T::zero(), |m, &r| m.max(r));
    if !(worst <= tol) {
        return Err(Error::RootsNotConverged {
            iterations,
            max_residual: worst.to_f64_lossy(),
            best: z.iter().map(|v| num_complex::Complex64::new(v.re.to_f64_lossy(), v.im.to_f64_lossy())).collect(),
            residuals: residuals.iter().map(|r| r.to_f64_lossy()).collect(),
        });
    }
    Ok(z)
}

/// Starting points on circles derived from the Newton polygon of the
/// coefficient moduli: each hull edge from `k_i` to `k_{i+1}` contributes
/// `k_{i+1} - k_i` points on the circle of radius `(|a_{k_i}| / |a_{k_{i+1}}|)^{1 / (k_{i+1} - k_i)}`.
fn initial_guesses<T: Real>(poly: &ComplexPolynomial<T>) -> Vec<C<T>> {
    let c = poly.coeffs();
    let d = poly.degree();
    let logs: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k, v.norm().to_f64_lossy().ln()))
        .collect();
    // Upper convex hull (monotone chain).
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &logs {
        while hull.len() >= 2 {
            let (k1, y1) = hull[hull.len() - 2];
            let (k2, y2) = hull[hull.len() - 1];
            let cross = (k2 as f64 - k1 as f64) * (p.1 - y1) - (y2 - y1) * (p.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(d);
    let two_pi = std::f64::consts::TAU;
    for w in hull.windows(2) {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let count = k2 - k1;
        let radius = ((y1 - y2) / count as f64).exp();
        for j in 0..count {
            // Irrational offset keeps circles from aligning with symmetric root sets.
            let angle = two_pi * (j as f64 / count as f64) + 0.7 + 0.37 * guesses.len() as f64 / d as f64;
            guesses.push(C::new(T::lit(radius * angle.cos()), T::lit(radius * angle.sin())));
        }
    }
    guesses
}
