//! Characteristic polynomials of the two models, their roots, Rouché
//! regions, the Catalan outlier series and zero-eigenvalue multiplicities.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{matrix_2norm, solve_shifted};
use crate::matrix::{vec_norm, ComplexMatrix};
use crate::model::{build_model, ModelSpec, ModelVariant};
use crate::poly::{solve_polynomial, ComplexPolynomial};
use crate::scalar::{C, Real};

/// Default scaled-residual tolerance for [`exact_spectrum`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
const ROOT_MAX_ITER: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PIndices {
    /// `floor((n-1)/m)`
    pub p1: usize,
    /// `floor((n-1)/(m+1))`
    pub p2: usize,
    pub correction_active: bool,
    pub in_i: bool,
    pub in_t: bool,
}

pub fn compute_p_indices(n: usize, m: usize) -> Result<PIndices> {
    if n == 0 || m == 0 || m > n {
        return Err(Error::InvalidParameter(format!("need 1 <= m <= n, got n = {n}, m = {m}")));
    }
    let p1 = (n - 1) / m;
    let p2 = (n - 1) / (m + 1);
    let correction_active = p1 > p2 && (m + 1) * p1 > n;
    let in_i = n >= 2 && m < n && m >= ceil_sqrt(n - 1);
    // floor((n-1)/k) is nonincreasing in k, so m is attained iff it is attained
    // at the largest k with floor((n-1)/k) >= m.
    let in_t = p1 >= 1 && (n - 1) / p1 == m;
    Ok(PIndices { p1, p2, correction_active, in_i, in_t })
}

fn ceil_sqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r > x {
        r -= 1;
    }
    while r * r < x {
        r += 1;
    }
    r
}

fn check_delta<T: Real>(spec: &ModelSpec<T>) -> Result<()> {
    spec.validate()?;
    if spec.delta.is_zero() {
        return Err(Error::InvalidParameter("delta must be nonzero".into()));
    }
    if spec.variant == ModelVariant::Model2 && (spec.a + C::one()).is_zero() {
        return Err(Error::InvalidParameter("a = -1 is not supported for model 2".into()));
    }
    Ok(())
}

/// Monic characteristic polynomial of degree `p1 + 1` whose roots are the
/// nonzero eigenvalues.
///
/// With `j = p1 - k`, the model 2 coefficient of `z^k` is
/// `-delta [ (n - m j) (1+a)^j - j a (1+a)^{j-1} ]`, which reduces to the
/// model 1 value `-delta (n - m j)` at `a = 0`.
pub fn assemble_charpoly<T: Real>(spec: &ModelSpec<T>) -> Result<ComplexPolynomial<T>> {
    check_delta(spec)?;
    let (n, m) = (spec.n, spec.m);
    let idx = compute_p_indices(n, m)?;
    let p1 = idx.p1;
    let delta = spec.delta;
    let mut c = vec![C::zero(); p1 + 2];
    c[p1 + 1] = C::one();
    match spec.variant {
        ModelVariant::Model1 => {
            for (k, ck) in c.iter_mut().enumerate().take(p1 + 1) {
                let j = p1 - k;
                *ck = -delta * T::of_usize(n - m * j);
            }
        }
        ModelVariant::Model2 => {
            let a = spec.a;
            let b = C::<T>::one() + a;
            // powers[j] = (1+a)^j
            let mut powers = Vec::with_capacity(p1 + 1);
            powers.push(C::<T>::one());
            for j in 1..=p1 {
                powers.push(powers[j - 1] * b);
            }
            for (k, ck) in c.iter_mut().enumerate().take(p1 + 1) {
                let j = p1 - k;
                let mut inner = powers[j] * T::of_usize(n - m * j);
                if j >= 1 {
                    inner = inner - a * powers[j - 1] * T::of_usize(j);
                }
                *ck = -delta * inner;
            }
            if idx.correction_active {
                // Same value as the closed form minus `n delta correction_sum`,
                // but summed without the cancellation between the two.
                for (k, ck) in c.iter_mut().enumerate().take(p1 - idx.p2) {
                    let j = p1 - k;
                    *ck = -delta * truncated_moment(n, m, j, a);
                }
            }
        }
    }
    ComplexPolynomial::new(c)
}

/// `sum_{q=0}^{min(j, n-1-m j)} C(j, q) a^q (n - m j - q)`, the moment
/// `<B^j 1, 1>` for `B = S^m + a S^{m+1}`.
fn truncated_moment<T: Real>(n: usize, m: usize, j: usize, a: C<T>) -> C<T> {
    let top = j.min(n - 1 - m * j);
    let mut total = C::zero();
    let mut apow = C::<T>::one();
    for q in 0..=top {
        total = total + apow * (binomial::<T>(j, q) * T::of_usize(n - m * j - q));
        apow = apow * a;
    }
    total
}

/// `sum_{q = n - m j + 1}^{j} a^q C(j, q) (q - (n - m j)) / n`, the binomial
/// tail lost when `m j + q` runs past `n - 1`.
pub fn correction_sum<T: Real>(n: usize, m: usize, j: usize, a: C<T>) -> C<T> {
    let base = n - m * j;
    let mut total = C::zero();
    for q in (base + 1)..=j {
        let w = binomial::<T>(j, q) * T::of_usize(q - base) / T::of_usize(n);
        total = total + a.powu(q as u32) * w;
    }
    total
}

fn binomial<T: Real>(j: usize, q: usize) -> T {
    let q = q.min(j - q);
    let mut out = T::one();
    for i in 0..q {
        out = out * T::of_usize(j - i) / T::of_usize(i + 1);
    }
    out.round()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactSpectrum<T: Real> {
    pub nonzero_roots: Vec<C<T>>,
    pub outlier_index: usize,
    pub zero_algebraic_multiplicity: usize,
    pub zero_geometric_multiplicity: usize,
    /// Largest [`ComplexPolynomial::scaled_residual`] over the roots.
    pub max_residual: T,
}

impl<T: Real> ExactSpectrum<T> {
    pub fn outlier(&self) -> C<T> {
        self.nonzero_roots[self.outlier_index]
    }

    /// All `n` eigenvalues: the nonzero roots followed by the zero block.
    pub fn all_eigenvalues(&self) -> Vec<C<T>> {
        let mut v = self.nonzero_roots.clone();
        v.extend(std::iter::repeat_n(C::zero(), self.zero_algebraic_multiplicity));
        v
    }
}

pub fn exact_spectrum<T: Real>(spec: &ModelSpec<T>, tol: T) -> Result<ExactSpectrum<T>> {
    let poly = assemble_charpoly(spec)?;
    let roots = solve_polynomial(&poly, tol, ROOT_MAX_ITER)?;
    let max_residual = roots.iter().fold(T::zero(), |acc, &z| acc.max(poly.scaled_residual(z)));
    let outlier_index = outlier_position(&roots);
    let mult = zero_multiplicities(spec)?;
    Ok(ExactSpectrum {
        nonzero_roots: roots,
        outlier_index,
        zero_algebraic_multiplicity: mult.algebraic,
        zero_geometric_multiplicity: mult.geometric,
        max_residual,
    })
}

/// Index of the root of largest modulus; ties go to the larger real part.
pub fn outlier_position<T: Real>(roots: &[C<T>]) -> usize {
    let mut best = 0;
    for (i, z) in roots.iter().enumerate().skip(1) {
        let (r, rb) = (z.norm(), roots[best].norm());
        if r > rb || (r == rb && z.re > roots[best].re) {
            best = i;
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoucheRegions<T: Real> {
    pub r_plus: T,
    pub r_minus: T,
    /// `n |delta| + 1`
    pub outer_radius: T,
}

pub fn rouche_regions<T: Real>(n: usize, delta_abs: T) -> Result<RoucheRegions<T>> {
    let nd = T::of_usize(n) * delta_abs;
    let threshold = T::lit(3.0) + T::lit(2.0) * T::lit(2.0).sqrt();
    if !(nd > threshold) {
        return Err(Error::RegionsUndefined { n_delta: nd.to_f64_lossy() });
    }
    let s = nd + T::one();
    let root = (s * s - T::lit(8.0) * nd).sqrt();
    Ok(RoucheRegions {
        r_plus: (s + root) / T::lit(2.0),
        r_minus: (s - root) / T::lit(2.0),
        outer_radius: s,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RootCounts {
    pub outer: usize,
    pub gap: usize,
    pub inner: usize,
    pub outside: usize,
}

pub fn classify_roots<T: Real>(roots: &[C<T>], regions: &RoucheRegions<T>) -> RootCounts {
    let mut counts = RootCounts::default();
    for z in roots {
        let r = z.norm();
        if r >= regions.outer_radius {
            counts.outside += 1;
        } else if r >= regions.r_plus {
            counts.outer += 1;
        } else if r > regions.r_minus {
            counts.gap += 1;
        } else {
            counts.inner += 1;
        }
    }
    counts
}

/// Exact Catalan number `C_k` for `k <= 30`.
pub fn catalan(k: u32) -> Result<u64> {
    if k > 30 {
        return Err(Error::InvalidParameter(format!("catalan({k}) is outside the exact range k <= 30")));
    }
    let mut c: u64 = 1;
    for i in 0..k as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    Ok(c)
}

/// Truncated Catalan series for the outlier eigenvalue. `order` terms of the
/// sum are kept; `order = 0` gives `n delta + 1` (`n delta` when `m = n`).
pub fn outlier_series<T: Real>(spec: &ModelSpec<T>, order: usize) -> Result<C<T>> {
    check_delta(spec)?;
    let idx = compute_p_indices(spec.n, spec.m)?;
    let nd = spec.n_delta();
    if !(nd.norm() > T::one()) {
        return Err(Error::Precondition(format!("series needs n|delta| > 1, got {}", nd.norm())));
    }
    if order > idx.p1 {
        return Err(Error::Precondition(format!("order {order} exceeds p1 = {}", idx.p1)));
    }
    if idx.p1 == 0 {
        return Ok(nd);
    }
    let n = T::of_usize(spec.n);
    let m_over_n = T::of_usize(spec.m) / n;
    let one = C::<T>::one();
    let (shift, scale, mu, ratio) = match spec.variant {
        ModelVariant::Model1 => (one, one, C::new(m_over_n, T::zero()), nd.inv()),
        ModelVariant::Model2 => {
            let b = one + spec.a;
            (b, b, spec.a / (b * n) + m_over_n, b / nd)
        }
    };
    // term_k = C_k mu^{k+1} ratio^k, built by C_{k+1}/C_k = 2(2k+1)/(k+2)
    let mut term = mu;
    let mut sum = C::zero();
    for k in 0..order {
        sum = sum + term;
        let kk = T::of_usize(k);
        let growth = T::lit(2.0) * (T::lit(2.0) * kk + T::one()) / (kk + T::lit(2.0));
        term = term * mu * ratio * growth;
    }
    Ok(nd + shift - scale * sum)
}

/// Eigenvector `delta (lambda I - B)^{-1} 1` with `B = S^m (+ a S^{m+1})`,
/// normalized so that its entries sum to one.
pub fn eigenvector_for<T: Real>(spec: &ModelSpec<T>, lambda: C<T>) -> Result<Vec<C<T>>> {
    check_delta(spec)?;
    if lambda.is_zero() {
        return Err(Error::Precondition("lambda must be a nonzero eigenvalue".into()));
    }
    let n = spec.n;
    let b = build_model(&ModelSpec { delta: C::zero(), ..*spec })?;
    let ones = vec![C::<T>::one(); n];
    let mut v = solve_shifted(&b, lambda, &ones)?;
    let s: C<T> = v.iter().fold(C::zero(), |acc, &x| acc + x);
    if s.is_zero() || !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::EigenvectorResidual { residual: f64::INFINITY, threshold: 0.0 });
    }
    for x in &mut v {
        *x = *x / s;
    }
    let a = build_model(spec)?;
    check_eigen_residual(&a, lambda, &v)?;
    Ok(v)
}

fn check_eigen_residual<T: Real>(a: &ComplexMatrix<T>, lambda: C<T>, v: &[C<T>]) -> Result<()> {
    let av = a.mul_vec(v);
    let r: Vec<C<T>> = av.iter().zip(v).map(|(&x, &y)| x - y * lambda).collect();
    let residual = vec_norm(&r);
    let threshold = T::lit(1e-8) * matrix_2norm(a) * vec_norm(v);
    if !(residual <= threshold) {
        return Err(Error::EigenvectorResidual {
            residual: residual.to_f64_lossy(),
            threshold: threshold.to_f64_lossy(),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroMultiplicities {
    pub algebraic: usize,
    pub geometric: usize,
    pub defective: bool,
}

pub fn zero_multiplicities<T: Real>(spec: &ModelSpec<T>) -> Result<ZeroMultiplicities> {
    spec.validate()?;
    let p1 = compute_p_indices(spec.n, spec.m)?.p1;
    let algebraic = spec.n - p1 - 1;
    let geometric = spec.m - 1;
    Ok(ZeroMultiplicities { algebraic, geometric, defective: geometric < algebraic })
}
