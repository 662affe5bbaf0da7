//! Shift powers, the all-ones rank-1 term, the two deterministic models and
//! the Gaussian-perturbed random model.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::rng::gaussian_entry;
use crate::scalar::{C, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelVariant {
    /// `S^m + delta J`
    Model1,
    /// `S^m + a S^{m+1} + delta J`
    Model2,
}

impl ModelVariant {
    pub fn number(self) -> u8 {
        match self {
            ModelVariant::Model1 => 1,
            ModelVariant::Model2 => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelSpec<T: Real> {
    pub variant: ModelVariant,
    pub n: usize,
    pub m: usize,
    pub delta: C<T>,
    /// Coefficient of `S^{m+1}`; ignored by `Model1`.
    pub a: C<T>,
}

impl<T: Real> ModelSpec<T> {
    pub fn model1(n: usize, m: usize, delta: T) -> Self {
        Self { variant: ModelVariant::Model1, n, m, delta: C::new(delta, T::zero()), a: C::zero() }
    }

    pub fn model2(n: usize, m: usize, delta: T, a: T) -> Self {
        Self {
            variant: ModelVariant::Model2,
            n,
            m,
            delta: C::new(delta, T::zero()),
            a: C::new(a, T::zero()),
        }
    }

    pub fn with_m(self, m: usize) -> Self {
        Self { m, ..self }
    }

    /// Effective `S^{m+1}` coefficient: zero for `Model1`.
    pub fn a_eff(&self) -> C<T> {
        match self.variant {
            ModelVariant::Model1 => C::zero(),
            ModelVariant::Model2 => self.a,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if self.m < 1 || self.m > self.n {
            return Err(Error::InvalidParameter(format!(
                "m = {} outside [1, n = {}]",
                self.m, self.n
            )));
        }
        let finite = |z: C<T>| z.re.is_finite() && z.im.is_finite();
        if !finite(self.delta) || !finite(self.a) {
            return Err(Error::InvalidParameter("delta and a must be finite".into()));
        }
        Ok(())
    }

    /// `n * delta` as a complex number.
    pub fn n_delta(&self) -> C<T> {
        self.delta * T::of_usize(self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomMatrixSpec<T: Real> {
    pub n: usize,
    pub m: usize,
    pub delta: C<T>,
    pub seed: u64,
}

/// `S^m`: ones on the `m`-th superdiagonal. `m = 0` gives the identity and
/// `m >= n` the zero matrix.
pub fn build_shift_power<T: Real>(n: usize, m: usize) -> ComplexMatrix<T> {
    let mut s = ComplexMatrix::zeros(n);
    for j in 0..n.saturating_sub(m) {
        s[(j, j + m)] = C::one();
    }
    s
}

pub fn build_model<T: Real>(spec: &ModelSpec<T>) -> Result<ComplexMatrix<T>> {
    spec.validate()?;
    let n = spec.n;
    let m = spec.m;
    let a = spec.a_eff();
    let mut out = ComplexMatrix::from_fn(n, |_, _| spec.delta);
    for j in 0..n.saturating_sub(m) {
        out[(j, j + m)] = out[(j, j + m)] + C::one();
    }
    if !a.is_zero() {
        for j in 0..n.saturating_sub(m + 1) {
            out[(j, j + m + 1)] = out[(j, j + m + 1)] + a;
        }
    }
    Ok(out)
}

/// `S^m + delta Z` with `Z_{jk} = X + iY` drawn from the stream keyed by `(seed, j, k)`.
pub fn build_random_perturbed<T: Real>(spec: &RandomMatrixSpec<T>) -> Result<ComplexMatrix<T>> {
    if spec.n == 0 || spec.m < 1 || spec.m > spec.n {
        return Err(Error::InvalidParameter(format!(
            "random model needs 1 <= m <= n, got n = {}, m = {}",
            spec.n, spec.m
        )));
    }
    let mut out = gaussian_matrix::<T>(spec.n, spec.seed).scale(spec.delta);
    for j in 0..spec.n - spec.m {
        out[(j, j + spec.m)] = out[(j, j + spec.m)] + C::one();
    }
    Ok(out)
}

/// The `n x n` complex Gaussian matrix `Z` for a seed.
pub fn gaussian_matrix<T: Real>(n: usize, seed: u64) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(n, |j, k| {
        let (x, y) = gaussian_entry(seed, j, k);
        C::new(T::lit(x), T::lit(y))
    })
}

/// `<S^l 1, 1> = (n - l) 1_{1 <= l <= n-1}`; the indicator is taken literally,
/// so `l = 0` yields 0.
pub fn ones_quadratic_form(n: usize, l: usize) -> usize {
    if l >= 1 && l < n {
        n - l
    } else {
        0
    }
}

/// `|| A^H A - A A^H ||_F`, zero exactly for normal matrices.
pub fn commutator_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let ah = a.adjoint();
    ah.matmul(a).sub(&a.matmul(&ah)).frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64 as cplx;

    #[test]
    fn shift_power_small_cases() {
        let s = build_shift_power::<f64>(3, 1);
        let expect = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s[(i, j)], cplx(expect[i][j], 0.0));
            }
        }
        assert_eq!(build_shift_power::<f64>(3, 3), ComplexMatrix::zeros(3));
        assert_eq!(build_shift_power::<f64>(3, 7), ComplexMatrix::zeros(3));
        assert_eq!(build_shift_power::<f64>(4, 0), ComplexMatrix::identity(4));
        let s1 = build_shift_power::<f64>(4, 1);
        assert_eq!(build_shift_power::<f64>(4, 2), s1.matmul(&s1));
    }

    #[test]
    fn model1_two_by_two() {
        let a = build_model(&ModelSpec::model1(2, 1, 0.5)).unwrap();
        assert_eq!(a[(0, 0)], cplx(0.5, 0.0));
        assert_eq!(a[(0, 1)], cplx(1.5, 0.0));
        assert_eq!(a[(1, 0)], cplx(0.5, 0.0));
        assert_eq!(a[(1, 1)], cplx(0.5, 0.0));
    }

    #[test]
    fn model2_nilpotent_terms_vanish() {
        let a = build_model(&ModelSpec::model2(2, 2, 1.0, 7.0)).unwrap();
        assert_eq!(a, ComplexMatrix::from_fn(2, |_, _| cplx(1.0, 0.0)));
    }

    #[test]
    fn model2_places_both_diagonals() {
        let a = build_model(&ModelSpec::model2(5, 2, 0.0, 3.0)).unwrap();
        assert_eq!(a[(0, 2)], cplx(1.0, 0.0));
        assert_eq!(a[(0, 3)], cplx(3.0, 0.0));
        assert_eq!(a[(2, 4)], cplx(1.0, 0.0));
        assert_eq!(a[(1, 4)], cplx(3.0, 0.0));
        assert_eq!(a[(2, 3)], cplx(0.0, 0.0));
    }

    #[test]
    fn model_rejects_bad_m() {
        assert!(build_model(&ModelSpec::model1(5, 0, 0.1)).is_err());
        assert!(build_model(&ModelSpec::model1(5, 6, 0.1)).is_err());
        assert!(build_model(&ModelSpec::<f64>::model1(0, 1, 0.1)).is_err());
    }

    #[test]
    fn random_model_with_zero_delta_is_shift() {
        let spec = RandomMatrixSpec { n: 50, m: 1, delta: cplx(0.0, 0.0), seed: 99 };
        assert_eq!(build_random_perturbed(&spec).unwrap(), build_shift_power(50, 1));
    }

    #[test]
    fn random_model_is_reproducible() {
        let spec = RandomMatrixSpec { n: 20, m: 3, delta: cplx(0.01, 0.0), seed: 5 };
        let a: ComplexMatrix<f64> = build_random_perturbed(&spec).unwrap();
        let b: ComplexMatrix<f64> = build_random_perturbed(&spec).unwrap();
        assert!(a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| {
            x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()
        }));
        let c: ComplexMatrix<f64> =
            build_random_perturbed(&RandomMatrixSpec { seed: 6, ..spec }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn gaussian_second_moment() {
        // E|X + iY|^2 = 2
        let z: ComplexMatrix<f64> = gaussian_matrix(200, 2024);
        let mean = z.as_slice().iter().map(|v| v.norm_sqr()).sum::<f64>() / 40_000.0;
        assert!((mean - 2.0).abs() < 0.1, "mean |Z|^2 = {mean}");
    }

    #[test]
    fn ones_quadratic_form_values() {
        assert_eq!(ones_quadratic_form(5, 2), 3);
        assert_eq!(ones_quadratic_form(5, 5), 0);
        assert_eq!(ones_quadratic_form(5, 0), 0);
        assert_eq!(ones_quadratic_form(7, 3), 4);
    }

    #[test]
    fn models_are_nonnormal_before_final_time() {
        for m in 1..=9 {
            let a = build_model(&ModelSpec::model1(10, m, 0.01)).unwrap();
            assert!(commutator_norm(&a) > 1e-3, "m = {m}");
        }
        let a = build_model(&ModelSpec::model1(10, 10, 0.01)).unwrap();
        assert!(commutator_norm(&a) < 1e-12);
    }
}
