//! Symbol curves `f(e^{iθ})` of `S^m + a S^{m+1}`, winding numbers, operator
//! spectrum membership, and the asymptotic circle configurations of the
//! nonzero roots.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};
use crate::exact::compute_p_indices;
use crate::model::{ModelSpec, ModelVariant};
use crate::scalar::{c64, C, Real};

/// Number of uniform samples a curve starts from.
pub const BASE_SAMPLES: usize = 4096;
const MAX_REFINE_DEPTH: u32 = 48;

/// `f(e^{iθ}) = e^{imθ} + a e^{i(m+1)θ}`.
pub fn symbol_eval(m: usize, a: C<f64>, theta: f64) -> C<f64> {
    let (s0, c0) = (m as f64 * theta).sin_cos();
    let (s1, c1) = ((m + 1) as f64 * theta).sin_cos();
    c64(c0, s0) + a * c64(c1, s1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolCurve {
    pub m: usize,
    pub a: C<f64>,
    pub thetas: Vec<f64>,
    pub points: Vec<C<f64>>,
}

impl SymbolCurve {
    pub fn new(m: usize, a: C<f64>) -> Result<Self> {
        Self::with_samples(m, a, BASE_SAMPLES)
    }

    pub fn with_samples(m: usize, a: C<f64>, samples: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter("symbol needs m >= 1".into()));
        }
        if samples < 3 || !(a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::InvalidParameter("symbol curve needs >= 3 samples and finite a".into()));
        }
        let thetas: Vec<f64> = (0..samples).map(|j| TAU * j as f64 / samples as f64).collect();
        let points = thetas.iter().map(|&t| symbol_eval(m, a, t)).collect();
        Ok(Self { m, a, thetas, points })
    }

    /// Distance below which a point counts as lying on the curve.
    pub fn tolerance(&self) -> f64 {
        1e-9 + 1e-6 * (c64(1.0, 0.0) + self.a).norm()
    }

    /// Distance from `w` to the closed piecewise-linear interpolant.
    pub fn distance_to(&self, w: C<f64>) -> f64 {
        let n = self.points.len();
        (0..n).map(|j| segment_distance(self.points[j], self.points[(j + 1) % n], w)).fold(f64::INFINITY, f64::min)
    }

    /// Winding number of the curve about `w`.
    pub fn winding_number(&self, w: C<f64>) -> Result<i64> {
        winding_number(self, w)
    }
}

fn segment_distance(p: C<f64>, q: C<f64>, w: C<f64>) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (w - p).norm();
    }
    let t = (((w - p) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p + d * t - w).norm()
}

/// Accumulated argument of `f(e^{iθ}) - w` over one revolution, divided by 2π.
/// Steps whose argument increment reaches π/2 are bisected in θ until it does
/// not.
pub fn winding_number(curve: &SymbolCurve, w: C<f64>) -> Result<i64> {
    let tol = curve.tolerance();
    let dist = curve.distance_to(w);
    if dist <= tol {
        return Err(Error::OnCurve { distance: dist });
    }
    let n = curve.points.len();
    let mut total = 0.0;
    for j in 0..n {
        let t0 = curve.thetas[j];
        let t1 = if j + 1 < n { curve.thetas[j + 1] } else { TAU };
        let p0 = curve.points[j];
        let p1 = if j + 1 < n { curve.points[j + 1] } else { curve.points[0] };
        total += arg_increment(curve, w, (t0, p0), (t1, p1), 0)?;
    }
    Ok((total / TAU).round() as i64)
}

fn arg_increment(
    curve: &SymbolCurve,
    w: C<f64>,
    (t0, p0): (f64, C<f64>),
    (t1, p1): (f64, C<f64>),
    depth: u32,
) -> Result<f64> {
    let step = ((p1 - w) / (p0 - w)).arg();
    if step.abs() < FRAC_PI_2 {
        return Ok(step);
    }
    let tm = 0.5 * (t0 + t1);
    let pm = symbol_eval(curve.m, curve.a, tm);
    let dist = segment_distance(p0, pm, w).min(segment_distance(pm, p1, w));
    if dist <= curve.tolerance() || depth >= MAX_REFINE_DEPTH {
        return Err(Error::OnCurve { distance: dist });
    }
    Ok(arg_increment(curve, w, (t0, p0), (tm, pm), depth + 1)? + arg_increment(curve, w, (tm, pm), (t1, p1), depth + 1)?)
}

/// Membership of `w` in the spectrum of the banded Toeplitz operator with
/// symbol `z^m + a z^{m+1}`: on the curve or with nonzero winding number.
pub fn operator_spectrum_contains(m: usize, a: C<f64>, w: C<f64>) -> Result<bool> {
    let curve = SymbolCurve::new(m, a)?;
    match winding_number(&curve, w) {
        Ok(k) => Ok(k != 0),
        Err(Error::OnCurve { .. }) => Ok(true),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticPrediction {
    /// `(1+a) e^{2πiℓ/(p1+1)}` for `ℓ = 1..=p1`.
    pub points: Vec<C<f64>>,
    /// `1 + a`, the omitted `ℓ = 0` point.
    pub excluded_point: C<f64>,
}

/// Limit configuration of the non-outlier roots as `n → ∞`.
pub fn asymptotic_predicted_roots<T: Real>(spec: &ModelSpec<T>) -> Result<AsymptoticPrediction> {
    spec.validate()?;
    let (n, m) = (spec.n, spec.m);
    if m > n - 1 {
        return Err(Error::HypothesisViolated(format!("needs m <= n - 1, got m = {m}, n = {n}")));
    }
    if spec.delta.im != T::zero() || !(spec.delta.re > T::zero()) {
        return Err(Error::HypothesisViolated("needs real delta > 0".into()));
    }
    let delta = spec.delta.re.to_f64_lossy();
    let nn = (n * n) as f64;
    let idx = compute_p_indices(n, m)?;
    let a = match spec.variant {
        ModelVariant::Model1 => {
            let bound = 4.0 * m as f64 / nn;
            if !(delta > bound) {
                return Err(Error::HypothesisViolated(format!("delta = {delta} <= 4m/n^2 = {bound}")));
            }
            0.0
        }
        ModelVariant::Model2 => {
            if spec.a.im != T::zero() {
                return Err(Error::HypothesisViolated("needs real a".into()));
            }
            let a = spec.a.re.to_f64_lossy();
            if idx.p1 != idx.p2 {
                return Err(Error::HypothesisViolated(format!("needs p1 = p2, got p1 = {}, p2 = {}", idx.p1, idx.p2)));
            }
            let bound = 4.0 * ((1.0 + a) * m as f64 + a) / nn;
            if !(delta > bound) {
                return Err(Error::HypothesisViolated(format!("delta = {delta} <= 4((1+a)m + a)/n^2 = {bound}")));
            }
            a
        }
    };
    let p1 = idx.p1;
    let radius = c64(1.0 + a, 0.0);
    let points =
        (1..=p1).map(|l| radius * C::from_polar(1.0, TAU * l as f64 / (p1 + 1) as f64)).collect();
    Ok(AsymptoticPrediction { points, excluded_point: radius })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictionDeviation {
    pub max_deviation: f64,
    pub mean_deviation: f64,
}

/// Drops the root nearest `outlier`, then pairs the remaining roots with the
/// predicted points greedily by ascending distance.
pub fn compare_to_prediction(
    roots: &[C<f64>],
    prediction: &AsymptoticPrediction,
    outlier: C<f64>,
) -> Result<PredictionDeviation> {
    if roots.is_empty() {
        return Err(Error::Empty("roots"));
    }
    if roots.len() != prediction.points.len() + 1 {
        return Err(Error::InvalidParameter(format!(
            "expected {} roots (prediction plus outlier), got {}",
            prediction.points.len() + 1,
            roots.len()
        )));
    }
    let drop = roots
        .iter()
        .enumerate()
        .min_by(|x, y| (x.1 - outlier).norm().total_cmp(&(y.1 - outlier).norm()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let rest: Vec<C<f64>> = roots.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, z)| *z).collect();
    if rest.is_empty() {
        return Ok(PredictionDeviation { max_deviation: 0.0, mean_deviation: 0.0 });
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(rest.len() * rest.len());
    for (i, r) in rest.iter().enumerate() {
        for (k, p) in prediction.points.iter().enumerate() {
            pairs.push(((r - p).norm(), i, k));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used_r = vec![false; rest.len()];
    let mut used_p = vec![false; rest.len()];
    let (mut max_dev, mut sum, mut matched) = (0.0f64, 0.0, 0usize);
    for (d, i, k) in pairs {
        if used_r[i] || used_p[k] {
            continue;
        }
        used_r[i] = true;
        used_p[k] = true;
        max_dev = max_dev.max(d);
        sum += d;
        matched += 1;
        if matched == rest.len() {
            break;
        }
    }
    Ok(PredictionDeviation { max_deviation: max_dev, mean_deviation: sum / matched as f64 })
}

impl AsymptoticPrediction {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `true` when no predicted point coincides with the excluded one.
pub fn excluded_point_absent(p: &AsymptoticPrediction) -> bool {
    p.points.iter().all(|z| (z - p.excluded_point).norm() > 1e-12)
}
