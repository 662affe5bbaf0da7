//! Mean-radius staircases of the random and deterministic models,
//! pseudospectral shrinkage series and the conjecture probes.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::exact_spectrum;
use crate::linalg::eigenvalues;
use crate::model::{build_model, build_random_perturbed, ModelSpec, ModelVariant, RandomMatrixSpec};
use crate::pseudospectrum::{epsilon_region_containing_origin, grid_scan, GridRegion, OriginComponent};
use crate::rng::derive_seed;
use crate::scalar::{c64, C, Real};
use crate::symbol::SymbolCurve;

/// Mean of `|λ|` over every entry, outliers included.
pub fn mean_radius<T: Real>(eigs: &[C<T>]) -> Result<T> {
    if eigs.is_empty() {
        return Err(Error::Empty("eigenvalues"));
    }
    Ok(eigs.iter().map(|z| z.norm()).sum::<T>() / T::of_usize(eigs.len()))
}

/// How the Gaussian matrices of different times `m` relate within one sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplePairing {
    /// Fresh `Z` for every `(m, s)`.
    #[default]
    Independent,
    /// One `Z` per sample `s`, reused for every `m`.
    Common,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StaircaseSeries {
    pub n: usize,
    pub delta: f64,
    pub samples: usize,
    pub seed: u64,
    pub pairing: Option<SamplePairing>,
    /// `r[m-1] = R(m)` for `m = 1..=n`.
    pub r: Vec<f64>,
    /// Standard error of `R(m)` over samples (zero for deterministic runs).
    pub r_stderr: Vec<f64>,
    /// `dr[m-1] = R(m+1) - R(m)` for `m = 1..n`.
    pub dr: Vec<f64>,
    /// Standard error of each increment.
    pub dr_stderr: Vec<f64>,
    /// `floor((n-1)/k)` for `k = 1..=13`, distinct and nonzero.
    pub marks: Vec<usize>,
    pub skipped: usize,
}

impl StaircaseSeries {
    pub fn r_at(&self, m: usize) -> f64 {
        self.r[m - 1]
    }

    /// Times `m` at which `R(m+1) > R(m) + k * stderr(dR(m))`.
    pub fn monotonicity_violations(&self, k: f64) -> Vec<usize> {
        (0..self.dr.len()).filter(|&i| self.dr[i] > k * self.dr_stderr[i]).map(|i| i + 1).collect()
    }

    pub fn spikes(&self) -> Vec<usize> {
        detect_spikes(&self.dr, SPIKE_WINDOW, SPIKE_FACTOR)
    }
}

pub const SPIKE_WINDOW: usize = 10;
pub const SPIKE_FACTOR: f64 = 5.0;

/// Annotation times `floor((n-1)/k)`, `k = 1..=13`.
pub fn staircase_marks(n: usize) -> Vec<usize> {
    let mut marks: Vec<usize> = (1..=13).map(|k| n.saturating_sub(1) / k).filter(|&m| m > 0).collect();
    marks.dedup();
    marks
}

/// Times `m` (1-based, `dR(m) = R(m+1) - R(m)`) where `|dR(m)|` exceeds
/// `factor` times the median of `|dR|` over `m ± window`.
pub fn detect_spikes(dr: &[f64], window: usize, factor: f64) -> Vec<usize> {
    let abs: Vec<f64> = dr.iter().map(|v| v.abs()).collect();
    let mut out = Vec::new();
    for i in 0..abs.len() {
        let lo = i.saturating_sub(window);
        let hi = (i + window).min(abs.len() - 1);
        let mut w: Vec<f64> = abs[lo..=hi].to_vec();
        w.sort_by(f64::total_cmp);
        let median = if w.len() % 2 == 1 { w[w.len() / 2] } else { 0.5 * (w[w.len() / 2 - 1] + w[w.len() / 2]) };
        if abs[i] > factor * median {
            out.push(i + 1);
        }
    }
    out
}

pub fn staircase_run(n: usize, delta: f64, samples: usize, seed: u64) -> Result<StaircaseSeries> {
    staircase_run_with(n, delta, samples, seed, SamplePairing::default(), None)
}

/// Seed of the Gaussian matrix used at time `m` in sample `s`.
pub fn sample_seed(seed: u64, pairing: SamplePairing, m: usize, s: usize) -> u64 {
    match pairing {
        SamplePairing::Independent => derive_seed(seed, &[m as u64, s as u64]),
        SamplePairing::Common => derive_seed(seed, &[s as u64]),
    }
}

/// Random-model staircase. Work items `(m, s)` run in parallel (on a pool of
/// `workers` threads when given); results are reduced in index order, so the
/// series depends only on the inputs.
pub fn staircase_run_with(
    n: usize,
    delta: f64,
    samples: usize,
    seed: u64,
    pairing: SamplePairing,
    workers: Option<usize>,
) -> Result<StaircaseSeries> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    if !delta.is_finite() {
        return Err(Error::InvalidParameter("delta must be finite".into()));
    }
    let items: Vec<(usize, usize)> = (1..=n).flat_map(|m| (0..samples).map(move |s| (m, s))).collect();
    let work = |&(m, s): &(usize, usize)| -> Option<f64> {
        let spec = RandomMatrixSpec { n, m, delta: c64(delta, 0.0), seed: sample_seed(seed, pairing, m, s) };
        let a = build_random_perturbed(&spec).ok()?;
        let eigs = eigenvalues(&a).ok()?.values;
        mean_radius(&eigs).ok()
    };
    let radii: Vec<Option<f64>> = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| items.par_iter().map(work).collect()),
        None => items.par_iter().map(work).collect(),
    };
    let total = radii.len();
    let skipped = radii.iter().filter(|r| r.is_none()).count();
    if skipped * 100 > total {
        return Err(Error::TooManyFailures { failed: skipped, total });
    }

    let per_m: Vec<&[Option<f64>]> = radii.chunks(samples).collect();
    let mut r = Vec::with_capacity(n);
    let mut r_stderr = Vec::with_capacity(n);
    for chunk in &per_m {
        let vals: Vec<f64> = chunk.iter().flatten().copied().collect();
        let (mean, se) = mean_and_stderr(&vals);
        r.push(mean);
        r_stderr.push(se);
    }
    let mut dr = Vec::with_capacity(n.saturating_sub(1));
    let mut dr_stderr = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        dr.push(r[i + 1] - r[i]);
        let se = match pairing {
            SamplePairing::Independent => r_stderr[i].hypot(r_stderr[i + 1]),
            SamplePairing::Common => {
                let diffs: Vec<f64> = per_m[i]
                    .iter()
                    .zip(per_m[i + 1].iter())
                    .filter_map(|(a, b)| Some(b.as_ref()? - a.as_ref()?))
                    .collect();
                mean_and_stderr(&diffs).1
            }
        };
        dr_stderr.push(se);
    }
    Ok(StaircaseSeries {
        n,
        delta,
        samples,
        seed,
        pairing: Some(pairing),
        r,
        r_stderr,
        dr,
        dr_stderr,
        marks: staircase_marks(n),
        skipped,
    })
}

fn mean_and_stderr(vals: &[f64]) -> (f64, f64) {
    if vals.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let k = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / k;
    if vals.len() < 2 {
        return (mean, 0.0);
    }
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Staircase of the deterministic model: `spec` with `m` swept over `1..=n`,
/// `R(m)` from the full dense spectrum of each model matrix.
pub fn staircase_run_deterministic(spec: &ModelSpec<f64>) -> Result<StaircaseSeries> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let r: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|m| {
            let a = build_model(&spec.with_m(m))?;
            mean_radius(&eigenvalues(&a)?.values)
        })
        .collect::<Result<_>>()?;
    let dr: Vec<f64> = r.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(StaircaseSeries {
        n,
        delta: spec.delta.re,
        samples: 0,
        seed: 0,
        pairing: None,
        r_stderr: vec![0.0; n],
        dr_stderr: vec![0.0; dr.len()],
        dr,
        r,
        marks: staircase_marks(n),
        skipped: 0,
    })
}

/// Origin component of the ε-pseudospectrum for each `m` in `ms`.
pub fn pseudospectrum_shrinkage(
    spec: &ModelSpec<f64>,
    ms: &[usize],
    region: &GridRegion<f64>,
    eps: f64,
) -> Result<Vec<(usize, OriginComponent<f64>)>> {
    ms.iter()
        .map(|&m| {
            let a = build_model(&spec.with_m(m))?;
            let grid = grid_scan(&a, region)?;
            Ok((m, epsilon_region_containing_origin(&grid, eps)?))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub variant: u8,
    pub n: usize,
    pub m: usize,
    pub delta: [f64; 2],
    pub a: [f64; 2],
    /// Roots counted as the outer curve: non-outlier roots above this modulus.
    pub outer_threshold: f64,
    pub outer_count: usize,
    /// Largest distance from an outer root to the symbol curve.
    pub outer_match_distance: f64,
    pub outer_mean_distance: f64,
    /// `max |z|` over the origin component of the ε-pseudospectrum.
    pub origin_component_size: f64,
    pub origin_component_area: f64,
    pub eps: f64,
    pub notes: String,
}

/// Compares the outer exact roots with the symbol curve of the operator and
/// measures the pseudospectral component around the origin. Report only.
pub fn conjecture1_probe(spec: &ModelSpec<f64>, grid: &GridRegion<f64>, eps: f64) -> Result<ConjectureReport> {
    if spec.variant != ModelVariant::Model2 {
        return Err(Error::Precondition("conjecture 1 probe needs a model 2 spec".into()));
    }
    if spec.m < 2 {
        return Err(Error::Precondition("conjecture 1 probe needs m >= 2".into()));
    }
    let ex = exact_spectrum(spec, crate::exact::DEFAULT_ROOT_TOL)?;
    let rest: Vec<C<f64>> = ex
        .nonzero_roots
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != ex.outlier_index)
        .map(|(_, z)| *z)
        .collect();
    let max_mod = rest.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let threshold = 0.5 * max_mod;
    let outer: Vec<C<f64>> = rest.iter().copied().filter(|z| z.norm() > threshold).collect();
    let curve = SymbolCurve::new(spec.m, spec.a)?;
    let dists: Vec<f64> = outer.iter().map(|&z| curve.distance_to(z)).collect();
    let (outer_match_distance, outer_mean_distance) = if dists.is_empty() {
        (0.0, 0.0)
    } else {
        (dists.iter().copied().fold(0.0, f64::max), dists.iter().sum::<f64>() / dists.len() as f64)
    };
    let a = build_model(spec)?;
    let comp = epsilon_region_containing_origin(&grid_scan(&a, grid)?, eps)?;
    let notes = if rest.is_empty() {
        "only the outlier is nonzero; no outer curve".to_string()
    } else {
        format!("outer subset: {} of {} non-outlier roots with |z| > {threshold:.6}", outer.len(), rest.len())
    };
    Ok(ConjectureReport {
        variant: spec.variant.number(),
        n: spec.n,
        m: spec.m,
        delta: [spec.delta.re, spec.delta.im],
        a: [spec.a.re, spec.a.im],
        outer_threshold: threshold,
        outer_count: outer.len(),
        outer_match_distance,
        outer_mean_distance,
        origin_component_size: comp.max_abs,
        origin_component_area: comp.area,
        eps,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioPairMetrics {
    pub n: usize,
    pub m: usize,
    pub origin_component_size: f64,
    /// Largest modulus among the non-outlier exact roots.
    pub outer_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub pairs: Vec<RatioPairMetrics>,
    /// `(max - min) / max` of each metric over pairs with `n >= 100`.
    pub size_spread: f64,
    pub radius_spread: f64,
    /// Both spreads below 25 %.
    pub consistent: bool,
}

/// Size metrics along `(n, m)` pairs sharing one ratio `m/n`.
pub fn conjecture4_probe(
    pairs: &[(usize, usize)],
    delta: f64,
    a: C<f64>,
    grid: &GridRegion<f64>,
    eps: f64,
) -> Result<RatioReport> {
    let (n0, m0) = *pairs.first().ok_or(Error::Empty("pairs"))?;
    for w in pairs.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::Precondition("pairs must have increasing n".into()));
        }
    }
    if pairs.iter().any(|&(n, m)| m * n0 != m0 * n) {
        return Err(Error::Precondition("all pairs must share the same ratio m/n".into()));
    }
    let metrics = pairs
        .iter()
        .map(|&(n, m)| {
            let spec = ModelSpec { a, ..ModelSpec::model2(n, m, delta, 0.0) };
            let ex = exact_spectrum(&spec, crate::exact::DEFAULT_ROOT_TOL)?;
            let outer_radius = ex
                .nonzero_roots
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != ex.outlier_index)
                .map(|(_, z)| z.norm())
                .fold(0.0, f64::max);
            let comp = epsilon_region_containing_origin(&grid_scan(&build_model(&spec)?, grid)?, eps)?;
            Ok(RatioPairMetrics { n, m, origin_component_size: comp.max_abs, outer_radius })
        })
        .collect::<Result<Vec<_>>>()?;
    let spread = |f: &dyn Fn(&RatioPairMetrics) -> f64| {
        let vals: Vec<f64> = metrics.iter().filter(|p| p.n >= 100).map(f).collect();
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        if vals.len() < 2 || hi <= 0.0 {
            0.0
        } else {
            (hi - lo) / hi
        }
    };
    let size_spread = spread(&|p| p.origin_component_size);
    let radius_spread = spread(&|p| p.outer_radius);
    Ok(RatioReport { pairs: metrics, size_spread, radius_spread, consistent: size_spread < 0.25 && radius_spread < 0.25 })
}
