//! ε-pseudospectra on rectangular grids, the origin component, and the
//! perturbation characterization `σ_ε(A) = ∪_{‖E‖<ε} σ(A+E)`.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, matrix_2norm, singular_min, ShiftedSigmaMin};
use crate::matrix::ComplexMatrix;
use crate::model::gaussian_matrix;
use crate::rng::derive_seed;
use crate::scalar::{C, Real};

/// Rectangle `[re_min, re_max] x [im_min, im_max]` sampled at `nx * ny` nodes
/// (endpoints included).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRegion<T: Real> {
    pub re_min: T,
    pub re_max: T,
    pub im_min: T,
    pub im_max: T,
    pub nx: usize,
    pub ny: usize,
}

impl<T: Real> GridRegion<T> {
    pub fn new(re: (T, T), im: (T, T), nx: usize, ny: usize) -> Result<Self> {
        let r = Self { re_min: re.0, re_max: re.1, im_min: im.0, im_max: im.1, nx, ny };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let ordered = self.re_min < self.re_max && self.im_min < self.im_max;
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite());
        if !ordered || !finite {
            return Err(Error::InvalidParameter("grid bounds must be finite with min < max".into()));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidParameter("grid needs at least 2 nodes per axis".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> T {
        (self.re_max - self.re_min) / T::of_usize(self.nx - 1)
    }

    pub fn dy(&self) -> T {
        (self.im_max - self.im_min) / T::of_usize(self.ny - 1)
    }

    /// Node in row `j` (imaginary axis) and column `k` (real axis).
    pub fn node(&self, j: usize, k: usize) -> C<T> {
        C::new(self.re_min + T::of_usize(k) * self.dx(), self.im_min + T::of_usize(j) * self.dy())
    }

    pub fn contains(&self, z: C<T>) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    /// `(j, k)` of the node nearest to `z`, if `z` is inside the rectangle.
    pub fn nearest_node(&self, z: C<T>) -> Option<(usize, usize)> {
        if !self.contains(z) {
            return None;
        }
        let k = ((z.re - self.re_min) / self.dx()).round().to_usize()?.min(self.nx - 1);
        let j = ((z.im - self.im_min) / self.dy()).round().to_usize()?.min(self.ny - 1);
        Some((j, k))
    }
}

/// How `σ_min(zI - A)` is evaluated at each node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SigmaMethod {
    /// One-sided Jacobi SVD of `zI - A` per node.
    Svd,
    /// One Schur reduction, then inverse Lanczos on the triangular factor.
    #[default]
    Schur,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudospectrumGrid<T: Real> {
    pub region: GridRegion<T>,
    /// Row-major `ny x nx`; row `j` is the line `Im z = im_min + j dy`.
    pub sigma: Vec<T>,
}

impl<T: Real> PseudospectrumGrid<T> {
    pub fn get(&self, j: usize, k: usize) -> T {
        self.sigma[j * self.region.nx + k]
    }

    pub fn row(&self, j: usize) -> &[T] {
        let nx = self.region.nx;
        &self.sigma[j * nx..(j + 1) * nx]
    }

    /// `log10 ‖(zI - A)^{-1}‖ = -log10 σ_min`; `+inf` where σ_min is zero.
    pub fn log_resolvent(&self, j: usize, k: usize) -> T {
        -self.get(j, k).log10()
    }

    /// Area of `{σ < eps}` counted over all nodes.
    pub fn area_below(&self, eps: T) -> T {
        let cells = self.sigma.iter().filter(|&&s| s < eps).count();
        T::of_usize(cells) * self.region.dx() * self.region.dy()
    }
}

fn underflow_floor<T: Real>() -> T {
    T::lit(1e-300).max(T::min_positive_value())
}

/// `‖(zI - A)^{-1}‖_2 = 1 / σ_min(zI - A)`, or `+inf` once σ_min drops below 1e-300.
pub fn resolvent_norm_at<T: Real>(a: &ComplexMatrix<T>, z: C<T>) -> T {
    let s = singular_min(&a.shifted(z));
    if s < underflow_floor() {
        T::infinity()
    } else {
        T::one() / s
    }
}

pub fn grid_scan<T: Real>(a: &ComplexMatrix<T>, region: &GridRegion<T>) -> Result<PseudospectrumGrid<T>> {
    grid_scan_with(a, region, SigmaMethod::default(), None)
}

/// Grid scan with an explicit σ_min method and worker count (`None` uses the
/// global rayon pool). Every node is evaluated independently, so the output
/// does not depend on `workers`.
pub fn grid_scan_with<T: Real>(
    a: &ComplexMatrix<T>,
    region: &GridRegion<T>,
    method: SigmaMethod,
    workers: Option<usize>,
) -> Result<PseudospectrumGrid<T>> {
    region.validate()?;
    if !a.is_finite() {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    let nodes: Vec<C<T>> = (0..region.ny)
        .flat_map(|j| (0..region.nx).map(move |k| (j, k)))
        .map(|(j, k)| region.node(j, k))
        .collect();
    let fast = match method {
        SigmaMethod::Schur => Some(ShiftedSigmaMin::new(a)?),
        SigmaMethod::Svd => None,
    };
    let eval = |z: &C<T>| -> T {
        let s = match &fast {
            Some(f) => f.sigma_min(*z),
            None => singular_min(&a.shifted(*z)),
        };
        s.max(T::zero())
    };
    let sigma: Vec<T> = match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            pool.install(|| nodes.par_iter().map(eval).collect())
        }
        None => nodes.par_iter().map(eval).collect(),
    };
    Ok(PseudospectrumGrid { region: *region, sigma })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OriginComponent<T: Real> {
    pub area: T,
    pub max_abs: T,
    pub cells: usize,
}

/// 4-connected component of `{σ < eps}` containing the node nearest 0.
/// An origin node at or above `eps` yields the empty component.
pub fn epsilon_region_containing_origin<T: Real>(grid: &PseudospectrumGrid<T>, eps: T) -> Result<OriginComponent<T>> {
    if !(eps > T::zero()) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let region = &grid.region;
    let (j0, k0) = region
        .nearest_node(C::new(T::zero(), T::zero()))
        .ok_or_else(|| Error::Precondition("origin is outside the grid".into()))?;
    let empty = OriginComponent { area: T::zero(), max_abs: T::zero(), cells: 0 };
    if !(grid.get(j0, k0) < eps) {
        return Ok(empty);
    }
    let (nx, ny) = (region.nx, region.ny);
    let mut seen = vec![false; nx * ny];
    let mut queue = VecDeque::from([(j0, k0)]);
    seen[j0 * nx + k0] = true;
    let mut cells = 0usize;
    let mut max_abs = T::zero();
    while let Some((j, k)) = queue.pop_front() {
        cells += 1;
        max_abs = max_abs.max(region.node(j, k).norm());
        let mut visit = |jj: usize, kk: usize| {
            let idx = jj * nx + kk;
            if !seen[idx] && grid.sigma[idx] < eps {
                seen[idx] = true;
                queue.push_back((jj, kk));
            }
        };
        if j > 0 {
            visit(j - 1, k);
        }
        if j + 1 < ny {
            visit(j + 1, k);
        }
        if k > 0 {
            visit(j, k - 1);
        }
        if k + 1 < nx {
            visit(j, k + 1);
        }
    }
    Ok(OriginComponent { area: T::of_usize(cells) * region.dx() * region.dy(), max_abs, cells })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContainmentReport<T: Real> {
    pub trials: usize,
    pub eigenvalues_checked: usize,
    pub violations: usize,
    /// Largest `σ_min(μI - A) - eps` over all perturbed eigenvalues `μ`;
    /// negative when every eigenvalue lies inside the pseudospectrum.
    pub max_margin: T,
}

/// Draws `trials` complex Gaussian perturbations, rescales each to
/// `‖E‖ = 0.99 eps` and checks that every eigenvalue of `A + E` lies in the
/// ε-pseudospectrum of `A`.
pub fn perturbation_containment_check<T: Real>(
    a: &ComplexMatrix<T>,
    eps: T,
    trials: usize,
    seed: u64,
) -> Result<ContainmentReport<T>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let perturbations: Vec<ComplexMatrix<T>> =
        (0..trials).map(|t| gaussian_matrix(a.dim(), derive_seed(seed, &[t as u64]))).collect();
    containment_check_with(a, eps, &perturbations)
}

/// Containment check over caller-supplied perturbation directions. Nonzero
/// directions are rescaled to `‖E‖ = 0.99 eps`; zero ones are used as is.
pub fn containment_check_with<T: Real>(
    a: &ComplexMatrix<T>,
    eps: T,
    perturbations: &[ComplexMatrix<T>],
) -> Result<ContainmentReport<T>> {
    if !(eps > T::zero()) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let norm_a = matrix_2norm(a);
    let slack = T::lit(1e-8) * norm_a;
    let fast = ShiftedSigmaMin::new(a)?;
    let per_trial: Vec<Result<(usize, usize, T)>> = perturbations
        .par_iter()
        .map(|e| {
            let ne = matrix_2norm(e);
            let scaled = if ne > T::zero() { e.scale(C::new(T::lit(0.99) * eps / ne, T::zero())) } else { e.clone() };
            let mu = eigenvalues(&a.add(&scaled))?.values;
            let mut violations = 0;
            let mut margin = T::neg_infinity();
            for &z in &mu {
                let mut s = fast.sigma_min(z);
                // Confirm borderline values with the dense SVD.
                if s > T::lit(0.5) * eps {
                    s = singular_min(&a.shifted(z));
                }
                margin = margin.max(s - eps);
                if s >= eps + slack {
                    violations += 1;
                }
            }
            Ok((mu.len(), violations, margin))
        })
        .collect();
    let mut report =
        ContainmentReport { trials: perturbations.len(), eigenvalues_checked: 0, violations: 0, max_margin: T::neg_infinity() };
    for r in per_trial {
        let (count, v, m) = r?;
        report.eigenvalues_checked += count;
        report.violations += v;
        report.max_margin = report.max_margin.max(m);
    }
    Ok(report)
}
