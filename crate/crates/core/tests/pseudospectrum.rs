use num_complex::Complex64;
use proptest::prelude::*;
use pslab_core::exact::exact_spectrum;
use pslab_core::linalg::{eigenvalues, matrix_2norm, singular_min};
use pslab_core::model::{build_model, build_shift_power};
use pslab_core::pseudospectrum::*;
use pslab_core::{Matrix64, Model64};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fig_region() -> GridRegion<f64> {
    GridRegion::new((-1.5, 3.5), (-1.5, 1.5), 101, 61).unwrap()
}

#[test]
fn resolvent_grows_near_origin() {
    let a = build_model(&Model64::model1(50, 4, 0.01)).unwrap();
    let r = resolvent_norm_at(&a, c(0.1, 0.0));
    assert!(r >= 1e3, "resolvent {r}");
    assert!((r * singular_min(&a.shifted(c(0.1, 0.0))) - 1.0).abs() < 1e-12);
}

#[test]
fn schur_path_matches_svd_path() {
    for (m, region) in [
        (1usize, GridRegion::new((-1.5, 3.5), (-1.5, 1.5), 11, 7).unwrap()),
        (3, GridRegion::new((-1.2, 1.3), (-0.9, 1.1), 9, 9).unwrap()),
    ] {
        let a = build_model(&Model64::model1(50, m, 0.01)).unwrap();
        let norm = matrix_2norm(&a);
        let fast = grid_scan_with(&a, &region, SigmaMethod::Schur, None).unwrap();
        let slow = grid_scan_with(&a, &region, SigmaMethod::Svd, None).unwrap();
        for (f, s) in fast.sigma.iter().zip(&slow.sigma) {
            assert!((f - s).abs() <= 1e-6 * s + 1e-12 * norm, "{f} vs {s}");
        }
    }
}

#[test]
fn grid_is_conjugation_symmetric() {
    let a = build_model(&Model64::model2(30, 2, 0.02, 1.0)).unwrap();
    let region = GridRegion::new((-1.0, 2.0), (-1.0, 1.0), 13, 9).unwrap();
    let g = grid_scan(&a, &region).unwrap();
    let norm = matrix_2norm(&a);
    for j in 0..9 {
        for k in 0..13 {
            let (x, y) = (g.get(j, k), g.get(8 - j, k));
            assert!((x - y).abs() <= 1e-8 * x.max(y) + 1e-12 * norm, "({j},{k}): {x} vs {y}");
        }
    }
}

#[test]
fn grid_is_independent_of_worker_count() {
    let a = build_model(&Model64::model1(40, 2, 0.01)).unwrap();
    let region = GridRegion::new((-1.0, 1.0), (-1.0, 1.0), 15, 11).unwrap();
    let one = grid_scan_with(&a, &region, SigmaMethod::Schur, Some(1)).unwrap();
    let three = grid_scan_with(&a, &region, SigmaMethod::Schur, Some(3)).unwrap();
    assert!(one.sigma.iter().zip(&three.sigma).all(|(x, y)| x.to_bits() == y.to_bits()));
    let svd1 = grid_scan_with(&a, &region, SigmaMethod::Svd, Some(1)).unwrap();
    let svd2 = grid_scan_with(&a, &region, SigmaMethod::Svd, Some(2)).unwrap();
    assert_eq!(svd1, svd2);
}

#[test]
fn grid_entries_are_finite_and_small_near_eigenvalues() {
    let spec = Model64::model1(50, 2, 0.01);
    let a = build_model(&spec).unwrap();
    let g = grid_scan(&a, &fig_region()).unwrap();
    assert!(g.sigma.iter().all(|s| s.is_finite() && *s >= 0.0));
    let norm = matrix_2norm(&a);
    let ex = exact_spectrum(&spec, 1e-12).unwrap();
    let region = g.region;
    for j in 0..region.ny {
        for k in 0..region.nx {
            let z = region.node(j, k);
            if ex.nonzero_roots.iter().any(|r| (r - z).norm() < 1e-3) {
                assert!(g.get(j, k) <= 1e-2 * norm);
            }
        }
    }
}

#[test]
fn exact_roots_have_huge_resolvent() {
    for spec in [Model64::model1(40, 3, 0.01), Model64::model2(40, 2, 0.01, 1.0)] {
        let a = build_model(&spec).unwrap();
        let norm = matrix_2norm(&a);
        for z in exact_spectrum(&spec, 1e-12).unwrap().nonzero_roots {
            assert!(resolvent_norm_at(&a, z) >= 1e8 / norm);
        }
    }
}

#[test]
fn normal_matrix_resolvent_is_inverse_distance() {
    let eigs = [c(0.0, 0.0), c(1.0, 0.5), c(-0.5, -1.0), c(2.0, 0.0)];
    let a = Matrix64::diagonal(&eigs);
    for z in [c(0.3, 0.2), c(-1.0, 1.0), c(1.5, -0.4)] {
        let dist = eigs.iter().map(|e| (e - z).norm()).fold(f64::INFINITY, f64::min);
        assert!((resolvent_norm_at(&a, z) * dist - 1.0).abs() < 1e-6);
    }
    // nonnormal: only the inequality
    let a = build_model(&Model64::model1(30, 2, 0.01)).unwrap();
    let ev = eigenvalues(&a).unwrap().values;
    for z in [c(1.5, 0.5), c(-1.2, 0.0), c(0.0, 1.3)] {
        let dist = ev.iter().map(|e| (e - z).norm()).fold(f64::INFINITY, f64::min);
        assert!(resolvent_norm_at(&a, z) >= (1.0 - 1e-6) / dist);
    }
}

#[test]
fn shift_resolvent_grows_exponentially() {
    let logs: Vec<f64> = [20usize, 40, 80]
        .iter()
        .map(|&n| resolvent_norm_at(&build_shift_power::<f64>(n, 2), c(0.5, 0.0)).log10())
        .collect();
    assert!(logs[1] > logs[0] && logs[2] > logs[1]);
    assert!((logs[2] - logs[1]) / (logs[1] - logs[0]) >= 0.9);
}

#[test]
fn shift_pseudospectrum_fills_unit_disk() {
    let a = build_shift_power::<f64>(50, 1);
    let region = GridRegion::new((-1.3, 1.3), (-1.3, 1.3), 53, 53).unwrap();
    let g = grid_scan(&a, &region).unwrap();
    let comp = epsilon_region_containing_origin(&g, 1e-2).unwrap();
    assert!((comp.max_abs - 1.0).abs() < 0.15, "max_abs {}", comp.max_abs);
}

#[test]
fn origin_component_shrinks_with_m() {
    let spec = Model64::model1(50, 1, 0.01);
    let mut sizes = Vec::new();
    let mut areas = Vec::new();
    for m in 1..=4 {
        let a = build_model(&spec.with_m(m)).unwrap();
        let g = grid_scan(&a, &fig_region()).unwrap();
        sizes.push(epsilon_region_containing_origin(&g, 1e-3).unwrap().max_abs);
        areas.push(g.area_below(1e-3));
    }
    // m = 1 has no zero eigenvalue, so its component at the origin is empty
    assert_eq!(sizes[0], 0.0);
    assert!(sizes[3] < sizes[1], "{sizes:?}");
    assert!(areas[1..].windows(2).all(|w| w[1] < w[0]), "{areas:?}");
}

#[test]
fn containment_for_model_matrix() {
    let a = build_model(&Model64::model1(50, 2, 0.01)).unwrap();
    let r = perturbation_containment_check(&a, 1e-6, 100, 11).unwrap();
    assert_eq!(r.violations, 0);
    assert_eq!(r.eigenvalues_checked, 5000);
    assert!(r.max_margin < 0.0);
}

#[test]
fn containment_for_normal_matrix() {
    let a = Matrix64::diagonal(&[c(0.0, 0.0), c(1.0, 0.0)]);
    let r = perturbation_containment_check(&a, 0.1, 50, 3).unwrap();
    assert_eq!(r.violations, 0);
    // normal case: perturbed eigenvalues stay within eps of the spectrum
    assert!(r.max_margin < 0.0);
    assert!(perturbation_containment_check(&a, 0.1, 0, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn resolvent_bounded_by_inverse_distance(re in -2.0f64..3.0, im in -1.5f64..1.5, m in 1usize..6) {
        let a = build_model(&Model64::model1(20, m, 0.05)).unwrap();
        let ev = eigenvalues(&a).unwrap().values;
        let z = c(re, im);
        let dist = ev.iter().map(|e| (e - z).norm()).fold(f64::INFINITY, f64::min);
        prop_assume!(dist > 1e-6);
        prop_assert!(resolvent_norm_at(&a, z) >= (1.0 - 1e-6) / dist);
    }
}
