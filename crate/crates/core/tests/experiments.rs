use pslab_core::experiments::*;
use pslab_core::pseudospectrum::GridRegion;
use pslab_core::scalar::c64;
use pslab_core::Model64;

#[test]
fn deterministic_staircase_final_state() {
    let s = staircase_run_deterministic(&Model64::model1(200, 1, 0.01)).unwrap();
    assert_eq!(s.r.len(), 200);
    assert_eq!(s.dr.len(), 199);
    assert!((s.r_at(200) - 0.01).abs() < 1e-9, "R(n) = {}", s.r_at(200));
    assert_eq!(&s.marks[..4], &[199, 99, 66, 49]);
    assert!(s.r.iter().all(|&v| v >= 0.0));
}

#[test]
fn random_staircase_final_state_is_small() {
    let s = staircase_run(60, 0.01, 3, 5).unwrap();
    // at m = n only delta Z remains
    assert!(s.r_at(60) < 0.2);
    assert_eq!(s.skipped, 0);
    assert_eq!(s, staircase_run(60, 0.01, 3, 5).unwrap());
}

#[test]
fn common_pairing_reuses_gaussian_matrix() {
    assert_eq!(sample_seed(9, SamplePairing::Common, 3, 4), sample_seed(9, SamplePairing::Common, 7, 4));
    assert_ne!(sample_seed(9, SamplePairing::Independent, 3, 4), sample_seed(9, SamplePairing::Independent, 7, 4));
    let a = staircase_run_with(30, 0.01, 4, 1, SamplePairing::Common, Some(1)).unwrap();
    let b = staircase_run_with(30, 0.01, 4, 1, SamplePairing::Common, Some(2)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn conjecture1_outer_roots_approach_symbol_curve() {
    // The mean distance is about 0.11 at n = 200 and keeps falling with n; the
    // maximum is set by a short branch on the negative real axis.
    let grid = GridRegion::new((-0.5, 0.5), (-0.5, 0.5), 5, 5).unwrap();
    let means: Vec<f64> = [100usize, 200, 400]
        .iter()
        .map(|&n| {
            let r = conjecture1_probe(&Model64::model2(n, 2, 0.01, 1.0), &grid, 1e-3).unwrap();
            assert!(r.outer_count > 0);
            assert!(r.outer_match_distance >= r.outer_mean_distance);
            r.outer_mean_distance
        })
        .collect();
    assert!(means.windows(2).all(|w| w[1] < w[0]), "{means:?}");
    assert!(means[1] < 0.15 && means[2] < 0.1, "{means:?}");
}

#[test]
fn conjecture1_origin_component_shrinks() {
    let grid = GridRegion::new((-1.5, 1.5), (-1.5, 1.5), 61, 61).unwrap();
    let m2 = conjecture1_probe(&Model64::model2(50, 2, 0.01, 1.0), &grid, 1e-3).unwrap();
    let m3 = conjecture1_probe(&Model64::model2(50, 3, 0.01, 1.0), &grid, 1e-3).unwrap();
    assert!(m3.origin_component_size < m2.origin_component_size, "{} vs {}", m3.origin_component_size, m2.origin_component_size);
}

#[test]
fn conjecture1_trivial_at_final_time() {
    let grid = GridRegion::new((-1.0, 1.0), (-1.0, 1.0), 5, 5).unwrap();
    let r = conjecture1_probe(&Model64::model2(20, 20, 0.01, 1.0), &grid, 1e-3).unwrap();
    assert_eq!(r.outer_count, 0);
    assert!(conjecture1_probe(&Model64::model1(20, 3, 0.01), &grid, 1e-3).is_err());
    assert!(conjecture1_probe(&Model64::model2(20, 1, 0.01, 1.0), &grid, 1e-3).is_err());
}

#[test]
fn conjecture4_reports() {
    let grid = GridRegion::new((-1.5, 1.5), (-1.5, 1.5), 21, 21).unwrap();
    let r = conjecture4_probe(&[(100, 10), (200, 20)], 0.01, c64(1.0, 0.0), &grid, 1e-3).unwrap();
    assert_eq!(r.pairs.len(), 2);
    assert!(r.size_spread >= 0.0 && r.radius_spread >= 0.0);
    let single = conjecture4_probe(&[(40, 4)], 0.01, c64(1.0, 0.0), &grid, 1e-3).unwrap();
    assert_eq!(single.pairs.len(), 1);
    assert_eq!(single.size_spread, 0.0);
    assert!(conjecture4_probe(&[(100, 10), (200, 30)], 0.01, c64(1.0, 0.0), &grid, 1e-3).is_err());
    assert!(conjecture4_probe(&[], 0.01, c64(1.0, 0.0), &grid, 1e-3).is_err());
}
