use num_complex::Complex64;
use proptest::prelude::*;
use pslab_core::exact::*;
use pslab_core::linalg::{eigenvalues, matrix_2norm, singular_min, singular_values};
use pslab_core::model::{build_model, ModelSpec};
use pslab_core::poly::ComplexPolynomial;
use pslab_core::{Model64, Real};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Characteristic polynomial from the resolvent expansion
/// `z^{p+1} - delta sum_j z^{p-j} <B^j 1, 1>` with `B = S^m + a S^{m+1}`,
/// where `<S^l 1, 1> = n - l` for `l < n`.
fn charpoly_oracle(n: usize, m: usize, delta: Complex64, a: Complex64) -> Vec<Complex64> {
    let p1 = (n - 1) / m;
    let mut coeffs = vec![c(0.0, 0.0); p1 + 2];
    coeffs[p1 + 1] = c(1.0, 0.0);
    for j in 0..=p1 {
        let mut moment = c(0.0, 0.0);
        for q in 0..=j {
            let shift = m * j + q;
            if shift < n {
                moment += a.powu(q as u32) * binom(j, q) * (n - shift) as f64;
            }
        }
        coeffs[p1 - j] = -delta * moment;
    }
    coeffs
}

fn assert_poly_close(got: &ComplexPolynomial<f64>, want: &[Complex64]) {
    assert_eq!(got.coeffs().len(), want.len());
    for (k, (g, w)) in got.coeffs().iter().zip(want).enumerate() {
        assert!((g - w).norm() <= 1e-12 * (1.0 + w.norm()), "k = {k}: {g} vs {w}");
    }
}

#[test]
fn model1_charpoly_matches_resolvent_expansion() {
    for n in [1usize, 2, 5, 17, 60] {
        for m in 1..=n {
            let spec = Model64::model1(n, m, 0.037);
            let p = assemble_charpoly(&spec).unwrap();
            assert_poly_close(&p, &charpoly_oracle(n, m, c(0.037, 0.0), c(0.0, 0.0)));
        }
    }
}

#[test]
fn model2_charpoly_matches_resolvent_expansion() {
    for &a in &[c(1.0, 0.0), c(0.5, 0.0), c(-0.3, 0.4), c(2.0, -1.0)] {
        for n in [2usize, 10, 23, 41] {
            for m in 1..=n {
                let spec = Model64 { a, delta: c(0.01, 0.02), ..Model64::model2(n, m, 0.0, 0.0) };
                let p = assemble_charpoly(&spec).unwrap();
                assert_poly_close(&p, &charpoly_oracle(n, m, spec.delta, a));
            }
        }
    }
}

#[test]
fn model2_closed_form_with_correction() {
    // Closed-form coefficients minus the binomial correction block, small case
    // where no cancellation occurs.
    let (n, m) = (10usize, 2usize);
    let spec = Model64::model2(n, m, 0.01, 1.0);
    let p = assemble_charpoly(&spec).unwrap();
    let (p1, p2) = (4usize, 3usize);
    for k in 0..=p1 {
        let j = p1 - k;
        let closed = 2f64.powi(j as i32) * (n - m * j) as f64 - if j > 0 { j as f64 * 2f64.powi(j as i32 - 1) } else { 0.0 };
        let mut coeff = -0.01 * closed;
        if k < p1 - p2 {
            coeff -= 0.01 * n as f64 * correction_sum(n, m, j, c(1.0, 0.0)).re;
        }
        assert!((p.coeffs()[k] - c(coeff, 0.0)).norm() < 1e-15, "k = {k}");
    }
}

#[test]
fn charpoly_roots_are_dense_eigenvalues() {
    let specs = [
        Model64::model1(30, 4, 0.1),
        Model64::model1(25, 1, 0.5),
        Model64::model2(30, 3, 0.1, 1.0),
        Model64::model2(21, 2, 0.3, -0.5),
    ];
    for spec in specs {
        let exact = exact_spectrum(&spec, 1e-12).unwrap();
        let a = build_model(&spec).unwrap();
        let norm = matrix_2norm(&a);
        for &z in &exact.nonzero_roots {
            let s = singular_min(&a.shifted(z));
            assert!(s <= 1e-8 * norm, "{spec:?}: sigma_min at {z} = {s}");
        }
        // the outlier is well conditioned and shows up in the dense spectrum too
        let dense = eigenvalues(&a).unwrap().values;
        let nearest = dense.iter().map(|&d| (d - exact.outlier()).norm()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-8, "{spec:?}: outlier gap {nearest}");
    }
}

#[test]
fn outlier_near_three_for_model1() {
    let spec = Model64::model1(200, 1, 0.01);
    let ex = exact_spectrum(&spec, 1e-12).unwrap();
    assert_eq!(ex.nonzero_roots.len(), 200);
    assert_eq!(ex.zero_algebraic_multiplicity, 0);
    let out = ex.outlier();
    assert!((out.re - 2.994).abs() < 1e-3 && out.im.abs() < 1e-12, "outlier {out}");
    let series = outlier_series(&spec, 199).unwrap();
    assert!((series - out).norm() < 1e-10, "series {series} vs root {out}");
    // leading terms of the expansion
    let three_terms = 3.0 - 1.0 / 200.0 - 1.0 / (200.0f64.powi(2) * 2.0) - 2.0 / (200.0f64.powi(3) * 4.0);
    assert!((outlier_series(&spec, 3).unwrap() - c(three_terms, 0.0)).norm() < 1e-15);
}

#[test]
fn model1_m2_has_hundred_nonzero_roots() {
    let ex = exact_spectrum(&Model64::model1(200, 2, 0.01), 1e-12).unwrap();
    assert_eq!(ex.nonzero_roots.len(), 100);
    assert_eq!(ex.zero_algebraic_multiplicity, 100);
}

#[test]
fn model2_outlier_near_four() {
    for m in 1..=4usize {
        let spec = Model64::model2(200, m, 0.01, 1.0);
        let ex = exact_spectrum(&spec, 1e-12).unwrap();
        let predicted = 3.995 - m as f64 / 100.0;
        assert!((ex.outlier() - c(predicted, 0.0)).norm() < 5e-3, "m = {m}: {}", ex.outlier());
    }
    let s = outlier_series(&Model64::model2(200, 2, 0.01, 1.0), 1).unwrap();
    assert!((s - c(3.975, 0.0)).norm() < 1e-14);
}

#[test]
fn rank_one_case() {
    let spec = Model64::model1(9, 9, 0.2);
    let ex = exact_spectrum(&spec, 1e-12).unwrap();
    assert_eq!(ex.nonzero_roots.len(), 1);
    assert!((ex.outlier() - c(1.8, 0.0)).norm() < 1e-15);
    assert!((outlier_series(&spec, 0).unwrap() - c(1.8, 0.0)).norm() < 1e-15);
    assert!(outlier_series(&spec, 1).is_err());
    let v = eigenvector_for(&spec, c(1.8, 0.0)).unwrap();
    for x in &v {
        assert!((x - c(1.0 / 9.0, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn series_rejects_small_n_delta_and_large_order() {
    assert!(outlier_series(&Model64::model1(50, 2, 0.01), 1).is_err());
    assert!(outlier_series(&Model64::model1(200, 50, 0.01), 4).is_err());
}

#[test]
fn series_matches_exact_catalan_sum() {
    let (n, m, delta) = (1000usize, 30usize, 0.00101);
    let spec = Model64::model1(n, m, delta);
    let mu = m as f64 / n as f64;
    let nd = n as f64 * delta;
    let mut reference = nd + 1.0;
    for order in 1..=31usize {
        let k = (order - 1) as u32;
        reference -= catalan(k).unwrap() as f64 * mu.powi(k as i32 + 1) / nd.powi(k as i32);
        let s = outlier_series(&spec, order).unwrap();
        assert!((s.re - reference).abs() < 1e-14 && s.im == 0.0, "order {order}");
    }
}

#[test]
fn series_converges_to_outlier() {
    for (n, delta) in [(20usize, 0.1), (40, 0.1), (30, 0.5), (50, 0.2)] {
        for m in 1..=n {
            let spec = Model64::model1(n, m, delta);
            let p1 = compute_p_indices(n, m).unwrap().p1;
            if p1 > 8 {
                continue;
            }
            let nd = n as f64 * delta;
            let ex = exact_spectrum(&spec, 1e-12).unwrap();
            let s = outlier_series(&spec, p1).unwrap();
            let err = (s - ex.outlier()).norm();
            assert!(err <= 10.0 * nd.powi(-(p1 as i32)), "n={n} m={m} err={err}");
        }
    }
}

#[test]
fn eigenvector_of_outlier() {
    let spec = Model64::model1(200, 1, 0.01);
    let ex = exact_spectrum(&spec, 1e-12).unwrap();
    let v = eigenvector_for(&spec, ex.outlier()).unwrap();
    let a = build_model(&spec).unwrap();
    let av = a.mul_vec(&v);
    let res: f64 = av.iter().zip(&v).map(|(x, y)| (x - y * ex.outlier()).norm_sqr()).sum::<f64>().sqrt();
    let vn: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    assert!(res <= 1e-8 * matrix_2norm(&a) * vn);
    let total: Complex64 = v.iter().sum();
    assert!((total - c(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn rouche_counts_for_large_n_delta() {
    let spec = Model64::model1(100, 5, 0.1);
    let ex = exact_spectrum(&spec, 1e-12).unwrap();
    let regions = rouche_regions(100, 0.1f64).unwrap();
    let counts = classify_roots(&ex.nonzero_roots, &regions);
    assert_eq!(counts, RootCounts { outer: 1, gap: 0, inner: 19, outside: 0 });
    assert!(1.0 < regions.r_minus && regions.r_minus < regions.r_plus && regions.r_plus < 10.0);
}

#[test]
fn rouche_large_n_delta_asymptotics() {
    let r = rouche_regions(1000, 1.0f64).unwrap();
    assert!((r.r_plus - (1000.0 - 1.0 - 2.0 / 1000.0)).abs() < 1e-2);
}

#[test]
fn geometric_multiplicity_is_numerical_nullity() {
    let n = 12;
    for m in 1..=n {
        let spec = Model64::model1(n, m, 0.1);
        let a = build_model(&spec).unwrap();
        let sv = singular_values(&a);
        let norm = sv[0];
        let nullity = sv.iter().filter(|&&s| s < 1e-10 * norm).count();
        let mult = zero_multiplicities(&spec).unwrap();
        if (2..=n - 2).contains(&m) {
            assert_eq!(nullity, m - 1, "m = {m}");
            assert!(mult.defective);
        }
        assert_eq!(mult.geometric, m - 1);
        if m == n {
            assert_eq!(nullity, n - 1);
            assert!(!mult.defective);
        }
    }
}

#[test]
fn quadratic_real_root_moves_to_origin() {
    let n = 40;
    let delta = 0.05;
    let mut previous = f64::NEG_INFINITY;
    for m in (n / 2 + 1)..n {
        let ex = exact_spectrum(&Model64::model1(n, m, delta), 1e-12).unwrap();
        assert_eq!(ex.nonzero_roots.len(), 2);
        let other = ex.nonzero_roots[1 - ex.outlier_index];
        assert!(other.im.abs() < 1e-14);
        assert!(other.re < 0.0);
        assert!(other.re > previous, "m = {m}");
        previous = other.re;
    }
}

#[test]
fn solver_is_deterministic() {
    let spec = Model64::model2(150, 2, 0.01, 1.0);
    let a = exact_spectrum(&spec, 1e-12).unwrap();
    let b = exact_spectrum(&spec, 1e-12).unwrap();
    for (x, y) in a.nonzero_roots.iter().zip(&b.nonzero_roots) {
        assert_eq!((x.re.to_bits(), x.im.to_bits()), (y.re.to_bits(), y.im.to_bits()));
    }
}

#[test]
fn single_precision_spectrum() {
    let spec = ModelSpec::<f32>::model1(40, 3, 0.1);
    let ex = exact_spectrum(&spec, 1e-5).unwrap();
    let ex64 = exact_spectrum(&Model64::model1(40, 3, 0.1), 1e-12).unwrap();
    assert_eq!(ex.nonzero_roots.len(), 14);
    assert!((ex.outlier().re.to_f64_lossy() - ex64.outlier().re).abs() < 1e-4);
}

/// Brute-force membership of `m` in `{ floor((n-1)/k) : 1 <= k <= n-1 }`.
fn in_t_brute(n: usize, m: usize) -> bool {
    (1..n).any(|k| (n - 1) / k == m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn root_count_and_residual(n in 1usize..=200, m_frac in 0.0f64..1.0) {
        let m = 1 + ((n as f64 - 1.0) * m_frac).round() as usize;
        let spec = Model64::model1(n, m, 0.01);
        let ex = exact_spectrum(&spec, 1e-12).unwrap();
        let p1 = (n - 1) / m;
        prop_assert_eq!(ex.nonzero_roots.len(), p1 + 1);
        prop_assert_eq!(ex.nonzero_roots.len() + ex.zero_algebraic_multiplicity, n);
        prop_assert!(ex.max_residual <= 1e-10);
        let bound = n as f64 * 0.01 + 1.0;
        prop_assert!(ex.nonzero_roots.iter().all(|z| z.norm() < bound));
    }

    #[test]
    fn p_index_membership(n in 2usize..3000, m_frac in 0.0f64..1.0) {
        let m = 1 + ((n as f64 - 1.0) * m_frac).floor() as usize;
        let idx = compute_p_indices(n, m).unwrap();
        prop_assert!(idx.p2 <= idx.p1);
        prop_assert_eq!(idx.in_t, in_t_brute(n, m));
        let sqrt_ceil = (1..).find(|r: &usize| r * r >= n - 1).unwrap();
        prop_assert_eq!(idx.in_i, m >= sqrt_ceil && m < n);
        if idx.in_i {
            let expect = if idx.in_t { 1 } else { 0 };
            prop_assert_eq!(idx.p1 - idx.p2, expect);
        }
        prop_assert_eq!(idx.correction_active, idx.p1 > idx.p2 && (m + 1) * idx.p1 > n);
    }

    #[test]
    fn rouche_containment(n in 20usize..120, m_frac in 0.0f64..1.0, delta in 0.06f64..0.5) {
        let m = 1 + ((n as f64 - 1.0) * m_frac).round() as usize;
        prop_assume!(n as f64 * delta > 3.0 + 2.0 * 2f64.sqrt() + 1e-9);
        let ex = exact_spectrum(&Model64::model1(n, m, delta), 1e-12).unwrap();
        let regions = rouche_regions(n, delta).unwrap();
        let counts = classify_roots(&ex.nonzero_roots, &regions);
        prop_assert_eq!(counts, RootCounts { outer: 1, gap: 0, inner: (n - 1) / m, outside: 0 });
    }
}
