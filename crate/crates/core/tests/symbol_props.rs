use std::f64::consts::PI;

use hypertransfer_core::quadrature::QuadratureConfig;
use hypertransfer_core::sl2::cartan_a;
use hypertransfer_core::symbol::{
    boundary_values, classify_case, m_hat, m_hat_case, m_hat_direct, m_hat_partials, m_tilde, CaseRegime, DirectMode,
    DEFAULT_HYBRID_MARGIN,
};
use hypertransfer_core::verify::{case_grid, d_gx_bound, GRID_CASES};
use hypertransfer_core::{ANCoords, RealMat2};
use proptest::prelude::*;

fn c(gx: f64, gy: f64) -> ANCoords {
    ANCoords::new(gx, gy).unwrap()
}

#[test]
fn case_formulas_match_direct_integration() {
    let q = QuadratureConfig::default();
    for case in GRID_CASES {
        for k in case_grid(case) {
            let a = m_hat_case(&k, &q).unwrap();
            let d = m_hat_direct(&k, &q, DirectMode::Adaptive2d).unwrap();
            assert!((a.value - d.value).abs() <= (3.0 * (a.error + d.error)).max(1e-5), "{case:?} {k:?}");
        }
    }
}

#[test]
fn continuous_across_case_boundaries() {
    let q = QuadratureConfig::default();
    let eps = 1e-4;
    let b = boundary_values(0.3).unwrap().small_gy().unwrap();
    for v in b {
        let lo = m_hat(&c(v - eps, 0.3), &q).unwrap().value;
        let hi = m_hat(&c(v + eps, 0.3), &q).unwrap().value;
        assert!((hi - lo).abs() <= 10.0 * eps * (1.0 / eps).ln(), "b = {v}: {lo} {hi}");
    }
}

#[test]
fn small_gy_derivative_bounds() {
    let q = QuadratureConfig::default();
    for gy in [0.1, 0.3, 0.5] {
        for i in 1..200 {
            let gx = -1.6 + 2.0 * i as f64 / 200.0;
            let k = c(gx, gy);
            let case = classify_case(&k, DEFAULT_HYBRID_MARGIN);
            if matches!(case, CaseRegime::Case1 | CaseRegime::Case7 | CaseRegime::Fallback) {
                continue;
            }
            let p = m_hat_partials(&k, &q).unwrap();
            assert!(p.d_gx.value > 0.0 && p.d_gx.value <= d_gx_bound(&k), "{k:?} {p:?}");
            assert!((0.0..=6.0).contains(&p.d_gy.value), "{k:?} {p:?}");
        }
    }
}

// For g_y > 2/√3 the bound C₁ log(1/|gₓ|) holds while |gₓ| stays below
// about 0.97 but not near b₈ = -2/√3, where its right side is negative.
#[test]
fn large_gy_derivative_bounds() {
    let q = QuadratureConfig::default();
    let c1 = 9.0 / PI;
    for gy in [1.2, 2.0] {
        for i in 1..40 {
            let gx = -(2.0 / 3f64.sqrt()) * i as f64 / 40.0;
            let k = c(gx, gy);
            let p = m_hat_partials(&k, &q).unwrap();
            assert_eq!(p.d_gy.value, 0.0);
            assert!(p.d_gx.value > 0.0);
            if gx > -0.95 {
                assert!(p.d_gx.value <= c1 * (1.0 / gx.abs()).ln(), "{k:?} {p:?}");
            }
        }
        let near_b8 = m_hat_partials(&c(-1.1, gy), &q).unwrap();
        assert!(near_b8.d_gx.value > 0.0 && c1 * (1.0 / 1.1f64).ln() < 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn values_in_unit_interval_and_nondecreasing(gx in -3.0..3.0f64, dx in 0.0..0.2f64, gy in 0.02..4.0f64) {
        let q = QuadratureConfig::default();
        let a = m_hat(&c(gx, gy), &q).unwrap().value;
        let b = m_hat(&c(gx + dx, gy), &q).unwrap().value;
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&a));
        prop_assert!(b >= a - 1e-7, "{a} {b}");
    }
}

#[test]
fn m_tilde_is_even_and_bi_k_invariant() {
    let q = QuadratureConfig::default();
    let a = cartan_a(0.3).unwrap();
    let base = m_tilde(&a, &q).unwrap().value;
    assert_eq!(m_tilde(&-a, &q).unwrap().value, base);
    for (s, t) in [(0.3, 1.9), (2.5, -0.7), (4.0, 0.1)] {
        let g = RealMat2::rotation(s) * a * RealMat2::rotation(t);
        assert!((m_tilde(&g, &q).unwrap().value - base).abs() <= 1e-9);
    }
    assert!((0.0..=1.0).contains(&base));
}
