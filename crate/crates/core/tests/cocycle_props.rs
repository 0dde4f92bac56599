use std::f64::consts::PI;

use hypertransfer_core::cocycle::{
    cocycle_beta, domain_measure_mc, sample_domain, sample_point, transferred_symbol_mc, x_marginal_cdf,
};
use hypertransfer_core::modular::{in_fundamental_domain, symbol_m_word};
use hypertransfer_core::verify::random_sl2;
use hypertransfer_core::RealMat2;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn right_cocycle_identity_is_exact() {
    let points = sample_domain(21, 1000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for p in &points {
        let g1 = random_sl2(&mut rng, 10.0);
        let g2 = random_sl2(&mut rng, 10.0);
        let whole = cocycle_beta(p, &(g1 * g2)).unwrap().beta;
        let first = cocycle_beta(p, &g1).unwrap();
        let second = cocycle_beta(&first.moved, &g2).unwrap().beta;
        assert_eq!(first.beta * second, whole, "{p:?}");
    }
}

#[test]
fn moved_points_are_domain_points() {
    let points = sample_domain(4, 2000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for p in &points {
        let g = random_sl2(&mut rng, 50.0);
        let m = cocycle_beta(p, &g).unwrap().moved;
        assert!(in_fundamental_domain(m.z(), 1e-9));
        assert!((0.0..PI).contains(&m.k0_angle));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn k_shift_changes_beta_by_sign_only(seed in 0u64..1000, phi in 0.0..(2.0 * PI)) {
        let p = sample_domain(seed, 1).unwrap()[0];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_sl2(&mut rng, 10.0);
        let b = cocycle_beta(&p, &g).unwrap().beta;
        let bk = cocycle_beta(&p, &(g * RealMat2::rotation(phi))).unwrap().beta;
        prop_assert!(bk == b || bk == -b, "{b} vs {bk}");
    }
}

#[test]
fn mc_symbol_is_even_in_g_and_in_unit_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..4 {
        let g = random_sl2(&mut rng, 20.0);
        let a = transferred_symbol_mc(symbol_m_word, &g, 20_000, 5).unwrap();
        let b = transferred_symbol_mc(symbol_m_word, &-g, 20_000, 5).unwrap();
        assert_eq!(a, b);
        assert!((0.0..=1.0).contains(&a.estimate));
    }
}

#[test]
fn x_marginal_passes_kolmogorov_smirnov() {
    let n = 50_000;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut xs = Vec::with_capacity(n);
    let mut theta_sum = 0.0;
    for _ in 0..n {
        let (x, y, t) = sample_point(&mut rng);
        assert!(x.abs() <= 0.5 && x * x + y * y >= 1.0 - 1e-12 && (0.0..PI).contains(&t));
        xs.push(x);
        theta_sum += t;
    }
    xs.sort_by(f64::total_cmp);
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = x_marginal_cdf(x);
            (f - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - f).abs())
        })
        .fold(0.0, f64::max);
    // 1% critical value.
    assert!(d < 1.63 / (n as f64).sqrt(), "D = {d}");
    let mean = theta_sum / n as f64;
    let se = PI / 12f64.sqrt() / (n as f64).sqrt();
    assert!((mean - PI / 2.0).abs() < 4.0 * se);
}

#[test]
fn domain_measure_is_pi_over_three() {
    let m = domain_measure_mc(3, 1_000_000).unwrap();
    assert!((m.estimate - PI / 3.0).abs() <= 3.0 * m.std_error, "{m:?}");
}
