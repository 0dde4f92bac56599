use hypertransfer_core::sl2::{iwasawa_decompose, mobius_act, operator_norm};
use hypertransfer_core::{HalfPlanePoint, RealMat2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Entries in [-10, 10], first row negated when needed, rescaled to det 1.
fn project(a: f64, b: f64, c: f64, d: f64) -> Option<RealMat2> {
    let det = a * d - b * c;
    if det.abs() < 1e-3 {
        return None;
    }
    if det > 0.0 {
        RealMat2::normalized(a, b, c, d).ok()
    } else {
        RealMat2::normalized(-a, -b, c, d).ok()
    }
}

fn mat() -> impl Strategy<Value = RealMat2> {
    (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64)
        .prop_filter_map("near-singular", |(a, b, c, d)| project(a, b, c, d))
}

fn point() -> impl Strategy<Value = HalfPlanePoint> {
    (-5.0..5.0f64, -3.0..3.0f64).prop_map(|(x, ly)| HalfPlanePoint::new(x, ly.exp()).unwrap())
}

fn close(p: HalfPlanePoint, q: HalfPlanePoint, tol: f64) -> bool {
    let scale = 1.0 + p.x.abs().max(p.y.abs());
    (p.x - q.x).abs() <= tol * scale && (p.y - q.y).abs() <= tol * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn action_is_a_homomorphism(g1 in mat(), g2 in mat(), z in point()) {
        let lhs = mobius_act(&(g1 * g2), z);
        let rhs = mobius_act(&g2, z).and_then(|w| mobius_act(&g1, w));
        if let (Ok(l), Ok(r)) = (lhs, rhs) {
            prop_assert!(close(l, r, 1e-9), "{l:?} {r:?}");
        }
    }

    #[test]
    fn minus_g_acts_identically(g in mat(), z in point()) {
        let a = mobius_act(&g, z).unwrap();
        let b = mobius_act(&-g, z).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn norm_of_inverse_and_transpose(g in mat()) {
        let n = operator_norm(&g);
        prop_assert!((operator_norm(&g.inverse()) - n).abs() <= 1e-12 * n);
        prop_assert!((operator_norm(&g.transpose()) - n).abs() <= 1e-12 * n);
        prop_assert!(n >= 1.0 - 1e-12);
    }
}

#[test]
fn iwasawa_round_trip_on_ten_thousand_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 10_000 {
        let e: [f64; 4] = std::array::from_fn(|_| rng.random_range(-10.0..10.0));
        let Some(g) = project(e[0], e[1], e[2], e[3]) else { continue };
        let parts = iwasawa_decompose(&g);
        assert_eq!(parts.s.c(), 0.0);
        assert!(parts.s.a() > 0.0);
        assert!((0.0..2.0 * std::f64::consts::PI).contains(&parts.theta));
        assert!(parts.recompose().max_abs_diff(&g) <= 1e-9, "{g:?}");
        done += 1;
    }
}
