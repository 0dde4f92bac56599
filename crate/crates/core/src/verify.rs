//! Seeded self-check suites with a machine-readable report.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

use rand::Rng;
use serde::Serialize;

use crate::cocycle::{cocycle_beta, domain_measure_mc, sample_domain};
use crate::decay::{lie_derivative_mtilde, lie_derivative_mtilde_fd, LieDirection, LieIntegrand};
use crate::error::Result;
use crate::modular::{
    enumerate_products, first_letter, in_fundamental_domain, reduce_to_fundamental_domain, word_decompose, FirstLetter,
    Letter,
};
use crate::quadrature::{Estimate, QuadratureConfig};
use crate::sl2::{cartan_a, ANCoords, HalfPlanePoint, RealMat2};
use crate::symbol::cases::m_hat_partials;
use crate::symbol::direct::{m_hat_direct, DirectMode};
use crate::symbol::geometry::{boundary_values, classify_case, theta_boundaries, CaseRegime, DEFAULT_HYBRID_MARGIN};
use crate::symbol::m_hat_case;
use crate::transfer::{cesaro_positivity_check, cesaro_symbol, jodeit_extend_1d, kernel_mass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cocycle,
    Cases,
    Decay,
    All,
}

impl Suite {
    fn includes(self, s: Suite) -> bool {
        self == Suite::All || self == s
    }
}

/// Deliberate corruption used to confirm the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Mutation {
    #[default]
    None,
    /// Case 2 evaluated as `1 - (3/π)∫F₂` instead of `1 + (3/π)∫F₂`.
    FlipF2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// `m̂` by the case formulas, with `mutation` applied.
pub fn m_hat_case_mutated(c: &ANCoords, q: &QuadratureConfig, mutation: Mutation) -> Result<Estimate> {
    let v = m_hat_case(c, q)?;
    if mutation == Mutation::FlipF2 && classify_case(c, DEFAULT_HYBRID_MARGIN) == CaseRegime::Case2 {
        return Ok(Estimate::new(2.0 - v.value, v.error));
    }
    Ok(v)
}

/// Six interior `gₓ` at each of two `g_y` per regime: Cases 2–6 at
/// `g_y ∈ {0.1, 0.3}`, Case 8 at `g_y ∈ {1.2, 2.0}`, Case 1 and 7 beyond
/// the outermost boundaries.
pub fn case_grid(case: CaseRegime) -> Vec<ANCoords> {
    let gys: &[f64] = if case == CaseRegime::Case8 { &[1.2, 2.0] } else { &[0.1, 0.3] };
    let mut out = Vec::new();
    for &gy in gys {
        let b = boundary_values(gy).expect("grid g_y is positive");
        let (lo, hi) = match (case, b.small_gy()) {
            (CaseRegime::Case8, _) => (b.b8, 0.0),
            (CaseRegime::Case1, Some(s)) => (s[0], s[0] + 2.0),
            (CaseRegime::Case7, Some(s)) => (s[5] - 2.0, s[5]),
            (CaseRegime::Case2, Some(s)) => (s[1], s[0]),
            (CaseRegime::Case3, Some(s)) => (s[2], s[1]),
            (CaseRegime::Case4, Some(s)) => (s[3], s[2]),
            (CaseRegime::Case5, Some(s)) => (s[4], s[3]),
            (CaseRegime::Case6, Some(s)) => (s[5], s[4]),
            _ => continue,
        };
        for i in 1..=6 {
            let gx = lo + (hi - lo) * i as f64 / 7.0;
            out.push(ANCoords::new(gx, gy).expect("g_y > 0"));
        }
    }
    out
}

pub const GRID_CASES: [CaseRegime; 8] = [
    CaseRegime::Case1,
    CaseRegime::Case2,
    CaseRegime::Case3,
    CaseRegime::Case4,
    CaseRegime::Case5,
    CaseRegime::Case6,
    CaseRegime::Case7,
    CaseRegime::Case8,
];

/// Upper bound on `∂m̂/∂gₓ` for `g_y ≤ 1/2`.
pub fn d_gx_bound(c: &ANCoords) -> f64 {
    9.0 / PI * (1.0 / c.g_x.abs()).ln() + 3.0 / PI * (1.0 / c.g_y).ln() + 3.0
}

/// A random element with `‖g‖ ≤ norm_max`, as `k_α · diag(r, 1/r) · k_β`.
pub fn random_sl2<R: Rng>(rng: &mut R, norm_max: f64) -> RealMat2 {
    let r = (-(norm_max.ln()) * rng.random::<f64>()).exp();
    let a = cartan_a(r).expect("r > 0");
    RealMat2::rotation(2.0 * PI * rng.random::<f64>()) * a * RealMat2::rotation(2.0 * PI * rng.random::<f64>())
}

fn check(suite: Suite, name: &str, passed: bool, detail: String) -> Check {
    Check { suite, name: name.to_string(), passed, detail }
}

fn rng_for(seed: u64, salt: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ salt)
}

fn cocycle_suite(seed: u64) -> Result<Vec<Check>> {
    let s = Suite::Cocycle;
    let mut out = Vec::new();

    let n = 200;
    let points = sample_domain(seed, n)?;
    let mut rng = rng_for(seed, 1);
    let mut bad = 0;
    for p in &points {
        let g1 = random_sl2(&mut rng, 10.0);
        let g2 = random_sl2(&mut rng, 10.0);
        let b12 = cocycle_beta(p, &(g1 * g2))?.beta;
        let first = cocycle_beta(p, &g1)?;
        let second = cocycle_beta(&first.moved, &g2)?.beta;
        if first.beta.checked_mul(&second)? != b12 {
            bad += 1;
        }
    }
    out.push(check(s, "cocycle_identity", bad == 0, format!("{bad} of {n} triples disagree")));

    let mut rng = rng_for(seed, 2);
    let mut worst: f64 = 0.0;
    let mut outside = 0;
    let n = 2000;
    for _ in 0..n {
        let z = HalfPlanePoint::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0f64..3.0).exp())?;
        let red = reduce_to_fundamental_domain(z)?;
        let back = red.gamma.act(red.z0)?;
        worst = worst.max(((back.x - z.x).powi(2) + (back.y - z.y).powi(2)).sqrt());
        if !in_fundamental_domain(red.z0, 1e-12) {
            outside += 1;
        }
    }
    out.push(check(
        s,
        "tiling",
        worst <= 1e-9 && outside == 0,
        format!("max residual {worst:.3e}, {outside} of {n} outside the domain"),
    ));

    let elems = enumerate_products(10);
    let mut disagree = 0;
    for g in &elems {
        let algebraic = match word_decompose(g)?.first() {
            None => FirstLetter::Identity,
            Some(Letter::S) => FirstLetter::SPrefix,
            Some(_) => FirstLetter::RPrefix,
        };
        if algebraic != first_letter(g) {
            disagree += 1;
        }
    }
    out.push(check(
        s,
        "first_letter_vs_word",
        disagree == 0,
        format!("{disagree} of {} elements disagree", elems.len()),
    ));

    let m = domain_measure_mc(seed, 200_000)?;
    let dev = (m.estimate - PI / 3.0).abs();
    out.push(check(
        s,
        "domain_measure",
        dev <= 4.0 * m.std_error,
        format!("{:.6e} ± {:.2e} vs π/3", m.estimate, m.std_error),
    ));
    Ok(out)
}

fn cases_suite(mutation: Mutation) -> Result<Vec<Check>> {
    let s = Suite::Cases;
    let q = QuadratureConfig::default();
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut exact_ok = true;
    let mut bounds_ok = true;
    for case in GRID_CASES {
        for c in case_grid(case) {
            let a = m_hat_case_mutated(&c, &q, mutation)?;
            match case {
                CaseRegime::Case1 => exact_ok &= a.value == 1.0,
                CaseRegime::Case7 => exact_ok &= a.value == 0.0,
                _ => {
                    let d = m_hat_direct(&c, &q, DirectMode::Adaptive2d)?;
                    let diff = (a.value - d.value).abs();
                    worst = worst.max(diff);
                    if diff > (3.0 * (a.error + d.error)).max(1e-5) {
                        failures += 1;
                    }
                    let p = m_hat_partials(&c, &q)?;
                    let (dx, dy) = (p.d_gx.value, p.d_gy.value);
                    bounds_ok &= dx > 0.0 && (0.0..=6.0).contains(&dy);
                    if c.g_y <= 0.5 {
                        bounds_ok &= dx <= d_gx_bound(&c);
                    }
                    if case == CaseRegime::Case8 {
                        bounds_ok &= dy.abs() <= 1e-10;
                    }
                }
            }
        }
    }
    out.push(check(
        s,
        "case_vs_direct",
        failures == 0,
        format!("{failures} grid points out of tolerance, max |Δ| {worst:.3e}"),
    ));
    out.push(check(s, "cases_1_and_7_exact", exact_ok, String::new()));
    out.push(check(s, "derivative_bounds", bounds_ok, String::new()));
    Ok(out)
}

fn decay_suite() -> Result<Vec<Check>> {
    let s = Suite::Decay;
    let q = QuadratureConfig::default();
    let mut out = Vec::new();

    let f1 = lie_derivative_mtilde(0.1, LieDirection::X1, &q, LieIntegrand::Adjoint)?;
    out.push(check(s, "f1_bound_r0.1", f1.value.abs() <= 0.12, format!("|f1(0.1)| = {:.6e}", f1.value.abs())));

    let f3 = lie_derivative_mtilde(0.3, LieDirection::X3, &q, LieIntegrand::Adjoint)?;
    out.push(check(s, "x3_zero", f3.value == 0.0, String::new()));

    let tight = QuadratureConfig::new(1e-12, 1e-12, 4000)?;
    let an = lie_derivative_mtilde(0.2, LieDirection::X1, &q, LieIntegrand::Adjoint)?;
    let fd = lie_derivative_mtilde_fd(0.2, LieDirection::X1, 1e-4, &tight)?;
    let diff = (an.value - fd.value).abs();
    out.push(check(
        s,
        "lie_derivative_vs_difference",
        diff <= 1e-6 + 1e-3 * fd.value.abs(),
        format!("{:.9e} vs {:.9e}", an.value, fd.value),
    ));

    let tb = theta_boundaries(1e-3)?;
    out.push(check(
        s,
        "theta_boundary_limits",
        (tb.theta7 - FRAC_PI_6).abs() <= 1e-6 && (tb.theta8 - FRAC_PI_2).abs() <= 1e-3,
        format!("θ7 = {:.12}, θ8 = {:.12}", tb.theta7, tb.theta8),
    ));

    let cesaro_ok = (0..=32).all(|n| {
        let c = cesaro_symbol(n);
        c.get(0) == 1.0
            && cesaro_positivity_check(n, 256)
            && (kernel_mass(&c, 256) - 1.0).abs() <= 1e-10
            && c.iter().all(|(k, v)| jodeit_extend_1d(&c, k as f64) == v)
    });
    out.push(check(s, "cesaro_jodeit", cesaro_ok, String::new()));
    Ok(out)
}

/// Runs the selected suites. Numerical failures become failed checks; only
/// invalid configuration surfaces as an error.
pub fn run_verify(suite: Suite, seed: u64, mutation: Mutation) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let guard = |s: Suite, r: Result<Vec<Check>>| match r {
        Ok(v) => v,
        Err(e) => vec![check(s, "suite_error", false, e.to_string())],
    };
    if suite.includes(Suite::Cocycle) {
        checks.extend(guard(Suite::Cocycle, cocycle_suite(seed)));
    }
    if suite.includes(Suite::Cases) {
        checks.extend(guard(Suite::Cases, cases_suite(mutation)));
    }
    if suite.includes(Suite::Decay) {
        checks.extend(guard(Suite::Decay, decay_suite()));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { suite, seed, passed, checks })
}
