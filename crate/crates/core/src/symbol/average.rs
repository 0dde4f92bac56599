//! `m̃(a) = (1/π)∫_{-π/2}^{π/2} m̂(gₓ(r,θ), g_y(r,θ)) dθ` for `a = diag(r, 1/r)`,
//! which determines `m̃` on all of SL₂(ℝ) by bi-K-invariance.

use std::cell::{Cell, RefCell};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use super::cases::m_hat_in_case;
use super::direct::{m_hat_direct, DirectMode};
use super::geometry::{classify_case, CaseRegime, DEFAULT_HYBRID_MARGIN, SMALL_GY_MAX, SQRT3, TWO_OVER_SQRT3};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_log_endpoints, integrate_with_breaks, Estimate, QuadratureConfig, Singular};
use crate::roots::brent;
use crate::sl2::{an_coords, ANCoords, RealMat2};

/// `(gₓ, g_y)` of the AN factor of `k_θ·diag(r, 1/r)`.
pub fn iwasawa_image_coords(r: f64, theta: f64) -> Result<ANCoords> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("r = {r} must be positive")));
    }
    let (s, c) = theta.sin_cos();
    let r2 = r * r;
    let r4 = r2 * r2;
    let den = c * c + r4 * s * s;
    ANCoords::new((r4 - 1.0) * s * c / den, r2 / den)
}

/// Which evaluator backs each `m̂` call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MHatRoute {
    /// Closed-form cases, with the direct integrator in the fallback regime.
    Cases,
    /// The direct integrator everywhere.
    Direct,
}

/// `m̂(gₓ, g_y)` on any input.
pub fn m_hat(c: &ANCoords, q: &QuadratureConfig) -> Result<Estimate> {
    m_hat_routed(c, q, MHatRoute::Cases)
}

pub fn m_hat_routed(c: &ANCoords, q: &QuadratureConfig, route: MHatRoute) -> Result<Estimate> {
    if route == MHatRoute::Cases {
        let case = classify_case(c, DEFAULT_HYBRID_MARGIN);
        if case != CaseRegime::Fallback {
            if let Ok(e) = m_hat_in_case(c, case, q) {
                return Ok(e);
            }
        }
    }
    m_hat_direct(c, q, DirectMode::Adaptive2d)
}

// b₂, b₇ and b₄, b₅, b₆ extended past g_y = 1/2 so the crossing functions
// stay continuous; roots outside the small-g_y regime are discarded.
fn extended_boundaries(gy: f64) -> [f64; 5] {
    let r = (4.0 - 3.0 * gy * gy).max(0.0).sqrt();
    [
        (-1.0 + r) / SQRT3,
        -1.0 + (1.0 - gy * gy).max(0.0).sqrt(),
        -(5f64.sqrt()) * gy / 2.0,
        -2.0 * gy / SQRT3,
        -(3.0 - r) / SQRT3,
    ]
}

fn scan_nodes() -> Vec<f64> {
    let mut t: Vec<f64> = (0..=1024).map(|i| -FRAC_PI_2 + PI * i as f64 / 1024.0).collect();
    for k in 8..=60 {
        let d = 10f64.powf(-k as f64 / 4.0);
        t.extend([-FRAC_PI_2 + d, -d, d, FRAC_PI_2 - d]);
    }
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// Every `θ ∈ (-π/2, π/2)` where `(gₓ(r,θ), g_y(r,θ))` crosses a case
/// boundary or a regime edge, together with `0` and `±π/4`, sorted and
/// including the endpoints `±π/2`.
pub fn theta_splits(r: f64) -> Result<Vec<f64>> {
    iwasawa_image_coords(r, 0.0)?;
    let coords = |t: f64| iwasawa_image_coords(r, t).expect("r validated");
    let nodes = scan_nodes();
    let mut splits = vec![-FRAC_PI_2, -FRAC_PI_4, 0.0, FRAC_PI_4, FRAC_PI_2];

    let mut add_roots = |f: &dyn Fn(f64) -> f64, keep: &dyn Fn(&ANCoords) -> bool| {
        let vals: Vec<f64> = nodes.iter().map(|&t| f(t)).collect();
        for i in 0..nodes.len() - 1 {
            if vals[i] == 0.0 || vals[i].signum() != vals[i + 1].signum() {
                if let Ok(t) = brent(f, nodes[i], nodes[i + 1], 1e-15) {
                    if keep(&coords(t)) {
                        splits.push(t);
                    }
                }
            }
        }
    };
    let small = |c: &ANCoords| c.g_y <= SMALL_GY_MAX + 1e-9;
    let large = |c: &ANCoords| c.g_y >= TWO_OVER_SQRT3 - 1e-9;
    let always = |_: &ANCoords| true;
    for i in 0..5 {
        add_roots(
            &|t| {
                let c = coords(t);
                c.g_x - extended_boundaries(c.g_y)[i]
            },
            &small,
        );
    }
    add_roots(&|t| coords(t).g_x + TWO_OVER_SQRT3, &large);
    add_roots(&|t| coords(t).g_y - SMALL_GY_MAX, &always);
    add_roots(&|t| coords(t).g_y - TWO_OVER_SQRT3, &always);

    splits.retain(|t| (-FRAC_PI_2..=FRAC_PI_2).contains(t));
    splits.sort_by(f64::total_cmp);
    splits.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    Ok(splits)
}

/// `(1/π)∫_{-π/2}^{π/2} f(θ, coords(θ)) dθ`, split at [`theta_splits`] with the
/// exponential endpoint substitution on every panel. The error adds the
/// outer estimate and the largest inner one.
pub(crate) fn theta_average<F>(r: f64, q: &QuadratureConfig, f: F) -> Result<Estimate>
where
    F: Fn(f64, &ANCoords) -> Result<Estimate>,
{
    let splits = theta_splits(r)?;
    let failure = RefCell::new(None);
    let inner_err = Cell::new(0.0f64);
    let g = |t: f64| {
        let c = match iwasawa_image_coords(r, t) {
            Ok(c) => c,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                return 0.0;
            }
        };
        match f(t, &c) {
            Ok(e) => {
                inner_err.set(inner_err.get().max(e.error));
                e.value
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let mut total = Estimate::default();
    for w in splits.windows(2) {
        total = total + integrate_log_endpoints(g, w[0], w[1], Singular::Both, q)?;
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
    }
    Ok(Estimate::new(total.value / PI, total.error / PI + inner_err.get()))
}

/// `m̃(diag(r, 1/r))`.
pub fn m_tilde_r(r: f64, q: &QuadratureConfig, route: MHatRoute) -> Result<Estimate> {
    if r == 1.0 {
        return Ok(Estimate::exact(1.0));
    }
    theta_average(r, q, |_, c| m_hat_routed(c, q, route))
}

/// `m̃(g)`, through the Cartan parameter `r = ‖g‖ ≥ 1`.
pub fn m_tilde(g: &RealMat2, q: &QuadratureConfig) -> Result<Estimate> {
    m_tilde_with(g, q, MHatRoute::Cases)
}

pub fn m_tilde_with(g: &RealMat2, q: &QuadratureConfig, route: MHatRoute) -> Result<Estimate> {
    let r = g.operator_norm();
    // Within rounding of the identity the θ-integrand is exactly m̂(0, 1) = 1.
    if r - 1.0 < 1e-12 {
        return Ok(Estimate::exact(1.0));
    }
    m_tilde_r(r, q, route)
}

/// `(1/π)∫₀^π m̂(P_AN(k_θ g)) dθ` straight from the Iwasawa factor of
/// `k_θ g`, with no Cartan reduction and no case-boundary splits. Slower
/// than [`m_tilde`] and blind to its structure, which makes it a check on
/// bi-K-invariance.
pub fn m_tilde_k_average(g: &RealMat2, q: &QuadratureConfig) -> Result<Estimate> {
    let failure = RefCell::new(None);
    let inner_err = Cell::new(0.0f64);
    let f = |t: f64| {
        let r = an_coords(&(RealMat2::rotation(t) * *g).iwasawa().s).and_then(|c| m_hat(&c, q));
        match r {
            Ok(e) => {
                inner_err.set(inner_err.get().max(e.error));
                e.value
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let breaks: Vec<f64> = (1..64).map(|i| PI * i as f64 / 64.0).collect();
    let e = integrate_with_breaks(f, 0.0, PI, &breaks, q)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(Estimate::new(e.value / PI, e.error / PI + inner_err.get()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::cartan_a;
    use crate::symbol::geometry::theta_boundaries;

    #[test]
    fn image_coords_examples() {
        for t in [-1.0, 0.0, 0.3, 1.5] {
            let c = iwasawa_image_coords(1.0, t).unwrap();
            assert!(c.g_x.abs() < 1e-15 && (c.g_y - 1.0).abs() < 1e-15);
        }
        let c = iwasawa_image_coords(0.3, 0.0).unwrap();
        assert_eq!((c.g_x, c.g_y), (0.0, 0.09));
        let c = iwasawa_image_coords(0.3, FRAC_PI_2).unwrap();
        assert!(c.g_x.abs() < 1e-12 && (c.g_y - 1.0 / 0.09).abs() < 1e-12);
    }

    #[test]
    fn image_coords_match_iwasawa() {
        for r in [0.1, 0.7, 2.5] {
            for t in [-1.3, -0.4, 0.2, 1.1, 2.9] {
                let g = RealMat2::rotation(t) * cartan_a(r).unwrap();
                let s = g.iwasawa().s;
                let c = crate::sl2::an_coords(&s).unwrap();
                let d = iwasawa_image_coords(r, t).unwrap();
                assert!((c.g_x - d.g_x).abs() < 1e-10 && (c.g_y - d.g_y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn splits_contain_closed_form_boundaries() {
        for r in [0.05, 0.2, 0.5] {
            let s = theta_splits(r).unwrap();
            let tb = theta_boundaries(r).unwrap();
            for t in [tb.theta2, tb.theta7, tb.theta8] {
                assert!(s.iter().any(|x| (x - t).abs() < 1e-9), "r={r}: {t} not in {s:?}");
            }
        }
    }

    #[test]
    fn identity_is_one() {
        let q = QuadratureConfig::default();
        assert_eq!(m_tilde(&RealMat2::IDENTITY, &q).unwrap().value, 1.0);
    }
}
