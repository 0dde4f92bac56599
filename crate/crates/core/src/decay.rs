//! First-order Lie derivatives of `m̃` along `a = diag(r, 1/r)`, the weighted
//! Hörmander–Mikhlin table, and the second-order divergence probe.

use std::f64::consts::{FRAC_PI_2, PI};

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Estimate, QuadratureConfig};
use crate::sl2::{ANCoords, RealMat2};
use crate::symbol::average::{iwasawa_image_coords, m_tilde, theta_average};
use crate::symbol::cases::{case8_d2_gx, partials_in_case, Partials};
use crate::symbol::direct::{m_hat_direct, DirectMode};
use crate::symbol::geometry::{classify_case, theta_boundaries, CaseRegime, DEFAULT_HYBRID_MARGIN};

/// Basis `X₁ = diag(1,-1)`, `X₂ = (0,1;0,0)`, `X₃ = (0,1;-1,0)` of 𝔰𝔩₂(ℝ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LieDirection {
    X1,
    X2,
    X3,
}

impl LieDirection {
    pub const ALL: [LieDirection; 3] = [LieDirection::X1, LieDirection::X2, LieDirection::X3];

    /// Row-major entries.
    pub fn generator(self) -> [f64; 4] {
        match self {
            LieDirection::X1 => [1.0, 0.0, 0.0, -1.0],
            LieDirection::X2 => [0.0, 1.0, 0.0, 0.0],
            LieDirection::X3 => [0.0, 1.0, -1.0, 0.0],
        }
    }

    /// `exp(tX)` in closed form.
    pub fn exp(self, t: f64) -> RealMat2 {
        let m = match self {
            LieDirection::X1 => RealMat2::new(t.exp(), 0.0, 0.0, (-t).exp()),
            LieDirection::X2 => RealMat2::new(1.0, t, 0.0, 1.0),
            LieDirection::X3 => return RealMat2::rotation(-t),
        };
        m.expect("one-parameter subgroups have determinant one")
    }
}

/// Coefficients of `k_θ X k_θ⁻¹` in the basis `X₁, X₂, X₃`.
pub fn adjoint_action(theta: f64, dir: LieDirection) -> [f64; 3] {
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (2.0 * theta).sin_cos();
    match dir {
        LieDirection::X1 => [c2, 2.0 * s2, -s2],
        LieDirection::X2 => [-s * c, c2, s * s],
        LieDirection::X3 => [0.0, 0.0, 1.0],
    }
}

/// Step for the central differences in the fallback regime.
pub const FD_STEP: f64 = 1e-5;

/// `(∂m̂/∂gₓ, ∂m̂/∂g_y)` on any input: the case formulas where they apply,
/// central differences of the direct integrator in the band
/// `1/2 < g_y ≤ 2/√3` and wherever the formulas fail.
pub fn m_hat_gradient(c: &ANCoords, q: &QuadratureConfig) -> Result<Partials> {
    // Differences straddling a case boundary see a kink, so the one-sided
    // case formulas are preferred even inside the hybrid margin.
    for margin in [DEFAULT_HYBRID_MARGIN, 0.0] {
        let case = classify_case(c, margin);
        if case != CaseRegime::Fallback {
            if let Ok(p) = partials_in_case(c, case, q) {
                return Ok(p);
            }
        }
    }
    let qd = q.scaled(1e-3);
    let m = |gx: f64, gy: f64| m_hat_direct(&ANCoords::new(gx, gy)?, &qd, DirectMode::Adaptive2d);
    let h = FD_STEP;
    let hy = h.min(0.5 * c.g_y);
    let dx = m(c.g_x + h, c.g_y)? - m(c.g_x - h, c.g_y)?;
    let dy = m(c.g_x, c.g_y + hy)? - m(c.g_x, c.g_y - hy)?;
    Ok(Partials { d_gx: dx * (0.5 / h), d_gy: dy * (0.5 / hy) })
}

/// Lie derivative of `g ↦ m̂(π(P_AN(g)))` at the AN element with coordinates
/// `c`: `2g_y ∂m̂/∂g_y`, `g_y ∂m̂/∂gₓ`, or `0`.
pub fn lie_derivative_mtt(c: &ANCoords, dir: LieDirection, q: &QuadratureConfig) -> Result<Estimate> {
    if dir == LieDirection::X3 {
        return Ok(Estimate::exact(0.0));
    }
    let p = m_hat_gradient(c, q)?;
    Ok(match dir {
        LieDirection::X1 => p.d_gy * (2.0 * c.g_y),
        LieDirection::X2 => p.d_gx * c.g_y,
        LieDirection::X3 => unreachable!(),
    })
}

/// How the θ-integrand for `∂_{X_j} m̃(a)` is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LieIntegrand {
    /// `X_j` transported to the AN factor of `k_θ a`: it first picks up
    /// `Ad` of the rotation angle `φ` of `P_K(k_θ a)`.
    Adjoint,
    /// The AN derivatives at `P_AN(k_θ a)` without the rotation; kept as a
    /// diagnostic, it is not the derivative of `m̃`.
    Unrotated,
}

/// `f_j(r) = ∂_{X_j} m̃(diag(r, 1/r))` by differentiating under the θ-integral.
pub fn lie_derivative_mtilde(
    r: f64,
    dir: LieDirection,
    q: &QuadratureConfig,
    integrand: LieIntegrand,
) -> Result<Estimate> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("r = {r} must be positive")));
    }
    if dir == LieDirection::X3 || r == 1.0 {
        return Ok(Estimate::exact(0.0));
    }
    theta_average(r, q, |theta, c| {
        let p = m_hat_gradient(c, q)?;
        let d1 = p.d_gy * (2.0 * c.g_y);
        let d2 = p.d_gx * c.g_y;
        if integrand == LieIntegrand::Unrotated {
            return Ok(if dir == LieDirection::X1 { d1 } else { d2 });
        }
        let (s, co) = theta.sin_cos();
        let phi = (r * s).atan2(co / r);
        let [a1, a2, _] = adjoint_action(phi, dir);
        Ok(d1 * a1 + d2 * a2)
    })
}

/// Central difference `(m̃(a·exp(tX)) - m̃(a·exp(-tX)))/(2t)`.
pub fn lie_derivative_mtilde_fd(r: f64, dir: LieDirection, t: f64, q: &QuadratureConfig) -> Result<Estimate> {
    let a = crate::sl2::cartan_a(r)?;
    let plus = m_tilde(&(a * dir.exp(t)), q)?;
    let minus = m_tilde(&(a * dir.exp(-t)), q)?;
    Ok((plus - minus) * (0.5 / t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub r: f64,
    pub f1: f64,
    pub f2: f64,
    /// `(|f₁| + |f₂|)/r`, i.e. `‖a‖·(|f₁| + |f₂|)` for `r < 1`.
    pub weighted: f64,
    /// Summed error estimate of `f₁` and `f₂`.
    pub error: f64,
}

pub fn decay_row(r: f64, q: &QuadratureConfig) -> Result<DecayRow> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::invalid(format!("decay rows need 0 < r < 1, got {r}")));
    }
    let f1 = lie_derivative_mtilde(r, LieDirection::X1, q, LieIntegrand::Adjoint)?;
    let f2 = lie_derivative_mtilde(r, LieDirection::X2, q, LieIntegrand::Adjoint)?;
    Ok(DecayRow {
        r,
        f1: f1.value,
        f2: f2.value,
        weighted: (f1.value.abs() + f2.value.abs()) / r,
        error: f1.error + f2.error,
    })
}

/// One [`DecayRow`] per grid point, in grid order.
pub fn hm_table(r_grid: &[f64], q: &QuadratureConfig) -> Result<Vec<DecayRow>> {
    #[cfg(feature = "parallel")]
    let rows: Vec<Result<DecayRow>> = r_grid.par_iter().map(|&r| decay_row(r, q)).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<DecayRow>> = r_grid.iter().map(|&r| decay_row(r, q)).collect();
    rows.into_iter().collect()
}

/// Least-squares slope of `ln y` against `ln x` over the positive pairs.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && y.abs() > 0.0).map(|(x, y)| (x.ln(), y.abs().ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `∫_{θ₈(r)}^{π/2-ε} g_y² ∂²m̂/∂gₓ² dθ` for each `ε`, with the Case-8 closed
/// form of the second derivative. Integrals are signed, so an `ε` larger
/// than `π/2 - θ₈` gives a negative value.
pub fn second_order_divergence_probe(r: f64, eps_grid: &[f64], q: &QuadratureConfig) -> Result<Vec<f64>> {
    if eps_grid.is_empty() || eps_grid.iter().any(|e| !(*e > 0.0 && *e < FRAC_PI_2)) {
        return Err(Error::invalid("ε grid must be non-empty with entries in (0, π/2)"));
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("ε grid must be strictly decreasing"));
    }
    let theta8 = theta_boundaries(r)?.theta8;
    // With δ = π/2 - θ = e^v the integrand behaves like a constant in v.
    let g = |v: f64| {
        let delta = v.exp();
        let c = iwasawa_image_coords(r, FRAC_PI_2 - delta).expect("r validated");
        c.g_y * c.g_y * case8_d2_gx(c.g_x) * delta
    };
    let mut v_prev = (FRAC_PI_2 - theta8).ln();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let v = eps.ln();
        acc += integrate(g, v, v_prev, q)?.value;
        v_prev = v;
        out.push(acc);
    }
    Ok(out)
}

/// `ln 10 · 3/π`: the per-decade increment of the probe once `ε ≪ r⁴`.
pub fn probe_decade_increment() -> f64 {
    3.0 / PI * std::f64::consts::LN_10
}
