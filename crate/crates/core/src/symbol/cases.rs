//! Closed-form reductions of `m̂` and its partial derivatives to 1-D
//! integrals, one per case.

use std::f64::consts::{FRAC_PI_3, PI};

use serde::Serialize;

use super::geometry::{
    classify_case, e_x_right, ellipse_discriminant, f2, f51, intersections, inv_e_y_upper, CaseRegime,
    DEFAULT_HYBRID_MARGIN, SQRT3,
};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Estimate, QuadratureConfig};
use crate::sl2::ANCoords;

const THREE_OVER_PI: f64 = 3.0 / PI;

/// Partial derivatives of `m̂` with their error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Partials {
    pub d_gx: Estimate,
    pub d_gy: Estimate,
}

fn regime(c: &ANCoords) -> Result<CaseRegime> {
    match classify_case(c, DEFAULT_HYBRID_MARGIN) {
        CaseRegime::Fallback => Err(Error::Regime { what: "closed-form cases", g_y: c.g_y }),
        k => Ok(k),
    }
}

// Runs `f` inside the quadrature and surfaces the first domain error.
fn quad(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, q: &QuadratureConfig) -> Result<Estimate> {
    let mut failure = None;
    let e = integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        q,
    );
    match failure {
        Some(e) => Err(e),
        None => e,
    }
}

fn f31(x: f64, c: &ANCoords) -> f64 {
    1.0 / (1.0 - x * x).sqrt() + 2.0 * c.g_x / (1.0 + 2.0 * x)
}

fn f52(x: f64, c: &ANCoords) -> Result<f64> {
    Ok(inv_e_y_upper(x, c)? + 2.0 * c.g_x / (1.0 + 2.0 * x))
}

/// `m̂` by the case formulas. Fails with a regime error in the fallback regime.
pub fn m_hat_case(c: &ANCoords, q: &QuadratureConfig) -> Result<Estimate> {
    let case = regime(c)?;
    m_hat_in_case(c, case, q)
}

pub(crate) fn m_hat_in_case(c: &ANCoords, case: CaseRegime, q: &QuadratureConfig) -> Result<Estimate> {
    let k = *c;
    let sum = match case {
        CaseRegime::Case1 => return Ok(Estimate::exact(1.0)),
        CaseRegime::Case7 => return Ok(Estimate::exact(0.0)),
        CaseRegime::Case2 => {
            let a_x = intersections(c, case)?.a_x.unwrap();
            let e = quad(|x| f2(x, &k), -0.5, a_x, q)?;
            return Ok(Estimate::exact(1.0) + e * THREE_OVER_PI);
        }
        CaseRegime::Case3 => {
            let i = intersections(c, case)?;
            let (a_x, b_x) = (i.a_x.unwrap(), i.b_x.unwrap());
            quad(|x| Ok(f31(x, &k)), b_x, 0.5, q)? + quad(|x| f2(x, &k), b_x, a_x, q)?
        }
        CaseRegime::Case4 => {
            let i = intersections(c, case)?;
            let (a_y, b_y, c_y) = (i.a_y.unwrap(), i.b_y.unwrap(), i.c_y.unwrap());
            let f41 = |y: f64| Ok((0.5 - (1.0 - y * y).sqrt()) / (y * y));
            let f42 = |y: f64| Ok((0.5 - e_x_right(y, &k)?) / (y * y));
            let f43 = |y: f64| Ok((1.0 + y * k.g_x) / (y * y));
            quad(f41, SQRT3 / 2.0, a_y, q)? + quad(f42, a_y, b_y, q)? + quad(f43, b_y, c_y, q)?
        }
        CaseRegime::Case5 => {
            let i = intersections(c, case)?;
            let (a_x, b_x) = (i.a_x.unwrap(), i.b_x.unwrap());
            quad(|x| f51(x, &k), a_x, 0.5, q)? + quad(|x| f52(x, &k), b_x, 0.5, q)?
        }
        CaseRegime::Case6 => {
            let a_x = intersections(c, case)?.a_x.unwrap();
            quad(|x| f51(x, &k), a_x, 0.5, q)?
        }
        CaseRegime::Case8 => {
            let d_x = intersections(c, case)?.d_x.unwrap();
            quad(|x| Ok(f31(x, &k)), d_x, 0.5, q)?
        }
        CaseRegime::Fallback => unreachable!(),
    };
    Ok(sum * THREE_OVER_PI)
}

// ∂F₂/∂gₓ, written without cancellation for gₓ < 0.
fn d_f2_dgx(x: f64, c: &ANCoords) -> f64 {
    let d = ellipse_discriminant(x, c);
    let sd = d.sqrt();
    let (gx, gy) = (c.g_x, c.g_y);
    if gx >= 0.0 {
        -(gx / sd + x + 1.0) / (x * (x + 2.0))
    } else {
        let xp = x + 1.0;
        -(gx * gx - xp * xp * gy * gy) / (d * (xp + gx.abs() / sd))
    }
}

fn d_f51_dgx(x: f64, c: &ANCoords) -> f64 {
    let sd = ellipse_discriminant(x, c).sqrt();
    (-c.g_x / sd + x + 1.0) / (x * (x + 2.0))
}

fn d_dgy(x: f64, c: &ANCoords) -> f64 {
    c.g_y / ellipse_discriminant(x, c).sqrt()
}

/// `(∂m̂/∂gₓ, ∂m̂/∂g_y)` by the case formulas.
pub fn m_hat_partials(c: &ANCoords, q: &QuadratureConfig) -> Result<Partials> {
    let case = regime(c)?;
    partials_in_case(c, case, q)
}

pub(crate) fn partials_in_case(c: &ANCoords, case: CaseRegime, q: &QuadratureConfig) -> Result<Partials> {
    let k = *c;
    let dgy = |a: f64, b: f64| quad(|x| Ok(d_dgy(x, &k)), a, b, q);
    let (d_gx, d_gy) = match case {
        CaseRegime::Case1 | CaseRegime::Case7 => return Ok(Partials::default()),
        CaseRegime::Case2 => {
            let a_x = intersections(c, case)?.a_x.unwrap();
            (quad(|x| Ok(d_f2_dgx(x, &k)), -0.5, a_x, q)?, dgy(-0.5, a_x)?)
        }
        CaseRegime::Case3 => {
            let i = intersections(c, case)?;
            let (a_x, b_x) = (i.a_x.unwrap(), i.b_x.unwrap());
            // ∫_{B_x}^{1/2} 2/(1+2x) dx
            let log_term = Estimate::exact((2.0 / (1.0 + 2.0 * b_x)).ln());
            (log_term + quad(|x| Ok(d_f2_dgx(x, &k)), b_x, a_x, q)?, dgy(b_x, a_x)?)
        }
        CaseRegime::Case4 => {
            let i = intersections(c, case)?;
            let (a_y, c_y) = (i.a_y.unwrap(), i.c_y.unwrap());
            let d_gx = Estimate::exact((c_y / a_y).ln());
            let d_gy = Estimate::exact(FRAC_PI_3 - (k.g_y * a_y).min(1.0).asin());
            (d_gx, d_gy)
        }
        CaseRegime::Case5 => {
            let i = intersections(c, case)?;
            let (a_x, b_x) = (i.a_x.unwrap(), i.b_x.unwrap());
            let log_term = Estimate::exact((2.0 / (1.0 + 2.0 * b_x)).ln());
            let d_gx =
                quad(|x| Ok(d_f51_dgx(x, &k)), a_x, 0.5, q)? + quad(|x| Ok(d_f2_dgx(x, &k)), b_x, 0.5, q)? + log_term;
            (d_gx, dgy(a_x, 0.5)? + dgy(b_x, 0.5)?)
        }
        CaseRegime::Case6 => {
            let a_x = intersections(c, case)?.a_x.unwrap();
            (quad(|x| Ok(d_f51_dgx(x, &k)), a_x, 0.5, q)?, dgy(a_x, 0.5)?)
        }
        CaseRegime::Case8 => (Estimate::exact(case8_log_argument(k.g_x).ln()), Estimate::exact(0.0)),
        CaseRegime::Fallback => unreachable!(),
    };
    Ok(Partials { d_gx: d_gx * THREE_OVER_PI, d_gy: d_gy * THREE_OVER_PI })
}

/// `2(gₓ²+1)/(gₓ(gₓ - √(4gₓ²+3)))`, equal to `2/(1 + 2D_x)`.
pub fn case8_log_argument(g_x: f64) -> f64 {
    2.0 * (g_x * g_x + 1.0) / (g_x * (g_x - (4.0 * g_x * g_x + 3.0).sqrt()))
}

/// `(gₓ/√(4gₓ²+3) - 1)/(gₓ³ + gₓ)`; the Case-8 `∂²m̂/∂gₓ²` is `3/π` times this.
pub fn case8_d2_kernel(g_x: f64) -> f64 {
    (g_x / (4.0 * g_x * g_x + 3.0).sqrt() - 1.0) / (g_x * g_x * g_x + g_x)
}

pub fn case8_d2_gx(g_x: f64) -> f64 {
    THREE_OVER_PI * case8_d2_kernel(g_x)
}
