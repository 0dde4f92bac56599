//! Curves bounding `A(gₓ, g_y) = {x + gₓy > -1/2} ∩ {(x + gₓy + 1)² + (g_y y)² > 1}`
//! inside 𝓕, the `gₓ`-values `bᵢ(g_y)` where the picture changes, and the
//! case partition they induce.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::brent;
use crate::sl2::ANCoords;

pub(crate) const SQRT3: f64 = 1.732_050_807_568_877_2;
/// `2/√3`, lower edge of the large-`g_y` regime and the value of `-b₈`.
pub const TWO_OVER_SQRT3: f64 = 2.0 / SQRT3;
pub const SMALL_GY_MAX: f64 = 0.5;
pub const DEFAULT_HYBRID_MARGIN: f64 = 1e-6;
const RADICAND_SLACK: f64 = 1e-12;
const ROOT_XTOL: f64 = 1e-15;

fn checked_sqrt(v: f64, curve: &'static str) -> Result<f64> {
    if v < -RADICAND_SLACK || v.is_nan() {
        return Err(Error::Radicand { curve, value: v });
    }
    Ok(v.max(0.0).sqrt())
}

/// `gₓ² - g_y² x(x+2)`, the discriminant of the ellipse in `y`.
pub fn ellipse_discriminant(x: f64, c: &ANCoords) -> f64 {
    c.g_x * c.g_x - c.g_y * c.g_y * x * (x + 2.0)
}

pub fn e_y_upper(x: f64, c: &ANCoords) -> Result<f64> {
    let sd = checked_sqrt(ellipse_discriminant(x, c), "E_y_upper")?;
    Ok((sd - (x + 1.0) * c.g_x) / (c.g_x * c.g_x + c.g_y * c.g_y))
}

pub fn e_y_lower(x: f64, c: &ANCoords) -> Result<f64> {
    let sd = checked_sqrt(ellipse_discriminant(x, c), "E_y_lower")?;
    Ok((-sd - (x + 1.0) * c.g_x) / (c.g_x * c.g_x + c.g_y * c.g_y))
}

pub fn e_x_right(y: f64, c: &ANCoords) -> Result<f64> {
    let s = checked_sqrt(1.0 - y * y * c.g_y * c.g_y, "E_x_right")?;
    Ok(-y * c.g_x + s - 1.0)
}

pub fn e_x_left(y: f64, c: &ANCoords) -> Result<f64> {
    let s = checked_sqrt(1.0 - y * y * c.g_y * c.g_y, "E_x_left")?;
    Ok(-y * c.g_x - s - 1.0)
}

/// The line `x + gₓy = -1/2` solved for `y`.
pub fn l_y(x: f64, c: &ANCoords) -> Result<f64> {
    if c.g_x.abs() < 1e-14 {
        return Err(Error::SingularLine("L_y"));
    }
    Ok(-(1.0 + 2.0 * x) / (2.0 * c.g_x))
}

pub fn l_x(y: f64, c: &ANCoords) -> f64 {
    -y * c.g_x - 0.5
}

/// `1/E_y_upper`, rationalized where the direct form cancels.
pub fn inv_e_y_upper(x: f64, c: &ANCoords) -> Result<f64> {
    let sd = checked_sqrt(ellipse_discriminant(x, c), "E_y_upper")?;
    if c.g_x >= 0.0 {
        Ok(-(sd + (x + 1.0) * c.g_x) / (x * (x + 2.0)))
    } else {
        Ok((c.g_x * c.g_x + c.g_y * c.g_y) / (sd - (x + 1.0) * c.g_x))
    }
}

/// `1/E_y_lower`, rationalized where the direct form cancels.
pub fn inv_e_y_lower(x: f64, c: &ANCoords) -> Result<f64> {
    let sd = checked_sqrt(ellipse_discriminant(x, c), "E_y_lower")?;
    if c.g_x < 0.0 {
        Ok((sd - (x + 1.0) * c.g_x) / (x * (x + 2.0)))
    } else {
        Ok(-(c.g_x * c.g_x + c.g_y * c.g_y) / (sd + (x + 1.0) * c.g_x))
    }
}

/// `gₓ`-values at which the shape of `A ∩ 𝓕` changes. `b₂…b₇` exist for
/// `g_y ≤ 1/2` (`b₄` up to `g_y ≤ 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryValues {
    pub b2: Option<f64>,
    pub b3: Option<f64>,
    pub b4: Option<f64>,
    pub b5: Option<f64>,
    pub b6: Option<f64>,
    pub b7: Option<f64>,
    pub b8: f64,
    pub b9: f64,
}

impl BoundaryValues {
    /// The small-`g_y` boundaries in decreasing order.
    pub fn small_gy(&self) -> Option<[f64; 6]> {
        Some([self.b2?, self.b3?, self.b4?, self.b5?, self.b6?, self.b7?])
    }
}

pub fn boundary_values(g_y: f64) -> Result<BoundaryValues> {
    if !(g_y > 0.0) || !g_y.is_finite() {
        return Err(Error::Regime { what: "boundary values", g_y });
    }
    let small = g_y <= SMALL_GY_MAX;
    let r = (4.0 - 3.0 * g_y * g_y).sqrt();
    let only = |v: f64| small.then_some(v);
    Ok(BoundaryValues {
        b2: only((-1.0 + r) / SQRT3),
        b3: only(0.0),
        b4: if g_y <= 1.0 { Some(-1.0 + (1.0 - g_y * g_y).sqrt()) } else { None },
        b5: only(-(5f64.sqrt()) * g_y / 2.0),
        b6: only(-2.0 * g_y / SQRT3),
        b7: only(-(3.0 - r) / SQRT3),
        b8: -TWO_OVER_SQRT3,
        b9: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseRegime {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
    Case7,
    Case8,
    Fallback,
}

impl CaseRegime {
    pub fn name(&self) -> &'static str {
        match self {
            CaseRegime::Case1 => "CASE1",
            CaseRegime::Case2 => "CASE2",
            CaseRegime::Case3 => "CASE3",
            CaseRegime::Case4 => "CASE4",
            CaseRegime::Case5 => "CASE5",
            CaseRegime::Case6 => "CASE6",
            CaseRegime::Case7 => "CASE7",
            CaseRegime::Case8 => "CASE8",
            CaseRegime::Fallback => "FALLBACK",
        }
    }
}

impl std::fmt::Display for CaseRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Case of `(gₓ, g_y)`; `Fallback` in the band `1/2 < g_y ≤ 2/√3` and within
/// `hybrid_margin` of a boundary value.
///
/// Above the band, `gₓ > 0` is reported as `Case1` and `gₓ < b₈` as `Case7`:
/// there the ellipse sits below 𝓕 and only the line matters, so `m̂` is
/// exactly 1 or 0.
pub fn classify_case(c: &ANCoords, hybrid_margin: f64) -> CaseRegime {
    let (gx, gy) = (c.g_x, c.g_y);
    let Ok(b) = boundary_values(gy) else { return CaseRegime::Fallback };
    if let Some(bs) = b.small_gy() {
        if bs.iter().any(|&v| (gx - v).abs() < hybrid_margin) {
            return CaseRegime::Fallback;
        }
        let cases = [
            CaseRegime::Case1,
            CaseRegime::Case2,
            CaseRegime::Case3,
            CaseRegime::Case4,
            CaseRegime::Case5,
            CaseRegime::Case6,
        ];
        for (v, case) in bs.iter().zip(cases) {
            if gx > *v {
                return case;
            }
        }
        return CaseRegime::Case7;
    }
    if gy > TWO_OVER_SQRT3 {
        if (gx - b.b8).abs() < hybrid_margin || (gx - b.b9).abs() < hybrid_margin {
            return CaseRegime::Fallback;
        }
        return if gx > 0.0 {
            CaseRegime::Case1
        } else if gx > b.b8 {
            CaseRegime::Case8
        } else {
            CaseRegime::Case7
        };
    }
    CaseRegime::Fallback
}

/// Intersection coordinates used by the case integrals.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Intersections {
    pub a_x: Option<f64>,
    pub a_y: Option<f64>,
    pub b_x: Option<f64>,
    pub b_y: Option<f64>,
    pub c_y: Option<f64>,
    pub d_x: Option<f64>,
}

/// `1/E_y_upper - 1/√(1-x²)`: the upper ellipse arc against the unit circle.
pub(crate) fn f2(x: f64, c: &ANCoords) -> Result<f64> {
    Ok(inv_e_y_upper(x, c)? - 1.0 / (1.0 - x * x).sqrt())
}

/// `1/√(1-x²) - 1/E_y_lower`.
pub(crate) fn f51(x: f64, c: &ANCoords) -> Result<f64> {
    Ok(1.0 / (1.0 - x * x).sqrt() - inv_e_y_lower(x, c)?)
}

fn root(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, what: &str) -> Result<f64> {
    let mut failure = None;
    let r = brent(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        ROOT_XTOL,
    );
    match (r, failure) {
        (Ok(v), None) => Ok(v),
        (_, Some(e)) => Err(e),
        (Err(e), None) => Err(Error::Degenerate(format!("{what}: {e}"))),
    }
}

/// Case-2 and Case-3 `A_x`: where the upper ellipse arc leaves the circle.
fn a_x_upper(c: &ANCoords, lo: f64) -> Result<f64> {
    let hi = (-SQRT3 * c.g_x / 2.0).min(-1e-15);
    root(|x| f2(x, c), lo, hi, "A_x (upper arc)").or_else(|_| root(|x| f2(x, c), lo, -1e-15, "A_x (upper arc)"))
}

pub fn b_x_closed(c: &ANCoords) -> f64 {
    -(SQRT3 * c.g_x + c.g_y) / (2.0 * c.g_y)
}

pub fn d_x_closed(g_x: f64) -> f64 {
    -(g_x * (4.0 * g_x * g_x + 3.0).sqrt() + 1.0) / (2.0 * g_x * g_x + 2.0)
}

pub fn intersections(c: &ANCoords, case: CaseRegime) -> Result<Intersections> {
    let mut out = Intersections::default();
    match case {
        CaseRegime::Case1 | CaseRegime::Case7 => {}
        CaseRegime::Case2 => out.a_x = Some(a_x_upper(c, -0.5)?),
        CaseRegime::Case3 => {
            let bx = b_x_closed(c);
            out.b_x = Some(bx);
            out.a_x = Some(a_x_upper(c, bx)?);
        }
        CaseRegime::Case4 => {
            out.b_y = Some(SQRT3 / (2.0 * c.g_y));
            out.c_y = Some(-1.0 / c.g_x);
            let a_y = root(|y| Ok(e_x_right(y, c)? - (1.0 - y * y).sqrt()), SQRT3 / 2.0, 1.0, "A_y")?;
            out.a_y = Some(a_y);
        }
        CaseRegime::Case5 | CaseRegime::Case6 => {
            let a_x = root(|x| f51(x, c), c.g_y / 8.0, 0.5, "A_x (lower arc)")
                .or_else(|_| root(|x| f51(x, c), 1e-12, 0.5, "A_x (lower arc)"))?;
            out.a_x = Some(a_x);
            if case == CaseRegime::Case5 {
                out.b_x = Some(b_x_closed(c));
            }
        }
        CaseRegime::Case8 => out.d_x = Some(d_x_closed(c.g_x)),
        CaseRegime::Fallback => {
            return Err(Error::invalid("no closed-form intersections in the fallback regime"));
        }
    }
    Ok(out)
}

/// Angles `θ ∈ (-π/2, π/2)` where `(gₓ(r,θ), g_y(r,θ))` crosses a boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaBoundaries {
    pub theta2: f64,
    pub theta7: f64,
    pub theta8: f64,
}

/// Closed forms of the crossings of `b₂`, `b₇` and `b₈`; needs
/// `9r⁸ - 66r⁴ + 9 ≥ 0`, i.e. `r ≤ 0.6106…`.
///
/// `θ₈` is the crossing of `gₓ = -2/√3` on the large-`g_y` side, the one that
/// tends to `π/2` as `r → 0`.
pub fn theta_boundaries(r: f64) -> Result<ThetaBoundaries> {
    if !(r > 0.0) || r >= 1.0 {
        return Err(Error::invalid(format!("theta boundaries need 0 < r < 1, got {r}")));
    }
    let r4 = r.powi(4);
    let disc = checked_sqrt(9.0 * r4 * r4 - 66.0 * r4 + 9.0, "theta boundaries")?;
    let c2 = (16.0 * r4 - 3.0 * disc - 12.0) / (28.0 * (r4 - 1.0));
    let theta7 = checked_sqrt(c2, "theta7")?.min(1.0).acos();
    let theta8 = ((3.0 - 3.0 * r4 + disc) / (4.0 * SQRT3 * r4)).atan();
    Ok(ThetaBoundaries { theta2: -std::f64::consts::FRAC_PI_6, theta7, theta8: theta8.min(FRAC_PI_2) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(gx: f64, gy: f64) -> ANCoords {
        ANCoords::new(gx, gy).unwrap()
    }

    #[test]
    fn curve_examples() {
        let k = c(0.7, 0.3);
        assert_eq!(e_y_upper(0.0, &k).unwrap(), 0.0);
        let k = c(-0.7, 0.3);
        assert!((e_y_upper(0.0, &k).unwrap() - 1.4 / (0.49 + 0.09)).abs() < 1e-15);
        assert_eq!(l_x(0.0, &k), -0.5);
        assert!(matches!(l_y(0.1, &c(0.0, 1.0)), Err(Error::SingularLine(_))));
        assert!(matches!(e_x_right(3.0, &c(0.0, 1.0)), Err(Error::Radicand { .. })));
    }

    #[test]
    fn curves_lie_on_the_ellipse() {
        let on = |x: f64, y: f64, k: &ANCoords| (x + k.g_x * y + 1.0).powi(2) + (k.g_y * y).powi(2) - 1.0;
        for (gx, gy) in [(0.3, 0.2), (-0.4, 0.45), (-1.2, 1.5), (2.0, 0.1)] {
            let k = c(gx, gy);
            for x in [-0.45, -0.2, 0.1, 0.3] {
                if ellipse_discriminant(x, &k) < 0.0 {
                    continue;
                }
                assert!(on(x, e_y_upper(x, &k).unwrap(), &k).abs() < 1e-10);
                assert!(on(x, e_y_lower(x, &k).unwrap(), &k).abs() < 1e-10);
                let iu = inv_e_y_upper(x, &k).unwrap();
                assert!((iu * e_y_upper(x, &k).unwrap() - 1.0).abs() < 1e-10);
            }
            for y in [0.1, 0.5, 0.9 / gy.max(1.0)] {
                assert!(on(e_x_right(y, &k).unwrap(), y, &k).abs() < 1e-10);
                assert!(on(e_x_left(y, &k).unwrap(), y, &k).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn boundary_value_examples() {
        let b = boundary_values(0.5).unwrap();
        assert!((b.b2.unwrap() - 0.463_49).abs() < 1e-5);
        assert!((b.b6.unwrap() + 0.577_350_27).abs() < 1e-8);
        for gy in [0.01, 0.5, 1.0, 5.0] {
            let b = boundary_values(gy).unwrap();
            assert_eq!((b.b8, b.b9), (-TWO_OVER_SQRT3, 0.0));
        }
        assert!(boundary_values(0.0).is_err());
        assert!(boundary_values(0.7).unwrap().b2.is_none());
    }

    #[test]
    fn boundary_values_are_strictly_ordered() {
        for i in 1..=500 {
            let gy = 0.5 * i as f64 / 500.0;
            let b = boundary_values(gy).unwrap().small_gy().unwrap();
            assert!(b.windows(2).all(|w| w[0] > w[1]), "{gy}: {b:?}");
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_case(&c(1.0, 0.3), DEFAULT_HYBRID_MARGIN), CaseRegime::Case1);
        assert_eq!(classify_case(&c(-5.0, 0.3), DEFAULT_HYBRID_MARGIN), CaseRegime::Case7);
        assert_eq!(classify_case(&c(0.0, 1.0), DEFAULT_HYBRID_MARGIN), CaseRegime::Fallback);
        assert_eq!(classify_case(&c(-1.0, 1.5), DEFAULT_HYBRID_MARGIN), CaseRegime::Case8);
        let b4 = boundary_values(0.3).unwrap().b4.unwrap();
        assert_eq!(classify_case(&c(b4 + 1e-7, 0.3), DEFAULT_HYBRID_MARGIN), CaseRegime::Fallback);
    }

    #[test]
    fn intersection_examples() {
        let k = c(-1.0, 1.5);
        let i = intersections(&k, CaseRegime::Case8).unwrap();
        assert!((i.d_x.unwrap() - (7f64.sqrt() - 1.0) / 4.0).abs() < 1e-14);

        let gy = 0.3;
        let b4 = boundary_values(gy).unwrap().b4.unwrap();
        let k = c(b4 * 0.5, gy);
        let i = intersections(&k, CaseRegime::Case3).unwrap();
        assert!((i.b_x.unwrap() + (SQRT3 * b4 * 0.5 + gy) / (2.0 * gy)).abs() < 1e-15);

        let b = boundary_values(gy).unwrap();
        let k = c(0.5 * (b.b4.unwrap() + b.b5.unwrap()), gy);
        let i = intersections(&k, CaseRegime::Case4).unwrap();
        assert!(i.b_y.unwrap() > SQRT3 / 2.0);
        let a_y = i.a_y.unwrap();
        assert!((e_x_right(a_y, &k).unwrap() - (1.0 - a_y * a_y).sqrt()).abs() < 1e-12);

        let k = c(0.5 * b.b2.unwrap(), gy);
        let a_x = intersections(&k, CaseRegime::Case2).unwrap().a_x.unwrap();
        assert!(a_x <= -SQRT3 * k.g_x / 2.0);
        assert!(f2(a_x, &k).unwrap().abs() < 1e-9);

        let k = c(0.5 * (b.b5.unwrap() + b.b6.unwrap()), gy);
        let a_x = intersections(&k, CaseRegime::Case5).unwrap().a_x.unwrap();
        assert!(a_x >= gy / 4.0);
    }

    #[test]
    fn theta_boundary_limits() {
        let t = theta_boundaries(1e-3).unwrap();
        assert_eq!(t.theta2, -std::f64::consts::FRAC_PI_6);
        assert!((t.theta7 - std::f64::consts::FRAC_PI_6).abs() < 1e-6);
        assert!((t.theta8 - FRAC_PI_2).abs() < 1e-3);
        assert!(theta_boundaries(0.7).is_err());
    }
}
