//! 2×2 matrices of determinant one, the Möbius action on the upper
//! half-plane and the Iwasawa (`G = ANK`) and Cartan (`G = KAK`) pictures.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Mul, Neg};

use serde::Serialize;

use crate::error::{Error, Result};

/// Allowed drift of `ad - bc` from one.
pub const DET_TOLERANCE: f64 = 1e-9;

/// Smallest |cz+d| accepted by the Möbius action.
const MIN_DENOMINATOR: f64 = 1e-300;

/// Element of SL₂(ℝ), stored row-major as `(a b; c d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealMat2 {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl RealMat2 {
    pub const IDENTITY: RealMat2 = RealMat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > DET_TOLERANCE {
            return Err(Error::Determinant { det });
        }
        Ok(RealMat2 { a, b, c, d })
    }

    /// Rescales a matrix of positive determinant onto SL₂(ℝ).
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::Determinant { det });
        }
        let s = det.sqrt().recip();
        Ok(RealMat2 { a: a * s, b: b * s, c: c * s, d: d * s })
    }

    /// Counter-clockwise rotation `(cos θ, -sin θ; sin θ, cos θ)`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        RealMat2 { a: c, b: -s, c: s, d: c }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        RealMat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn transpose(&self) -> Self {
        RealMat2 { a: self.a, b: self.c, c: self.b, d: self.d }
    }

    pub fn max_abs_diff(&self, other: &RealMat2) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
            .max((self.d - other.d).abs())
    }

    /// `ρ_g z = (az + b)/(cz + d)`.
    pub fn act(&self, z: HalfPlanePoint) -> Result<HalfPlanePoint> {
        let (x, y) = (z.x, z.y);
        let den_re = self.c * x + self.d;
        let den_im = self.c * y;
        let den = den_re * den_re + den_im * den_im;
        if den.sqrt() < MIN_DENOMINATOR {
            return Err(Error::SingularDenominator(den.sqrt()));
        }
        // (az+b)·conj(cz+d) / |cz+d|²
        let num_re = (self.a * x + self.b) * den_re + self.a * y * den_im;
        let num_im = self.det() * y;
        let w = HalfPlanePoint { x: num_re / den, y: num_im / den };
        if !(w.y > 0.0) || !w.x.is_finite() {
            return Err(Error::SingularDenominator(den.sqrt()));
        }
        Ok(w)
    }

    /// `g = s·k` with `s` upper triangular (positive diagonal) and `k` a
    /// rotation; the bottom row of `g` is `s₂₂·(sin θ, cos θ)`.
    pub fn iwasawa(&self) -> IwasawaParts {
        let theta = canonical_angle(self.c.atan2(self.d));
        let (sn, cs) = theta.sin_cos();
        let s11 = self.a * cs - self.b * sn;
        let s12 = self.a * sn + self.b * cs;
        let s22 = self.c * sn + self.d * cs;
        IwasawaParts { s: RealMat2 { a: s11, b: s12, c: 0.0, d: s22 }, theta }
    }

    /// Largest singular value, from the closed-form eigenvalues of `gᵀg`.
    pub fn operator_norm(&self) -> f64 {
        let f2 = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let det = self.det();
        // σ₁² + σ₂² = ‖g‖_F², σ₁σ₂ = |det|
        let disc = (f2 * f2 - 4.0 * det * det).max(0.0).sqrt();
        ((f2 + disc) / 2.0).sqrt()
    }

    /// Point of the upper half-plane `π(g) = ρ_g(i)`.
    pub fn project(&self) -> Result<HalfPlanePoint> {
        self.act(HalfPlanePoint::I)
    }
}

impl Mul for RealMat2 {
    type Output = RealMat2;

    fn mul(self, o: RealMat2) -> RealMat2 {
        let a = self.a * o.a + self.b * o.c;
        let b = self.a * o.b + self.b * o.d;
        let c = self.c * o.a + self.d * o.c;
        let d = self.c * o.b + self.d * o.d;
        let det = a * d - b * c;
        if det > 0.0 && (det - 1.0).abs() > 1e-14 {
            let s = det.sqrt().recip();
            RealMat2 { a: a * s, b: b * s, c: c * s, d: d * s }
        } else {
            RealMat2 { a, b, c, d }
        }
    }
}

impl Neg for RealMat2 {
    type Output = RealMat2;
    fn neg(self) -> RealMat2 {
        RealMat2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl From<IntMat2> for RealMat2 {
    fn from(m: IntMat2) -> Self {
        RealMat2 { a: m.a as f64, b: m.b as f64, c: m.c as f64, d: m.d as f64 }
    }
}

/// Maps an angle onto `[0, 2π)`.
pub fn canonical_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Element of SL₂(ℤ). The determinant is exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntMat2 {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl IntMat2 {
    pub const IDENTITY: IntMat2 = IntMat2 { a: 1, b: 0, c: 0, d: 1 };
    pub const S: IntMat2 = IntMat2 { a: 0, b: -1, c: 1, d: 0 };
    pub const S_INV: IntMat2 = IntMat2 { a: 0, b: 1, c: -1, d: 0 };
    pub const T: IntMat2 = IntMat2 { a: 1, b: 1, c: 0, d: 1 };
    /// `R = ST`.
    pub const R: IntMat2 = IntMat2 { a: 0, b: -1, c: 1, d: 1 };
    pub const R2: IntMat2 = IntMat2 { a: -1, b: -1, c: 1, d: 0 };
    /// `R⁻¹ = -R²`.
    pub const R_INV: IntMat2 = IntMat2 { a: 1, b: 1, c: -1, d: 0 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::invalid(format!("integer matrix ({a} {b}; {c} {d}) has determinant {det}")));
        }
        Ok(IntMat2 { a, b, c, d })
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn inverse(&self) -> Self {
        IntMat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn is_plus_minus_identity(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d && self.a.abs() == 1
    }

    /// Representative of `±γ` with `c > 0`, or `c = 0` and `a > 0`.
    pub fn canonical(&self) -> Self {
        if self.c < 0 || (self.c == 0 && self.a < 0) {
            -*self
        } else {
            *self
        }
    }

    pub fn checked_mul(&self, o: &IntMat2) -> Result<IntMat2> {
        let dot = |p: i64, q: i64, r: i64, s: i64| -> Result<i64> {
            let v = p as i128 * q as i128 + r as i128 * s as i128;
            i64::try_from(v).map_err(|_| Error::Overflow("IntMat2 product"))
        };
        Ok(IntMat2 {
            a: dot(self.a, o.a, self.b, o.c)?,
            b: dot(self.a, o.b, self.b, o.d)?,
            c: dot(self.c, o.a, self.d, o.c)?,
            d: dot(self.c, o.b, self.d, o.d)?,
        })
    }

    pub fn pow(&self, n: i64) -> Result<IntMat2> {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut acc = IntMat2::IDENTITY;
        for _ in 0..n.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }

    pub fn act(&self, z: HalfPlanePoint) -> Result<HalfPlanePoint> {
        RealMat2::from(*self).act(z)
    }
}

impl Mul for IntMat2 {
    type Output = IntMat2;

    /// Panics on `i64` overflow, like the primitive integer operators.
    fn mul(self, o: IntMat2) -> IntMat2 {
        self.checked_mul(&o).expect("IntMat2 multiplication overflowed")
    }
}

impl Neg for IntMat2 {
    type Output = IntMat2;
    fn neg(self) -> IntMat2 {
        IntMat2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Point `x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub const I: HalfPlanePoint = HalfPlanePoint { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::invalid(format!("{x} + {y}i is not in the upper half-plane")));
        }
        Ok(HalfPlanePoint { x, y })
    }

    pub fn dist(&self, o: &HalfPlanePoint) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }
}

/// Factors of `g = s·k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IwasawaParts {
    /// Upper triangular with positive diagonal.
    pub s: RealMat2,
    /// Angle of the rotation factor, in `[0, 2π)`.
    pub theta: f64,
}

impl IwasawaParts {
    pub fn k(&self) -> RealMat2 {
        RealMat2::rotation(self.theta)
    }

    pub fn recompose(&self) -> RealMat2 {
        self.s * self.k()
    }
}

pub fn mobius_act(g: &RealMat2, z: HalfPlanePoint) -> Result<HalfPlanePoint> {
    g.act(z)
}

pub fn iwasawa_decompose(g: &RealMat2) -> IwasawaParts {
    g.iwasawa()
}

/// `diag(r, 1/r)`.
pub fn cartan_a(r: f64) -> Result<RealMat2> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("Cartan parameter r = {r} must be positive")));
    }
    Ok(RealMat2 { a: r, b: 0.0, c: 0.0, d: r.recip() })
}

pub fn operator_norm(g: &RealMat2) -> f64 {
    g.operator_norm()
}

/// Coordinates `(g_x, g_y)` of `(√g_y, g_x/√g_y; 0, 1/√g_y) ∈ AN`; the
/// element maps `i` to `g_x + i g_y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ANCoords {
    pub g_x: f64,
    pub g_y: f64,
}

impl ANCoords {
    pub fn new(g_x: f64, g_y: f64) -> Result<Self> {
        if !(g_y > 0.0) || !g_x.is_finite() || !g_y.is_finite() {
            return Err(Error::invalid(format!("AN coordinates need g_y > 0, got ({g_x}, {g_y})")));
        }
        Ok(ANCoords { g_x, g_y })
    }
}

pub fn an_coords(g: &RealMat2) -> Result<ANCoords> {
    if g.c.abs() > 1e-12 || !(g.a > 0.0) || !(g.d > 0.0) {
        return Err(Error::invalid("matrix is not in AN (upper triangular, positive diagonal)"));
    }
    ANCoords::new(g.b * g.a, g.a * g.a)
}

pub fn an_matrix(c: ANCoords) -> Result<RealMat2> {
    let c = ANCoords::new(c.g_x, c.g_y)?;
    let sy = c.g_y.sqrt();
    Ok(RealMat2 { a: sy, b: c.g_x / sy, c: 0.0, d: sy.recip() })
}
