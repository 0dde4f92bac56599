//! Reduction to the standard fundamental domain of SL₂(ℤ), the region
//! 𝓐 swept out by elements whose normal form starts with `S`, and the
//! Hilbert-transform symbol on the lattice.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sl2::{HalfPlanePoint, IntMat2};

/// Slack on the unit circle and on `Re z = ±1/2`.
pub const BOUNDARY_TOL: f64 = 1e-12;
pub const REDUCTION_STEP_CAP: usize = 100_000;
pub const WORD_LETTER_CAP: usize = 100_000;

const S_INV: IntMat2 = IntMat2::S_INV;
const R_INV: IntMat2 = IntMat2::R_INV;

/// `z = ρ_γ z₀` with `z₀` in the closed fundamental domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedPoint {
    pub gamma: IntMat2,
    pub z0: HalfPlanePoint,
}

pub fn in_fundamental_domain(z: HalfPlanePoint, tol: f64) -> bool {
    z.x.abs() <= 0.5 + tol && z.norm_sqr() >= 1.0 - tol
}

/// Classical reduction: translate into `[-1/2, 1/2)`, invert through the
/// unit circle, repeat. On the arc `|z| = 1` the representative with
/// `Re z ≤ 0` is returned, and `γ` is sign-canonicalized.
pub fn reduce_to_fundamental_domain(z: HalfPlanePoint) -> Result<ReducedPoint> {
    let z = HalfPlanePoint::new(z.x, z.y)?;
    let mut gamma = IntMat2::IDENTITY;
    let mut w = z;
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > REDUCTION_STEP_CAP {
            return Err(Error::IterationCap { what: "fundamental domain reduction", cap: REDUCTION_STEP_CAP });
        }
        let n = (w.x + 0.5).floor();
        if n != 0.0 {
            if n.abs() >= 9.0e18 {
                return Err(Error::Overflow("translation exponent"));
            }
            let n = n as i64;
            gamma = translate_right(&gamma, n)?;
            w.x -= n as f64;
            if w.x >= 0.5 {
                gamma = translate_right(&gamma, 1)?;
                w.x -= 1.0;
            }
        }
        let r2 = w.norm_sqr();
        if r2 < 1.0 - BOUNDARY_TOL {
            w = HalfPlanePoint { x: -w.x / r2, y: w.y / r2 };
            gamma = gamma.checked_mul(&S_INV)?;
            continue;
        }
        if r2 <= 1.0 + BOUNDARY_TOL && w.x > BOUNDARY_TOL {
            w = HalfPlanePoint { x: -w.x / r2, y: w.y / r2 };
            gamma = gamma.checked_mul(&S_INV)?;
        }
        break;
    }
    let gamma = gamma.canonical();
    // Recomputing from the exact γ keeps the residual at rounding level.
    let z0 = match gamma.inverse().act(z) {
        Ok(z0) if in_fundamental_domain(z0, BOUNDARY_TOL) => z0,
        _ => w,
    };
    Ok(ReducedPoint { gamma, z0 })
}

/// `γ·Tⁿ`.
fn translate_right(g: &IntMat2, n: i64) -> Result<IntMat2> {
    let [a, b, c, d] = g.entries();
    let mul_add = |p: i64, q: i64| -> Result<i64> {
        (p as i128 * n as i128 + q as i128).try_into().map_err(|_| Error::Overflow("translation"))
    };
    IntMat2::new(a, mul_add(a, b)?, c, mul_add(c, d)?)
}

/// Membership in `𝓐 = {Re z ≥ -1/2} ∩ {|z + 1| ≥ 1}`.
pub fn in_region_a(z: HalfPlanePoint) -> bool {
    let dx = z.x + 1.0;
    z.x >= -0.5 - BOUNDARY_TOL && dx * dx + z.y * z.y >= 1.0 - BOUNDARY_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FirstLetter {
    Identity,
    SPrefix,
    RPrefix,
}

/// Classifies `γ` by where it sends the interior probe `2i`: the tiles of
/// elements starting with `S` exactly fill 𝓐.
pub fn first_letter(gamma: &IntMat2) -> FirstLetter {
    if gamma.is_plus_minus_identity() {
        return FirstLetter::Identity;
    }
    let in_a = probe_in_region_a_exact(gamma).unwrap_or_else(|| {
        let w = gamma.act(HalfPlanePoint { x: 0.0, y: 2.0 }).expect("SL2(Z) acts on the half-plane");
        in_region_a(w)
    });
    if in_a {
        FirstLetter::SPrefix
    } else {
        FirstLetter::RPrefix
    }
}

// ρ_γ(2i) = (X + 2i)/D with X = bd + 4ac and D = d² + 4c², so both tests
// reduce to integer inequalities. `None` on i128 overflow.
fn probe_in_region_a_exact(gamma: &IntMat2) -> Option<bool> {
    let [a, b, c, d] = gamma.entries().map(i128::from);
    let x = b.checked_mul(d)?.checked_add(a.checked_mul(c)?.checked_mul(4)?)?;
    let den = d.checked_mul(d)?.checked_add(c.checked_mul(c)?.checked_mul(4)?)?;
    let strip = x.checked_mul(2)? >= -den;
    let disc = x.checked_mul(x)?.checked_add(x.checked_mul(den)?.checked_mul(2)?)?.checked_add(4)?;
    Some(strip && disc >= 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Letter {
    S,
    R,
    R2,
}

impl Letter {
    pub fn matrix(self) -> IntMat2 {
        match self {
            Letter::S => IntMat2::S,
            Letter::R => IntMat2::R,
            Letter::R2 => IntMat2::R2,
        }
    }
}

/// `γ = sign · w₁ w₂ ⋯ wₙ` with the word reduced in the free product
/// ℤ/2 ∗ ℤ/3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Word {
    pub sign: i8,
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn evaluate(&self) -> Result<IntMat2> {
        let mut acc = IntMat2::IDENTITY;
        for l in &self.letters {
            acc = acc.checked_mul(&l.matrix())?;
        }
        Ok(if self.sign < 0 { -acc } else { acc })
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }
}

/// Greedy normal form: peel the leading letter found by [`first_letter`]
/// until `±I` remains.
pub fn word_decompose(gamma: &IntMat2) -> Result<Word> {
    let mut rest = *gamma;
    let mut letters = Vec::new();
    while !rest.is_plus_minus_identity() {
        if letters.len() >= WORD_LETTER_CAP {
            return Err(Error::IterationCap { what: "word decomposition", cap: WORD_LETTER_CAP });
        }
        match first_letter(&rest) {
            FirstLetter::SPrefix => {
                rest = S_INV.checked_mul(&rest)?;
                letters.push(Letter::S);
            }
            FirstLetter::RPrefix => {
                rest = R_INV.checked_mul(&rest)?;
                if first_letter(&rest) == FirstLetter::RPrefix {
                    rest = R_INV.checked_mul(&rest)?;
                    letters.push(Letter::R2);
                } else {
                    letters.push(Letter::R);
                }
            }
            FirstLetter::Identity => unreachable!(),
        }
    }
    Ok(Word { sign: rest.a() as i8, letters })
}

/// 1 on `±I` and on words starting with `S`, 0 on words starting with `R`.
pub fn symbol_m_word(gamma: &IntMat2) -> f64 {
    match first_letter(gamma) {
        FirstLetter::Identity | FirstLetter::SPrefix => 1.0,
        FirstLetter::RPrefix => 0.0,
    }
}

/// `sgn(ac + bd)`.
pub fn symbol_m_sign(gamma: &IntMat2) -> i8 {
    let [a, b, c, d] = gamma.entries().map(i128::from);
    (a * c + b * d).signum() as i8
}

/// Every element expressible as a product of at most `max_len` letters from
/// `{S, R, R²}`, one representative per `±` pair, in discovery order.
pub fn enumerate_products(max_len: usize) -> Vec<IntMat2> {
    let letters = [IntMat2::S, IntMat2::R, IntMat2::R2];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![IntMat2::IDENTITY];
    seen.insert(IntMat2::IDENTITY);
    out.push(IntMat2::IDENTITY);
    for _ in 0..max_len {
        let mut next = Vec::new();
        for g in &frontier {
            for l in &letters {
                let h = *g * *l;
                if seen.insert(h.canonical()) {
                    out.push(h.canonical());
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Counts of `(word symbol, sign symbol)` pairs; rows are the word value
/// `0, 1` and columns the sign value `-1, 0, 1`.
pub fn sign_word_joint_table(elements: &[IntMat2]) -> [[usize; 3]; 2] {
    let mut table = [[0usize; 3]; 2];
    for g in elements {
        let w = symbol_m_word(g) as usize;
        let s = (symbol_m_sign(g) + 1) as usize;
        table[w][s] += 1;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let r = reduce_to_fundamental_domain(z(0.0, 2.0)).unwrap();
        assert_eq!(r.gamma, IntMat2::IDENTITY);
        assert_eq!(r.z0, z(0.0, 2.0));

        let r = reduce_to_fundamental_domain(z(5.0, 2.0)).unwrap();
        assert_eq!(r.gamma, IntMat2::T.pow(5).unwrap());
        assert!((r.z0.x).abs() < 1e-12 && (r.z0.y - 2.0).abs() < 1e-12);

        let r = reduce_to_fundamental_domain(z(0.0, 0.1)).unwrap();
        assert_eq!(r.gamma, IntMat2::S);
        assert!(r.z0.x.abs() < 1e-12 && (r.z0.y - 10.0).abs() < 1e-9);
    }

    #[test]
    fn reduce_boundary_ties() {
        let r = reduce_to_fundamental_domain(z(0.5, 3.0)).unwrap();
        assert_eq!(r.z0.x, -0.5);
        let r = reduce_to_fundamental_domain(z(0.3, 0.91f64.sqrt())).unwrap();
        assert!(r.z0.x <= 0.0, "{:?}", r.z0);
        assert!((r.z0.x + 0.3).abs() < 1e-12);
    }

    #[test]
    fn region_a_examples() {
        assert!(in_region_a(z(0.0, 2.0)));
        assert!(!in_region_a(z(-1.0, 0.5)));
        assert!(!in_region_a(z(-0.6, 3.0)));
    }

    #[test]
    fn first_letter_examples() {
        assert_eq!(first_letter(&IntMat2::IDENTITY), FirstLetter::Identity);
        assert_eq!(first_letter(&-IntMat2::IDENTITY), FirstLetter::Identity);
        assert_eq!(first_letter(&IntMat2::S), FirstLetter::SPrefix);
        assert_eq!(first_letter(&IntMat2::R), FirstLetter::RPrefix);
        assert_eq!(first_letter(&IntMat2::R2), FirstLetter::RPrefix);
    }

    #[test]
    fn word_examples() {
        let w = word_decompose(&IntMat2::T).unwrap();
        assert_eq!(w.letters, vec![Letter::S, Letter::R]);
        assert_eq!(w.evaluate().unwrap(), IntMat2::T);

        let w = word_decompose(&IntMat2::S).unwrap();
        assert_eq!(w, Word { sign: 1, letters: vec![Letter::S] });
        let w = word_decompose(&IntMat2::R2).unwrap();
        assert_eq!(w, Word { sign: 1, letters: vec![Letter::R2] });
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(symbol_m_word(&IntMat2::IDENTITY), 1.0);
        assert_eq!(symbol_m_word(&-IntMat2::IDENTITY), 1.0);
        assert_eq!(symbol_m_word(&IntMat2::R), 0.0);
        assert_eq!(symbol_m_word(&(IntMat2::S * IntMat2::R)), 1.0);

        assert_eq!(symbol_m_sign(&IntMat2::T), 1);
        assert_eq!(symbol_m_sign(&IntMat2::S), 0);
        assert_eq!(symbol_m_sign(&IntMat2::R), -1);
    }

    #[test]
    fn enumeration_is_large_and_sign_free() {
        let all = enumerate_products(12);
        assert_eq!(all.len(), 442);
        let set: HashSet<_> = all.iter().map(|g| g.canonical()).collect();
        assert_eq!(set.len(), all.len());
        let t = sign_word_joint_table(&all);
        assert_eq!(t.iter().flatten().sum::<usize>(), all.len());
    }
}
