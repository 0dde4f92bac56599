//! `m̂ = (3/π)∬_{A∩𝓕} dx dy / y²` straight from the membership description of
//! `A`, for every `(gₓ, g_y)`.
//!
//! For fixed `x` the set of admissible `y` is a union of at most two
//! intervals with endpoints on the unit circle, the line and the ellipse,
//! so the `y`-integral of `1/y²` is exact. The remaining `x`-integral is
//! adaptive, with breakpoints at every place the slice structure changes.

use std::f64::consts::PI;

use serde::Serialize;

use crate::cocycle::{run_shards, sample_f_point, shard_rng, Welford};
use crate::error::Result;
use crate::quadrature::{integrate_with_breaks, Estimate, QuadratureConfig};
use crate::roots::roots_in;
use crate::sl2::ANCoords;

use super::geometry::ellipse_discriminant;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DirectMode {
    Adaptive2d,
    MonteCarlo { n: usize, seed: u64 },
}

/// Whether `(x, y)` lies in `A(gₓ, g_y)`.
pub fn in_region(x: f64, y: f64, c: &ANCoords) -> bool {
    let u = x + c.g_x * y;
    let w = c.g_y * y;
    u > -0.5 && (u + 1.0) * (u + 1.0) + w * w > 1.0
}

/// `∫ dy/y²` over `{y : (x, y) ∈ A ∩ 𝓕}`.
pub fn slice_measure(x: f64, c: &ANCoords) -> f64 {
    let (gx, gy) = (c.g_x, c.g_y);
    let y_lo = (1.0 - x * x).sqrt();
    // The line only bounds y from above, and only when it tilts left.
    let y_hi = if gx < 0.0 {
        (x + 0.5) / -gx
    } else if gx == 0.0 && x <= -0.5 {
        return 0.0;
    } else {
        f64::INFINITY
    };
    if y_hi <= y_lo {
        return 0.0;
    }
    let inv = |y: f64| if y.is_infinite() { 0.0 } else { 1.0 / y };
    let d = ellipse_discriminant(x, c);
    if d <= 0.0 {
        return 1.0 / y_lo - inv(y_hi);
    }
    let sd = d.sqrt();
    let n = gx * gx + gy * gy;
    let p = (x + 1.0) * gx;
    // Ellipse roots, each from its cancellation-free form.
    let (e_lo, e_hi) = if p >= 0.0 {
        let e_lo = -(p + sd) / n;
        (e_lo, x * (x + 2.0) / (n * e_lo))
    } else {
        let e_hi = (sd - p) / n;
        (x * (x + 2.0) / (n * e_hi), e_hi)
    };
    let mut total = 0.0;
    let below = e_lo.min(y_hi);
    if below > y_lo {
        total += 1.0 / y_lo - inv(below);
    }
    let above = e_hi.max(y_lo);
    if y_hi > above {
        total += 1.0 / above - inv(y_hi);
    }
    total
}

/// Points of `[-1/2, 1/2]` where the slice structure changes.
pub fn slice_breakpoints(c: &ANCoords) -> Vec<f64> {
    let (gx, gy) = (c.g_x, c.g_y);
    let mut pts = vec![0.0];
    // Ellipse vertical tangent.
    let t = (1.0 + gx * gx / (gy * gy)).sqrt() - 1.0;
    pts.push(t);
    // Line meets the ellipse at height √3/(2g_y).
    pts.push(-0.5 - gx * 3f64.sqrt() / (2.0 * gy));
    let scan = 128;
    if gx < 0.0 {
        pts.extend(roots_in(|x| x + gx * (1.0 - x * x).sqrt() + 0.5, -0.5, 0.5, scan, 1e-15));
    }
    // Ellipse against the unit circle.
    pts.extend(roots_in(
        |x| {
            let y = (1.0 - x * x).sqrt();
            let u = x + gx * y + 1.0;
            u * u + gy * gy * y * y - 1.0
        },
        -0.5,
        0.5,
        scan,
        1e-15,
    ));
    pts.retain(|p| p.is_finite() && *p > -0.5 && *p < 0.5);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

pub fn m_hat_direct(c: &ANCoords, q: &QuadratureConfig, mode: DirectMode) -> Result<Estimate> {
    let c = ANCoords::new(c.g_x, c.g_y)?;
    match mode {
        DirectMode::Adaptive2d => {
            let breaks = slice_breakpoints(&c);
            let e = integrate_with_breaks(|x| slice_measure(x, &c), -0.5, 0.5, &breaks, q)?;
            Ok(e * (3.0 / PI))
        }
        DirectMode::MonteCarlo { n, seed } => {
            // Under the normalized measure on 𝓕, m̂ is just P((x, y) ∈ A).
            let w = run_shards(n, |shard, len| {
                let mut rng = shard_rng(seed, shard);
                let mut acc = Welford::default();
                for _ in 0..len {
                    let (x, y) = sample_f_point(&mut rng);
                    acc.push(if in_region(x, y, &c) { 1.0 } else { 0.0 });
                }
                Ok(acc)
            })?;
            Ok(Estimate::new(w.mean, w.std_error()))
        }
    }
}
