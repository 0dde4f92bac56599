//! Reference transference on ℤ: the Cesàro (Fejér) symbol and the 1-D
//! tent-function (Jodeit) extension of a lattice multiplier to ℝ.

use std::f64::consts::PI;

use serde::Serialize;

/// A symbol on ℤ supported in `[-n, n]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteSymbol {
    n: usize,
    /// `values[i]` is the value at `k = i - n`.
    values: Vec<f64>,
}

impl DiscreteSymbol {
    /// Builds a symbol from `f(k)` for `|k| ≤ n`.
    pub fn from_fn(n: usize, f: impl Fn(i64) -> f64) -> Self {
        let n_i = n as i64;
        DiscreteSymbol { n, values: (-n_i..=n_i).map(f).collect() }
    }

    pub fn support_bound(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: i64) -> f64 {
        if k.unsigned_abs() > self.n as u64 {
            return 0.0;
        }
        self.values[(k + self.n as i64) as usize]
    }

    /// Overwrites `m(k)`; ignored outside the support.
    pub fn set(&mut self, k: i64, v: f64) {
        if k.unsigned_abs() <= self.n as u64 {
            self.values[(k + self.n as i64) as usize] = v;
        }
    }

    /// `(k, m(k))` over the support.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.n as i64;
        self.values.iter().enumerate().map(move |(i, v)| (i as i64 - n, *v))
    }

    /// `Σ_k m(k) e^{ikt}` as `(re, im)`.
    pub fn kernel(&self, t: f64) -> (f64, f64) {
        self.iter().fold((0.0, 0.0), |(re, im), (k, v)| {
            let (s, c) = (k as f64 * t).sin_cos();
            (re + v * c, im + v * s)
        })
    }
}

/// `Cₙ(k) = 1 - |k|/(n+1)` on `[-n, n]`.
pub fn cesaro_symbol(n: usize) -> DiscreteSymbol {
    let d = (n + 1) as f64;
    DiscreteSymbol::from_fn(n, |k| (d - k.unsigned_abs() as f64) / d)
}

fn tent(t: f64) -> f64 {
    (1.0 - t.abs()).max(0.0)
}

/// `Σ_k m(k) Λ(ξ - k)` with `Λ` the unit tent.
pub fn jodeit_extend_1d(m: &DiscreteSymbol, xi: f64) -> f64 {
    if !xi.is_finite() {
        return 0.0;
    }
    let k0 = xi.floor();
    let t = xi - k0;
    let k0 = k0 as i64;
    if t == 0.0 {
        return m.get(k0);
    }
    m.get(k0) * tent(t) + m.get(k0 + 1) * tent(1.0 - t)
}

/// Tolerance below zero allowed for the sampled kernel.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Fejér-kernel values on `grid` equally spaced points of `[0, 2π)`.
pub fn kernel_samples(m: &DiscreteSymbol, grid: usize) -> Vec<(f64, f64)> {
    (0..grid).map(|j| m.kernel(2.0 * PI * j as f64 / grid as f64)).collect()
}

/// Whether the sampled kernel of `m` is real and `≥ -1e-10`.
pub fn kernel_is_nonnegative(m: &DiscreteSymbol, grid: usize) -> bool {
    kernel_samples(m, grid)
        .iter()
        .all(|&(re, im)| re >= -POSITIVITY_TOL && im.abs() <= POSITIVITY_TOL.max(1e-12 * re.abs()))
}

/// Positive-definiteness witness for `Cₙ` on a `grid`-point sampling.
pub fn cesaro_positivity_check(n: usize, grid: usize) -> bool {
    kernel_is_nonnegative(&cesaro_symbol(n), grid)
}

/// `(1/grid) Σ_t kernel(t)`, which equals `m(0)` once `grid ≥ 2n + 1`.
pub fn kernel_mass(m: &DiscreteSymbol, grid: usize) -> f64 {
    kernel_samples(m, grid).iter().map(|p| p.0).sum::<f64>() / grid as f64
}
