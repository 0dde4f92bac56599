//! The lattice fundamental domain `(π|_AN)⁻¹(𝓕)·K₊` in SL₂(ℝ), the right
//! cocycle `β` into SL₂(ℤ) and Monte-Carlo transference of lattice symbols.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::{in_fundamental_domain, reduce_to_fundamental_domain, BOUNDARY_TOL};
use crate::sl2::{an_coords, an_matrix, ANCoords, HalfPlanePoint, IntMat2, RealMat2};

/// Angles this close below `π` still count as `K₊`.
pub const K_PLUS_EDGE: f64 = 1e-12;

/// Samples per RNG stream. Fixed so results do not depend on thread count.
pub const SHARD_LEN: usize = 1 << 14;

/// `s₀k₀` with `π(s₀) ∈ 𝓕` and `k₀` a rotation by `θ ∈ [0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainPoint {
    pub s0: RealMat2,
    pub k0_angle: f64,
}

impl DomainPoint {
    pub fn new(z: HalfPlanePoint, theta: f64) -> Result<Self> {
        if !in_fundamental_domain(z, BOUNDARY_TOL) {
            return Err(Error::invalid(format!("{z:?} is outside the fundamental domain")));
        }
        if !(0.0..PI).contains(&theta) {
            return Err(Error::invalid(format!("angle {theta} is outside [0, π)")));
        }
        let s0 = an_matrix(ANCoords { g_x: z.x, g_y: z.y })?;
        Ok(DomainPoint { s0, k0_angle: theta })
    }

    pub fn z(&self) -> HalfPlanePoint {
        let c = an_coords(&self.s0).expect("domain points carry AN matrices");
        HalfPlanePoint { x: c.g_x, y: c.g_y }
    }

    pub fn matrix(&self) -> RealMat2 {
        self.s0 * RealMat2::rotation(self.k0_angle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CocycleResult {
    pub beta: IntMat2,
    /// `β⁻¹·s₀k₀·g`, again a domain point.
    pub moved: DomainPoint,
}

/// The unique `β ∈ SL₂(ℤ)` with `β⁻¹·s₀k₀·g` back in the domain.
pub fn cocycle_beta(p: &DomainPoint, g: &RealMat2) -> Result<CocycleResult> {
    let h = p.matrix() * *g;
    let red = reduce_to_fundamental_domain(h.project()?)?;
    let m = RealMat2::from(red.gamma.inverse()) * h;
    let phi = m.iwasawa().theta;
    let (beta, theta) = if phi < PI {
        (red.gamma, phi)
    } else {
        let t = phi - PI;
        // φ within the K₊ edge of 2π lands just below π after the shift.
        (-red.gamma, if t >= PI { PI - K_PLUS_EDGE } else { t })
    };
    let s0 = an_matrix(ANCoords { g_x: red.z0.x, g_y: red.z0.y })?;
    Ok(CocycleResult { beta, moved: DomainPoint { s0, k0_angle: theta } })
}

/// One draw from `dx dy / y²` on 𝓕 and `dθ` on `[0, π)`, by exact inverse
/// CDFs: the `x` marginal is `∝ 1/√(1-x²)`, and `y | x` is Pareto above the
/// unit circle.
pub fn sample_point<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
    let (x, y) = sample_f_point(rng);
    let theta = PI * rng.random::<f64>();
    (x, y, theta)
}

pub fn sample_f_point<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let x = (u * FRAC_PI_3 - FRAC_PI_6).sin();
    let y = (1.0 - x * x).sqrt() / (1.0 - v);
    (x, y)
}

/// Analytic CDF of the `x` marginal, for goodness-of-fit checks.
pub fn x_marginal_cdf(x: f64) -> f64 {
    ((x.clamp(-0.5, 0.5).asin() + FRAC_PI_6) / FRAC_PI_3).clamp(0.0, 1.0)
}

pub(crate) fn shard_rng(seed: u64, shard: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}

fn shard_sizes(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n.div_ceil(SHARD_LEN)).map(move |i| (i, SHARD_LEN.min(n - i * SHARD_LEN)))
}

pub fn sample_domain(seed: u64, n: usize) -> Result<Vec<DomainPoint>> {
    if n == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    let mut out = Vec::with_capacity(n);
    for (shard, len) in shard_sizes(n) {
        let mut rng = shard_rng(seed, shard);
        for _ in 0..len {
            let (x, y, theta) = sample_point(&mut rng);
            let s0 = an_matrix(ANCoords { g_x: x, g_y: y })?;
            out.push(DomainPoint { s0, k0_angle: theta });
        }
    }
    Ok(out)
}

/// Streaming mean/variance; shards merge pairwise.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, o: Welford) -> Welford {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let mean = self.mean + d * (o.n as f64 / n as f64);
        let m2 = self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64 / n as f64);
        Welford { n, mean, m2 }
    }

    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n: u64,
}

impl From<Welford> for McEstimate {
    fn from(w: Welford) -> Self {
        McEstimate { estimate: w.mean, std_error: w.std_error(), n: w.n }
    }
}

/// Runs `per_shard` on every shard (in parallel when enabled) and merges the
/// accumulators in shard order.
pub(crate) fn run_shards<F>(n: usize, per_shard: F) -> Result<Welford>
where
    F: Fn(usize, usize) -> Result<Welford> + Sync + Send,
{
    if n == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    let shards: Vec<(usize, usize)> = shard_sizes(n).collect();
    #[cfg(feature = "parallel")]
    let parts: Vec<Result<Welford>> = shards.par_iter().map(|&(i, len)| per_shard(i, len)).collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Result<Welford>> = shards.iter().map(|&(i, len)| per_shard(i, len)).collect();
    let mut acc = Welford::default();
    for p in parts {
        acc = acc.merge(p?);
    }
    Ok(acc)
}

/// `m̃(g) = (1/μ(X)) ∫_X m(β(x, g)) dμ(x)` estimated from `n` domain samples.
pub fn transferred_symbol_mc<M>(symbol: M, g: &RealMat2, n: usize, seed: u64) -> Result<McEstimate>
where
    M: Fn(&IntMat2) -> f64 + Sync,
{
    let w = run_shards(n, |shard, len| {
        let mut rng = shard_rng(seed, shard);
        let mut acc = Welford::default();
        for _ in 0..len {
            let (x, y, theta) = sample_point(&mut rng);
            let s0 = an_matrix(ANCoords { g_x: x, g_y: y })?;
            let p = DomainPoint { s0, k0_angle: theta };
            acc.push(symbol(&cocycle_beta(&p, g)?.beta));
        }
        Ok(acc)
    })?;
    Ok(w.into())
}

/// Hit-or-miss estimate of `μ((π|_AN)⁻¹(𝓕)) = ∬_𝓕 dx dy / y² = π/3`.
///
/// Proposal: `x` uniform on `[-1/2, 1/2]`, `y` with density `(√3/2)/y²` on
/// `[√3/2, ∞)`, so every hit carries weight `2/√3`. This does not use the
/// domain sampler and checks it independently.
pub fn domain_measure_mc(seed: u64, n: usize) -> Result<McEstimate> {
    let y_min = 3f64.sqrt() / 2.0;
    let w = run_shards(n, |shard, len| {
        let mut rng = shard_rng(seed ^ 0x006d_6561_7375_7265, shard);
        let mut acc = Welford::default();
        for _ in 0..len {
            let x = rng.random::<f64>() - 0.5;
            let y = y_min / (1.0 - rng.random::<f64>());
            acc.push(if x * x + y * y >= 1.0 { 1.0 / y_min } else { 0.0 });
        }
        Ok(acc)
    })?;
    Ok(w.into())
}
