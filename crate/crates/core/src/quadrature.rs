//! Globally adaptive Gauss–Kronrod (10/21) quadrature, plus an exponential
//! endpoint substitution for logarithmic endpoint singularities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-8, rel_tol: 1e-7, max_subdivisions: 2000 }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let c = QuadratureConfig { abs_tol, rel_tol, max_subdivisions };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::invalid(format!("bad quadrature tolerances {self:?}")));
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        QuadratureConfig { abs_tol: self.abs_tol * factor, rel_tol: self.rel_tol * factor, ..*self }
    }
}

/// Value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Estimate { value, error }
    }

    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: self.error + o.error }
    }
}

impl std::ops::Sub for Estimate {
    type Output = Estimate;
    fn sub(self, o: Estimate) -> Estimate {
        Estimate { value: self.value - o.value, error: self.error + o.error }
    }
}

impl std::ops::Mul<f64> for Estimate {
    type Output = Estimate;
    fn mul(self, s: f64) -> Estimate {
        Estimate { value: self.value * s, error: self.error * s.abs() }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525468197,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One 21-point Kronrod panel with the QUADPACK error scaling.
pub fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_k = kron.abs();
    let mut fv = [0.0; 21];
    fv[10] = fc;
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[j] = f1;
        fv[20 - j] = f2;
        kron += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = kron * 0.5;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv[j] - mean).abs() + (fv[20 - j] - mean).abs());
    }
    let hk = h.abs();
    let asc = asc * hk;
    let mut err = ((kron - gauss) * h).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let abs_k = abs_k * hk;
    if abs_k > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_k);
    }
    Estimate { value: kron * h, error: err }
}

struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.est.error.total_cmp(&o.est.error).then(o.a.total_cmp(&self.a))
    }
}

/// `∫_a^b f` over the panels delimited by `breaks` (points outside `(a, b)`
/// are ignored). Fails with [`Error::Accuracy`] when the subdivision budget
/// runs out before the tolerance is met.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let est = integrate_best_effort(&mut f, a, b, breaks, cfg);
    let target = cfg.abs_tol.max(cfg.rel_tol * est.value.abs());
    if est.error > target || !est.value.is_finite() {
        return Err(Error::Accuracy { achieved: est.error, requested: target });
    }
    Ok(est)
}

pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    integrate_with_breaks(f, a, b, &[], cfg)
}

/// Like [`integrate_with_breaks`] but returns whatever estimate is reached.
pub fn integrate_best_effort<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Estimate {
    if a == b {
        return Estimate::exact(0.0);
    }
    if a > b {
        let e = integrate_best_effort(f, b, a, breaks, cfg);
        return Estimate::new(-e.value, e.error);
    }
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&p| p > a && p < b && p.is_finite()).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let mut heap = BinaryHeap::new();
    let mut done = Vec::new();
    let (mut total, mut total_err) = (0.0, 0.0);
    for w in pts.windows(2) {
        let est = gk21(f, w[0], w[1]);
        total += est.value;
        total_err += est.error;
        heap.push(Panel { a: w[0], b: w[1], est });
    }
    let mut splits = 0;
    while total_err > cfg.abs_tol.max(cfg.rel_tol * total.abs()) && splits < cfg.max_subdivisions {
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) || (p.b - p.a) < 4.0 * f64::EPSILON * p.a.abs().max(p.b.abs()) {
            done.push(p);
            continue;
        }
        let l = gk21(f, p.a, m);
        let r = gk21(f, m, p.b);
        total += l.value + r.value - p.est.value;
        total_err += l.error + r.error - p.est.error;
        heap.push(Panel { a: p.a, b: m, est: l });
        heap.push(Panel { a: m, b: p.b, est: r });
        splits += 1;
    }
    // Resum in a fixed order so the result does not depend on heap layout.
    done.extend(heap);
    done.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = KahanSum::default();
    let mut error = 0.0;
    for p in &done {
        value.add(p.est.value);
        error += p.est.error;
    }
    Estimate { value: value.sum(), error }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        // Neumaier's variant.
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Which end(s) of an interval carry a log-type singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singular {
    Left,
    Right,
    Both,
}

/// Smallest distance to a singular endpoint that is sampled.
pub const ENDPOINT_CUTOFF: f64 = 1e-13;

/// `∫_a^b f` with `t = a + h e^{-u}` (or `b - h e^{-u}`) at singular ends,
/// truncated at distance [`ENDPOINT_CUTOFF`].
pub fn integrate_log_endpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    sing: Singular,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    log_endpoints(&mut f, a, b, sing, cfg)
}

fn log_endpoints(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    sing: Singular,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if a >= b {
        return Ok(Estimate::exact(0.0));
    }
    match sing {
        Singular::Both => {
            let m = 0.5 * (a + b);
            let l = log_endpoints(f, a, m, Singular::Left, cfg)?;
            let r = log_endpoints(f, m, b, Singular::Right, cfg)?;
            Ok(l + r)
        }
        Singular::Left | Singular::Right => {
            let h = b - a;
            if h <= ENDPOINT_CUTOFF {
                return integrate(&mut *f, a, b, cfg);
            }
            let u_max = (h / ENDPOINT_CUTOFF).ln();
            let left = sing == Singular::Left;
            let g = |u: f64| {
                let s = h * (-u).exp();
                let t = if left { a + s } else { b - s };
                f(t) * s
            };
            // Unit-width starting panels resolve the decay before adaptivity.
            let breaks: Vec<f64> = (1..u_max.ceil() as usize).map(|k| k as f64).collect();
            integrate_with_breaks(g, 0.0, u_max, &breaks, cfg)
        }
    }
}
