//! Sampled boundary arcs of `A(gₓ, g_y) ∩ 𝓕`, for plotting.

use std::f64::consts::PI;

use serde::Serialize;

use crate::sl2::ANCoords;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    /// `circle`, `left`, `right`, `line` or `ellipse`, with a run index.
    pub curve_id: String,
    pub points: Vec<(f64, f64)>,
}

fn in_closed_f(x: f64, y: f64) -> bool {
    x.abs() <= 0.5 + TOL && x * x + y * y >= 1.0 - TOL && y > 0.0
}

fn in_closed_a(x: f64, y: f64, c: &ANCoords) -> bool {
    let u = x + c.g_x * y;
    let w = c.g_y * y;
    u >= -0.5 - TOL && (u + 1.0) * (u + 1.0) + w * w >= 1.0 - TOL
}

/// Each boundary curve sampled at `samples` parameter values, cut into runs
/// of consecutive points on the closure of the region and with `y ≤ y_max`.
pub fn region_polylines(c: &ANCoords, samples: usize, y_max: f64) -> Vec<Polyline> {
    let n = samples.max(2);
    let ys = y_max.max(1.0);
    let t = |i: usize| i as f64 / (n - 1) as f64;
    let y0 = 3f64.sqrt() / 2.0;
    type Curve<'a> = (&'static str, Box<dyn Fn(f64) -> (f64, f64) + 'a>);
    let curves: Vec<Curve> = vec![
        ("circle", Box::new(|s| ((PI / 3.0 * (1.0 + s)).cos(), (PI / 3.0 * (1.0 + s)).sin()))),
        ("left", Box::new(move |s| (-0.5, y0 + (ys - y0) * s))),
        ("right", Box::new(move |s| (0.5, y0 + (ys - y0) * s))),
        (
            "line",
            Box::new(|s| {
                let y = ys * s;
                (-0.5 - c.g_x * y, y)
            }),
        ),
        (
            "ellipse",
            Box::new(|s| {
                let phi = PI * s;
                let y = phi.sin() / c.g_y;
                (-1.0 + phi.cos() - c.g_x * y, y)
            }),
        ),
    ];
    let mut out = Vec::new();
    for (name, f) in curves {
        let mut run: Vec<(f64, f64)> = Vec::new();
        let mut k = 0;
        for i in 0..n {
            let (x, y) = f(t(i));
            if y <= ys && in_closed_f(x, y) && in_closed_a(x, y, c) {
                run.push((x, y));
            } else if !run.is_empty() {
                out.push(Polyline { curve_id: format!("{name}-{k}"), points: std::mem::take(&mut run) });
                k += 1;
            }
        }
        if !run.is_empty() {
            out.push(Polyline { curve_id: format!("{name}-{k}"), points: run });
        }
    }
    out.retain(|p| p.points.len() >= 2);
    out
}
