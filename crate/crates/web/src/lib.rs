//! wasm-bindgen exports for the static demo page in `www/`.
//!
//! Structured results cross the boundary as JSON strings.

use hypertransfer_core::modular::{first_letter, reduce_to_fundamental_domain, FirstLetter};
use hypertransfer_core::quadrature::QuadratureConfig;
use hypertransfer_core::symbol::{
    classify_case, m_hat, m_tilde_r, region_polylines, MHatRoute, Polyline, DEFAULT_HYBRID_MARGIN,
};
use hypertransfer_core::{ANCoords, HalfPlanePoint};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn demo_config() -> QuadratureConfig {
    QuadratureConfig::new(1e-7, 1e-6, 2000).expect("valid constants")
}

#[derive(Serialize)]
struct RegionView {
    case: &'static str,
    m_hat: f64,
    error: f64,
    polylines: Vec<Polyline>,
}

fn region_view(gx: f64, gy: f64, samples: usize) -> hypertransfer_core::Result<String> {
    let c = ANCoords::new(gx, gy)?;
    let m = m_hat(&c, &demo_config())?;
    let view = RegionView {
        case: classify_case(&c, DEFAULT_HYBRID_MARGIN).name(),
        m_hat: m.value,
        error: m.error,
        polylines: region_polylines(&c, samples, 3.0),
    };
    Ok(serde_json::to_string(&view).expect("plain data serializes"))
}

/// Boundary arcs of `A(gx, gy) ∩ 𝓕`, the case tag and `m̂(gx, gy)`.
#[wasm_bindgen]
pub fn region(gx: f64, gy: f64, samples: usize) -> Result<String, JsError> {
    region_view(gx, gy, samples).map_err(js_err)
}

#[derive(Serialize)]
struct ReduceView {
    gamma: [i64; 4],
    x0: f64,
    y0: f64,
    first_letter: &'static str,
}

fn reduce_view(x: f64, y: f64) -> hypertransfer_core::Result<String> {
    let red = reduce_to_fundamental_domain(HalfPlanePoint::new(x, y)?)?;
    let letter = match first_letter(&red.gamma) {
        FirstLetter::Identity => "I",
        FirstLetter::SPrefix => "S",
        FirstLetter::RPrefix => "R",
    };
    let view = ReduceView { gamma: red.gamma.entries(), x0: red.z0.x, y0: red.z0.y, first_letter: letter };
    Ok(serde_json::to_string(&view).expect("plain data serializes"))
}

/// Reduction of `x + iy`: `γ`, `z₀` and the first letter of `γ`.
#[wasm_bindgen]
pub fn reduce_point(x: f64, y: f64) -> Result<String, JsError> {
    reduce_view(x, y).map_err(js_err)
}

fn curve(rmin: f64, rmax: f64, steps: usize) -> hypertransfer_core::Result<Vec<f64>> {
    if !(rmin > 0.0 && rmax >= rmin) || steps < 2 {
        return Err(hypertransfer_core::Error::InvalidInput("need 0 < rmin ≤ rmax and steps ≥ 2".into()));
    }
    let q = demo_config();
    let mut out = Vec::with_capacity(2 * steps);
    for i in 0..steps {
        let r = rmin + (rmax - rmin) * i as f64 / (steps - 1) as f64;
        out.push(r);
        out.push(m_tilde_r(r, &q, MHatRoute::Cases)?.value);
    }
    Ok(out)
}

/// Interleaved `[r₀, m̃(r₀), r₁, m̃(r₁), …]` on an even grid.
#[wasm_bindgen]
pub fn m_tilde_curve(rmin: f64, rmax: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    curve(rmin, rmax, steps).map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_json_has_case_and_arcs() {
        let s = region_view(10.0, 0.3, 50).unwrap();
        assert!(s.contains("\"case\":\"CASE1\"") && s.contains("circle-0"));
        assert!(region_view(0.0, -1.0, 50).is_err());
    }

    #[test]
    fn reduce_json() {
        let s = reduce_view(5.0, 2.0).unwrap();
        assert!(s.starts_with("{\"gamma\":[1,5,0,1],\"x0\":0.0,\"y0\":2.0"), "{s}");
    }

    #[test]
    fn curve_is_interleaved() {
        let v = curve(0.2, 1.0, 3).unwrap();
        assert_eq!(v.len(), 6);
        assert!((v[1] - 0.5010978571).abs() < 1e-6);
        assert_eq!(v[5], 1.0);
    }
}
