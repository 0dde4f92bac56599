use std::fmt::Write;

use hypertransfer_core::cocycle::transferred_symbol_mc;
use hypertransfer_core::decay::{hm_table, loglog_slope, DecayRow};
use hypertransfer_core::modular::{reduce_to_fundamental_domain, symbol_m_word};
use hypertransfer_core::quadrature::QuadratureConfig;
use hypertransfer_core::sl2::cartan_a;
use hypertransfer_core::symbol::{
    classify_case, m_tilde_r, region_polylines, MHatRoute, Polyline, DEFAULT_HYBRID_MARGIN,
};
use hypertransfer_core::verify::{run_verify, Mutation, Suite};
use hypertransfer_core::{ANCoords, HalfPlanePoint};
use serde::Serialize;

use crate::{usage, Failure, Format, SymbolMode};

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn reduce(x: f64, y: f64, fmt: Format) -> Result<String, Failure> {
    let red = reduce_to_fundamental_domain(HalfPlanePoint { x, y })?;
    if fmt == Format::Json {
        return json(&red);
    }
    let [a, b, c, d] = red.gamma.entries();
    Ok(format!("a,b,c,d,x0,y0\n{a},{b},{c},{d},{},{}\n", num(red.z0.x), num(red.z0.y)))
}

#[derive(Serialize)]
struct SymbolOut {
    r: f64,
    mode: &'static str,
    value: f64,
    error: f64,
    n: Option<u64>,
    seed: Option<u64>,
}

pub fn symbol(
    r: f64,
    mode: SymbolMode,
    n: usize,
    seed: u64,
    q: &QuadratureConfig,
    fmt: Format,
) -> Result<String, Failure> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(usage(format!("r = {r} must be positive")));
    }
    let out = match mode {
        SymbolMode::Case | SymbolMode::Direct => {
            let route = if mode == SymbolMode::Case { MHatRoute::Cases } else { MHatRoute::Direct };
            let e = m_tilde_r(r, q, route)?;
            let name = if mode == SymbolMode::Case { "case" } else { "direct" };
            SymbolOut { r, mode: name, value: e.value, error: e.error, n: None, seed: None }
        }
        SymbolMode::Mc => {
            let e = transferred_symbol_mc(symbol_m_word, &cartan_a(r)?, n, seed)?;
            SymbolOut { r, mode: "mc", value: e.estimate, error: e.std_error, n: Some(e.n), seed: Some(seed) }
        }
    };
    if fmt == Format::Json {
        return json(&out);
    }
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    Ok(format!(
        "r,mode,value,error,n,seed\n{},{},{},{},{},{}\n",
        num(out.r),
        out.mode,
        num(out.value),
        num(out.error),
        opt(out.n),
        opt(out.seed)
    ))
}

#[derive(Serialize)]
struct RegionOut {
    case: &'static str,
    g_x: f64,
    g_y: f64,
    polylines: Vec<Polyline>,
}

pub fn region(gx: f64, gy: f64, samples: usize, y_max: f64, fmt: Format) -> Result<String, Failure> {
    let c = ANCoords::new(gx, gy)?;
    if samples < 2 || !(y_max > 1.0) {
        return Err(usage("need --samples ≥ 2 and --y-max > 1"));
    }
    let case = classify_case(&c, DEFAULT_HYBRID_MARGIN).name();
    let polylines = region_polylines(&c, samples, y_max);
    if fmt == Format::Json {
        return json(&RegionOut { case, g_x: gx, g_y: gy, polylines });
    }
    let mut s = format!("# case={case}\ncurve_id,x,y\n");
    for p in &polylines {
        for &(x, y) in &p.points {
            let _ = writeln!(s, "{},{},{}", p.curve_id, num(x), num(y));
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct DecayOut {
    rows: Vec<DecayRow>,
    max_weighted: f64,
    slope: Option<f64>,
}

pub fn decay(rmin: f64, rmax: f64, steps: usize, q: &QuadratureConfig, fmt: Format) -> Result<String, Failure> {
    let single = steps == 1 && rmin == rmax;
    if steps == 0 || !(rmin > 0.0) || !(rmax < 1.0) || !(rmin < rmax || single) || (steps == 1 && !single) {
        return Err(usage(format!(
            "need 0 < rmin < rmax < 1 and steps ≥ 2, or steps = 1 with rmin = rmax (got {rmin}, {rmax}, {steps})"
        )));
    }
    let grid: Vec<f64> = if single {
        vec![rmin]
    } else {
        (0..steps).map(|i| rmin + (rmax - rmin) * i as f64 / (steps - 1) as f64).collect()
    };
    let rows = hm_table(&grid, q)?;
    let max_weighted = rows.iter().map(|r| r.weighted).fold(0.0, f64::max);
    let rs: Vec<f64> = rows.iter().map(|r| r.r).collect();
    let ws: Vec<f64> = rows.iter().map(|r| r.weighted).collect();
    let slope = loglog_slope(&rs, &ws);
    if fmt == Format::Json {
        return json(&DecayOut { rows, max_weighted, slope });
    }
    let mut s = String::from("r,f1,f2,weighted\n");
    for r in &rows {
        let _ = writeln!(s, "{},{},{},{}", num(r.r), num(r.f1), num(r.f2), num(r.weighted));
    }
    let _ = writeln!(s, "# max_weighted={}", num(max_weighted));
    let _ = writeln!(s, "# slope={}", slope.map(num).unwrap_or_else(|| "nan".into()));
    Ok(s)
}

pub fn verify(suite: Suite, seed: u64, mutation: Mutation, fmt: Format) -> Result<(String, bool), Failure> {
    let report = run_verify(suite, seed, mutation)?;
    let text = if fmt == Format::Json {
        json(&report)?
    } else {
        let mut s = String::from("suite,name,passed,detail\n");
        for c in &report.checks {
            let suite = serde_json::to_value(c.suite).map_err(|e| usage(e.to_string()))?;
            let _ = writeln!(s, "{},{},{},{}", suite.as_str().unwrap_or(""), c.name, c.passed, csv_field(&c.detail));
        }
        s
    };
    Ok((text, report.passed))
}
