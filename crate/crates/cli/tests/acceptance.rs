//! The fourteen acceptance criteria, one line each.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hypertransfer_core::cocycle::{cocycle_beta, domain_measure_mc, sample_domain, transferred_symbol_mc};
use hypertransfer_core::decay::{hm_table, second_order_divergence_probe};
use hypertransfer_core::modular::{
    enumerate_products, first_letter, in_fundamental_domain, reduce_to_fundamental_domain, symbol_m_word,
    word_decompose, FirstLetter, Letter,
};
use hypertransfer_core::quadrature::QuadratureConfig;
use hypertransfer_core::sl2::cartan_a;
use hypertransfer_core::symbol::{
    m_hat_case, m_hat_direct, m_hat_partials, m_tilde, m_tilde_k_average, m_tilde_r, theta_boundaries, CaseRegime,
    DirectMode, MHatRoute,
};
use hypertransfer_core::transfer::{cesaro_positivity_check, cesaro_symbol, jodeit_extend_1d};
use hypertransfer_core::verify::{case_grid, d_gx_bound, random_sl2, GRID_CASES};
use hypertransfer_core::{HalfPlanePoint, RealMat2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn c1_cocycle() -> Outcome {
    let n = 1000;
    let points = sample_domain(101, n).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut bad = 0;
    for p in &points {
        let g1 = random_sl2(&mut rng, 10.0);
        let g2 = random_sl2(&mut rng, 10.0);
        let whole = cocycle_beta(p, &(g1 * g2)).map_err(|e| e.to_string())?.beta;
        let first = cocycle_beta(p, &g1).map_err(|e| e.to_string())?;
        let second = cocycle_beta(&first.moved, &g2).map_err(|e| e.to_string())?.beta;
        if first.beta.checked_mul(&second).map_err(|e| e.to_string())? != whole {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{bad}/{n} triples violate the identity")))
}

fn c2_tiling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst: f64 = 0.0;
    let mut outside = 0;
    for _ in 0..10_000 {
        let z = HalfPlanePoint::new(rng.random_range(-20.0..20.0), rng.random_range(-3.0f64..3.0).exp())
            .map_err(|e| e.to_string())?;
        let red = reduce_to_fundamental_domain(z).map_err(|e| e.to_string())?;
        let back = red.gamma.act(red.z0).map_err(|e| e.to_string())?;
        worst = worst.max((back.x - z.x).hypot(back.y - z.y));
        outside += usize::from(!in_fundamental_domain(red.z0, 1e-12));
    }
    Ok((worst <= 1e-9 && outside == 0, format!("max residual {worst:.2e}, {outside} outside")))
}

fn c3_first_letter() -> Outcome {
    let elems = enumerate_products(12);
    let mut disagree = 0;
    for g in &elems {
        let w = word_decompose(g).map_err(|e| e.to_string())?;
        let algebraic = match w.first() {
            None => FirstLetter::Identity,
            Some(Letter::S) => FirstLetter::SPrefix,
            Some(_) => FirstLetter::RPrefix,
        };
        disagree += usize::from(algebraic != first_letter(g));
    }
    Ok((disagree == 0, format!("{disagree} of {} elements disagree", elems.len())))
}

fn c4_measure() -> Outcome {
    let m = domain_measure_mc(104, 1_000_000).map_err(|e| e.to_string())?;
    let z = (m.estimate - PI / 3.0) / m.std_error;
    Ok((z.abs() <= 3.0, format!("{:.6} ± {:.1e} (z = {z:.2})", m.estimate, m.std_error)))
}

fn c5_cases() -> Outcome {
    let q = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    for case in GRID_CASES {
        for k in case_grid(case) {
            let a = m_hat_case(&k, &q).map_err(|e| e.to_string())?;
            match case {
                CaseRegime::Case1 => bad += usize::from(a.value != 1.0),
                CaseRegime::Case7 => bad += usize::from(a.value != 0.0),
                _ => {
                    let d = m_hat_direct(&k, &q, DirectMode::Adaptive2d).map_err(|e| e.to_string())?;
                    let diff = (a.value - d.value).abs();
                    worst = worst.max(diff);
                    bad += usize::from(diff > (3.0 * (a.error + d.error)).max(1e-5));
                }
            }
        }
    }
    Ok((bad == 0, format!("{bad} failures, max |case - direct| {worst:.2e}")))
}

fn c6_triple_oracle() -> Outcome {
    let q = QuadratureConfig::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for r in [0.1, 0.2, 0.5] {
        let a = m_tilde_r(r, &q, MHatRoute::Cases).map_err(|e| e.to_string())?;
        let d = m_tilde_r(r, &q, MHatRoute::Direct).map_err(|e| e.to_string())?;
        let g = cartan_a(r).map_err(|e| e.to_string())?;
        let m = transferred_symbol_mc(symbol_m_word, &g, 1_000_000, 106).map_err(|e| e.to_string())?;
        let vals = [(a.value, a.error), (d.value, d.error), (m.estimate, m.std_error)];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                let (x, ex) = vals[i];
                let (y, ey) = vals[j];
                let ratio = (x - y).abs() / (3.0 * ex.hypot(ey));
                worst = worst.max(ratio);
            }
        }
        ok &= worst <= 1.0;
        detail.push(format!("r={r}: {:.6} / {:.6} / {:.6}", a.value, d.value, m.estimate));
    }
    Ok((ok, detail.join("; ")))
}

fn c7_bi_k() -> Outcome {
    let q = QuadratureConfig::default();
    let a = cartan_a(0.2).map_err(|e| e.to_string())?;
    let base = m_tilde(&a, &q).map_err(|e| e.to_string())?.value;
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let k = RealMat2::rotation(rng.random_range(0.0..2.0 * PI));
        let k2 = RealMat2::rotation(rng.random_range(0.0..2.0 * PI));
        let v = m_tilde_k_average(&(k * a * k2), &q).map_err(|e| e.to_string())?.value;
        worst = worst.max((v - base).abs());
    }
    Ok((worst <= 1e-4, format!("max deviation {worst:.2e}")))
}

fn c8_identity() -> Outcome {
    let q = QuadratureConfig::default();
    let mc = transferred_symbol_mc(symbol_m_word, &RealMat2::IDENTITY, 100_000, 108).map_err(|e| e.to_string())?;
    let an = m_tilde_k_average(&RealMat2::IDENTITY, &q).map_err(|e| e.to_string())?.value;
    let ok = mc.estimate == 1.0 && mc.std_error == 0.0 && (an - 1.0).abs() <= 1e-6;
    Ok((ok, format!("mc {} ± {}, analytic {an:.12}", mc.estimate, mc.std_error)))
}

fn c9_derivatives() -> Outcome {
    let q = QuadratureConfig::default();
    let mut bad = Vec::new();
    for case in GRID_CASES {
        if matches!(case, CaseRegime::Case1 | CaseRegime::Case7) {
            continue;
        }
        for k in case_grid(case) {
            let p = m_hat_partials(&k, &q).map_err(|e| e.to_string())?;
            let (dx, dy) = (p.d_gx.value, p.d_gy.value);
            let mut ok = dx > 0.0 && (0.0..=6.0).contains(&dy);
            if k.g_y <= 0.5 {
                ok &= dx <= d_gx_bound(&k);
            }
            if case == CaseRegime::Case8 {
                ok &= dy.abs() <= 1e-10;
            }
            if !ok {
                bad.push(format!("({:.3}, {:.3})", k.g_x, k.g_y));
            }
        }
    }
    Ok((bad.is_empty(), format!("{} violations {}", bad.len(), bad.join(" "))))
}

fn c10_decay() -> Outcome {
    let q = QuadratureConfig::default();
    let grid: Vec<f64> = (1..=10).map(|i| 0.05 * i as f64).collect();
    let rows = hm_table(&grid, &q).map_err(|e| e.to_string())?;
    let mut w: Vec<f64> = rows.iter().map(|r| r.weighted).collect();
    let max = w.iter().cloned().fold(0.0, f64::max);
    w.sort_by(f64::total_cmp);
    let median = 0.5 * (w[4] + w[5]);
    let f1 = rows[1].f1.abs();
    let ok = max.is_finite() && max <= 10.0 * median && f1 <= 0.12;
    Ok((ok, format!("max weighted {max:.4e} = {:.2} x median, |f1(0.1)| = {f1:.3e}", max / median)))
}

fn c11_divergence() -> Outcome {
    let q = QuadratureConfig::default();
    let p = second_order_divergence_probe(0.3, &[1e-2, 1e-3, 1e-4, 1e-5], &q).map_err(|e| e.to_string())?;
    let inc: Vec<f64> = p.windows(2).map(|w| w[1] - w[0]).collect();
    let lo = inc.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = inc.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ok = lo > 0.0 && hi <= 1.2 * lo;
    Ok((ok, format!("partials {p:.4?}, increments {inc:.4?}")))
}

fn c12_theta() -> Outcome {
    let t = theta_boundaries(1e-3).map_err(|e| e.to_string())?;
    let d7 = (t.theta7 - FRAC_PI_6).abs();
    let d8 = (t.theta8 - FRAC_PI_2).abs();
    Ok((d7 <= 1e-6 && d8 <= 1e-3, format!("|θ7 - π/6| = {d7:.1e}, |θ8 - π/2| = {d8:.1e}")))
}

fn c13_cesaro() -> Outcome {
    let mut ok = true;
    for n in 0..=32 {
        let c = cesaro_symbol(n);
        ok &= c.get(0) == 1.0 && cesaro_positivity_check(n, 256);
        ok &= c.iter().all(|(k, v)| jodeit_extend_1d(&c, k as f64) == v);
    }
    Ok((ok, "n = 0..=32, 256-point grid".into()))
}

fn run_cli(args: &[&str], threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hypertransfer"))
        .args(args)
        .env("HYPERTRANSFER_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn c14_determinism() -> Outcome {
    let runs: [&[&str]; 2] = [
        &["verify", "--suite", "all", "--seed", "7"],
        &["symbol", "0.2", "--mode", "mc", "--n", "200000", "--seed", "7"],
    ];
    for args in runs {
        let a = run_cli(args, "1")?;
        let b = run_cli(args, "4")?;
        if a != b || a.is_empty() {
            return Ok((false, format!("{args:?} differs between runs")));
        }
    }
    Ok((true, "verify and symbol outputs identical across runs and thread counts".into()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("cocycle identity", c1_cocycle, 10),
        ("tiling", c2_tiling, 5),
        ("first-letter oracle", c3_first_letter, 30),
        ("fundamental-domain measure", c4_measure, 10),
        ("case/oracle equivalence", c5_cases, 120),
        ("triple-oracle m̃", c6_triple_oracle, 300),
        ("bi-K-invariance", c7_bi_k, 120),
        ("identity value", c8_identity, 10),
        ("derivative bounds", c9_derivatives, 120),
        ("HM decay", c10_decay, 600),
        ("second-order divergence", c11_divergence, 120),
        ("θ-boundary limits", c12_theta, 1),
        ("Cesàro/Jodeit", c13_cesaro, 1),
        ("determinism", c14_determinism, 60),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let (pass, detail) = match outcome {
            Ok((ok, d)) => (ok && in_time, d),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        let status = if pass { "PASS" } else { "FAIL" };
        println!("{status} {:>2} {name}: {detail} [{:.2}s / {limit}s]", i + 1, took.as_secs_f64());
    }
    println!("{} of 14 criteria passed", 14 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
