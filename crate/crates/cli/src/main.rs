#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypertransfer_core::quadrature::QuadratureConfig;
use hypertransfer_core::verify::{Mutation, Suite};
use hypertransfer_core::Error;

mod commands;

/// Seed used whenever `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_231_107;

#[derive(Debug, Parser)]
#[command(name = "hypertransfer", version, about = "Transferred Hilbert-transform symbol on SL2(R)")]
struct Cli {
    /// Output format; `verify` defaults to json, everything else to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1e-8)]
    abs_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-7)]
    rel_tol: f64,
    #[arg(long, global = true, default_value_t = 2000)]
    max_subdivisions: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymbolMode {
    Case,
    Direct,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Cocycle,
    Cases,
    Decay,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce x + iy into the fundamental domain.
    #[command(allow_negative_numbers = true)]
    Reduce { x: f64, y: f64 },
    /// m̃(diag(r, 1/r)).
    Symbol {
        r: f64,
        #[arg(long, value_enum, default_value_t = SymbolMode::Case)]
        mode: SymbolMode,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Boundary polylines of the region A(gx, gy) within the fundamental domain.
    #[command(allow_negative_numbers = true)]
    Region {
        gx: f64,
        gy: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Height at which the cusp is cut off.
        #[arg(long, default_value_t = 3.0)]
        y_max: f64,
    },
    /// Lie-derivative table over an evenly spaced r grid.
    Decay {
        #[arg(long)]
        rmin: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Run the self-check suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, hide = true)]
        mutate_f2: bool,
    },
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Accuracy { .. } | Error::IterationCap { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

pub fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("HYPERTRANSFER_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| usage(format!("HYPERTRANSFER_THREADS={v} is not a count")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    let q = QuadratureConfig::new(cli.abs_tol, cli.rel_tol, cli.max_subdivisions)?;
    let fmt = cli.format;
    let (text, code) = match cli.command {
        Command::Reduce { x, y } => (commands::reduce(x, y, fmt.unwrap_or(Format::Csv))?, 0),
        Command::Symbol { r, mode, n, seed } => {
            (commands::symbol(r, mode, n, seed, &q, fmt.unwrap_or(Format::Csv))?, 0)
        }
        Command::Region { gx, gy, samples, y_max } => {
            (commands::region(gx, gy, samples, y_max, fmt.unwrap_or(Format::Csv))?, 0)
        }
        Command::Decay { rmin, rmax, steps } => {
            (commands::decay(rmin, rmax, steps, &q, fmt.unwrap_or(Format::Csv))?, 0)
        }
        Command::Verify { suite, seed, mutate_f2 } => {
            let suite = match suite {
                SuiteArg::Cocycle => Suite::Cocycle,
                SuiteArg::Cases => Suite::Cases,
                SuiteArg::Decay => Suite::Decay,
                SuiteArg::All => Suite::All,
            };
            let mutation = if mutate_f2 { Mutation::FlipF2 } else { Mutation::None };
            let (text, passed) = commands::verify(suite, seed, mutation, fmt.unwrap_or(Format::Json))?;
            (text, if passed { 0 } else { 1 })
        }
    };
    match cli.output {
        Some(path) => fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| usage(e.to_string()))?;
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
