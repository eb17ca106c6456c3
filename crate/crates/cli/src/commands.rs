//! Subcommand bodies. Each returns the process exit code.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use torus_embed::certificate::{to_canonical_json, InputFile};
use torus_embed::gen::{generate, GenKind};
use torus_embed::pipeline::OrderMode;
use torus_embed::{embed_distances, verify_certificate, EmbeddingCertificate, Error, PipelineConfig, SimplexInput};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NOT_SIMPLEX: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

/// Failed pairs listed by `verify` before the output is cut short.
const MAX_LISTED_FAILURES: usize = 20;

fn read(path: &Path) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_ERROR
    })
}

fn write(path: &Path, contents: &str) -> Result<(), u8> {
    fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_ERROR
    })
}

fn load_certificate(path: &Path) -> Result<EmbeddingCertificate, u8> {
    EmbeddingCertificate::from_json(&read(path)?).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_ERROR
    })
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NotSimplex { .. } | Error::NotEuclidean { .. } => EXIT_NOT_SIMPLEX,
        Error::VerificationFailed { .. } => EXIT_VERIFY_FAILED,
        _ => EXIT_ERROR,
    }
}

fn report_error(e: &Error) -> u8 {
    let code = exit_code_for(e);
    if code == EXIT_NOT_SIMPLEX {
        eprintln!("error: input is not a simplex ({e})");
    } else {
        eprintln!("error: {e}");
    }
    code
}

fn check_tolerance(tol: f64) -> Result<(), u8> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        eprintln!("error: tolerance {tol} must be a nonnegative number");
        Err(EXIT_ERROR)
    }
}

fn run(r: Result<(), u8>) -> u8 {
    r.err().unwrap_or(EXIT_OK)
}

pub fn embed(input: &Path, output: &Path, tolerance: f64, uniform_m: bool, alpha_fraction: f64, quiet: bool) -> u8 {
    run((|| {
        check_tolerance(tolerance)?;
        let parsed = SimplexInput::from_json(&read(input)?).map_err(|e| report_error(&e))?;
        let cfg = PipelineConfig {
            accept_tol: tolerance,
            alpha_fraction,
            mode: if uniform_m { OrderMode::UniformM } else { OrderMode::Mixed },
            ..Default::default()
        };
        let cert = match &parsed {
            SimplexInput::Points(p) => torus_embed::embed_simplex(p, &cfg),
            SimplexInput::Distances(d) => embed_distances(d, None, &cfg),
        }
        .map_err(|e| report_error(&e))?;
        write(output, &cert.to_json())?;
        if !quiet {
            println!(
                "embedded {} points into {} polygon factors (ambient dimension {})",
                cert.n_points(),
                cert.torus.len(),
                cert.torus.ambient_dim()
            );
            if let Some(bits) = cert.parameters.m_bits {
                println!("largest polygon order: {bits} bits");
            }
            println!("max abs error: {:e}", cert.errors.max_abs);
            println!("max rel error: {:e}", cert.errors.max_rel);
            println!("certificate written to {}", output.display());
        }
        Ok(())
    })())
}

pub fn verify(cert_path: &Path, tolerance: f64) -> u8 {
    run((|| {
        check_tolerance(tolerance)?;
        let cert = load_certificate(cert_path)?;
        let report = verify_certificate(&cert, tolerance).map_err(|e| report_error(&e))?;
        println!("pairs checked: {}", report.pairs);
        println!("max abs error: {:e}", report.max_abs);
        println!("max rel error: {:e}", report.max_rel);
        println!("tolerance:     {:e}", report.tol);
        if report.passed {
            println!("PASS");
            return Ok(());
        }
        for f in report.failures.iter().take(MAX_LISTED_FAILURES) {
            println!(
                "pair ({}, {}): expected {:e}, torus {:e}, rel error {:e}",
                f.i, f.j, f.expected, f.actual, f.rel
            );
        }
        if report.failures.len() > MAX_LISTED_FAILURES {
            println!("... {} more failing pairs", report.failures.len() - MAX_LISTED_FAILURES);
        }
        println!("FAIL");
        Err(EXIT_VERIFY_FAILED)
    })())
}

pub fn gen(kind: GenKind, n: usize, seed: u64, output: Option<&Path>) -> u8 {
    run((|| {
        let points = generate(kind, n, seed).map_err(|e| report_error(&e))?;
        let json = to_canonical_json(&InputFile::from(&points));
        match output {
            Some(path) => write(path, &json),
            None => {
                print!("{json}");
                Ok(())
            }
        }
    })())
}

#[derive(Debug, Serialize)]
struct OrderSummary {
    m: String,
    bits: u64,
    factors: usize,
}

#[derive(Debug, Serialize)]
struct Summary {
    points: usize,
    factors: usize,
    ambient_dim: usize,
    orders: Vec<OrderSummary>,
    r_min: f64,
    r_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<OrderMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    correction_margin: Option<f64>,
    max_abs: f64,
    max_rel: f64,
    accept_tol: f64,
}

fn summarize(c: &EmbeddingCertificate) -> Summary {
    let mut orders = BTreeMap::new();
    for f in &c.torus.factors {
        *orders.entry(f.m.clone()).or_insert(0usize) += 1;
    }
    let radii = c.torus.factors.iter().map(|f| f.r);
    Summary {
        points: c.n_points(),
        factors: c.torus.len(),
        ambient_dim: c.torus.ambient_dim(),
        orders: orders.into_iter().map(|(m, factors)| OrderSummary { bits: m.bits(), m: m.to_string(), factors }).collect(),
        r_min: radii.clone().fold(f64::INFINITY, f64::min),
        r_max: radii.fold(f64::NEG_INFINITY, f64::max),
        mode: c.parameters.mode,
        alpha: c.parameters.alpha,
        delta: c.parameters.delta,
        correction_margin: c.parameters.correction_margin,
        max_abs: c.errors.max_abs,
        max_rel: c.errors.max_rel,
        accept_tol: c.meta.accept_tol,
    }
}

fn abbreviate(digits: &str) -> String {
    if digits.len() <= 24 {
        digits.to_string()
    } else {
        format!("{}...{} ({} digits)", &digits[..8], &digits[digits.len() - 8..], digits.len())
    }
}

fn optional(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:e}"))
}

pub fn inspect(cert_path: &Path, json: bool) -> u8 {
    run((|| {
        let s = summarize(&load_certificate(cert_path)?);
        if json {
            print!("{}", to_canonical_json(&s));
            return Ok(());
        }
        println!("{:<18} {}", "points", s.points);
        println!("{:<18} {}", "factors", s.factors);
        println!("{:<18} {}", "ambient dimension", s.ambient_dim);
        println!("{:<18} {:e} .. {:e}", "radius range", s.r_min, s.r_max);
        println!("{:<18} {}", "mode", s.mode.map_or("-", |m| if m == OrderMode::Mixed { "mixed" } else { "uniform-m" }));
        println!("{:<18} {}", "alpha", optional(s.alpha));
        println!("{:<18} {}", "delta", optional(s.delta));
        println!("{:<18} {}", "correction margin", optional(s.correction_margin));
        println!("{:<18} {:e}", "max abs error", s.max_abs);
        println!("{:<18} {:e}", "max rel error", s.max_rel);
        println!("{:<18} {:e}", "accept tolerance", s.accept_tol);
        println!();
        println!("{:>8}  {:>6}  m", "factors", "bits");
        for o in &s.orders {
            println!("{:>8}  {:>6}  {}", o.factors, o.bits, abbreviate(&o.m));
        }
        Ok(())
    })())
}
