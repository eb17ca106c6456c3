//! Independent certificate checking.
//!
//! Only the input squared distances, the torus factors and the vertex
//! assignment are read; distances come from chord sums alone.

use crate::certificate::EmbeddingCertificate;
use crate::error::{Error, Result};
use crate::geometry::SquaredDistanceMatrix;
use crate::torus::torus_distance_squared;

/// Discrepancy on one pair of input points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub expected: f64,
    pub actual: f64,
    pub abs: f64,
    pub rel: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub pairs: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    pub worst: Option<PairCheck>,
    /// Pairs whose relative error exceeds `tol`, in `(i, j)` order.
    pub failures: Vec<PairCheck>,
    pub tol: f64,
    pub passed: bool,
}

fn structure(c: &EmbeddingCertificate) -> std::result::Result<SquaredDistanceMatrix, String> {
    let n = c.input.squared_distances.len();
    if n == 0 {
        return Err("input.squared_distances: empty".into());
    }
    let d = SquaredDistanceMatrix::from_rows(&c.input.squared_distances).map_err(|e| format!("input.squared_distances: {e}"))?;
    if c.torus.factors.is_empty() {
        return Err("torus.factors: empty".into());
    }
    for (k, f) in c.torus.factors.iter().enumerate() {
        f.validate().map_err(|e| format!("torus.factors[{k}]: {e}"))?;
    }
    if c.assignment.len() != n {
        return Err(format!("assignment: {} points for {n} input points", c.assignment.len()));
    }
    for (i, p) in c.assignment.iter().enumerate() {
        c.torus.check_point(p).map_err(|e| format!("assignment[{i}]: {e}"))?;
    }
    Ok(d)
}

/// Recomputes every pairwise torus distance and compares it to the input.
/// A pair passes when `|torus^2 - input^2| <= tol * input^2`.
pub fn verify_certificate(c: &EmbeddingCertificate, tol: f64) -> Result<VerificationReport> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::Input(format!("tolerance {tol} must be a nonnegative number")));
    }
    let d = structure(c).map_err(Error::InvalidCertificate)?;
    let n = d.n();
    let mut report = VerificationReport {
        pairs: 0,
        max_abs: 0.0,
        max_rel: 0.0,
        worst: None,
        failures: Vec::new(),
        tol,
        passed: true,
    };
    for i in 0..n {
        for j in i + 1..n {
            let expected = d.get(i, j);
            let actual = torus_distance_squared(&c.torus, &c.assignment[i], &c.assignment[j])
                .map_err(|e| Error::InvalidCertificate(e.to_string()))?;
            let abs = (actual - expected).abs();
            let rel = if expected > 0.0 {
                abs / expected
            } else if abs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            let check = PairCheck { i, j, expected, actual, abs, rel };
            report.pairs += 1;
            report.max_abs = report.max_abs.max(abs);
            if report.worst.is_none_or(|w| rel > w.rel) {
                report.worst = Some(check);
            }
            report.max_rel = report.max_rel.max(rel);
            if rel.is_nan() || rel > tol {
                report.failures.push(check);
            }
        }
    }
    report.passed = report.failures.is_empty();
    Ok(report)
}
