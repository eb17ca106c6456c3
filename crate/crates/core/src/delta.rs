//! Approximate embeddings of finite sets into `(m, r)`-regular tori.
//!
//! A map `f` is a delta-embedding when it is injective and every squared
//! distance moves by less than `delta`. On the line: translate the set into
//! `[0, n0]` with `1/n0 <= |x - x'| <= n0`, snap each value down to the grid of
//! step `n0 / n^2`, and wrap the grid around a regular `n^3`-gon of
//! circumradius `n0 * n / (2 pi)`, so one grid step is one polygon step. With
//! `n >= 2 pi n0^3 / delta`, snapping and bending each cost less than
//! `delta / 2`. A set in `R^k` is handled one coordinate at a time with a
//! common polygon and budget `delta / k`.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{Float, FromPrimitive, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{squared_distances, PointSet};
use crate::torus::{chord, decimal, ratio_to_f64, torus_distance_squared, PolygonSpec, TorusPoint, TorusSpec};

/// Grid and polygon parameters shared by every coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneDimParams {
    #[serde(with = "decimal")]
    pub n0: BigUint,
    #[serde(with = "decimal")]
    pub n: BigUint,
    #[serde(with = "decimal")]
    pub m: BigUint,
    pub r: f64,
}

impl OneDimParams {
    /// `n = max(2, ceil(2 pi n0^3 / budget))`, `m = n^3`, `r = n0 n / (2 pi)`.
    pub fn for_budget(n0: BigUint, budget: f64) -> Self {
        let n0f = n0.to_f64().expect("n0 fits in f64");
        let bound = (2.0 * PI * n0f.powi(3) / budget).ceil();
        let n = BigUint::from_f64(bound).unwrap_or_default().max(BigUint::from(2u32));
        let m = n.pow(3);
        let r = n0f * n.to_f64().expect("n fits in f64") / (2.0 * PI);
        Self { n0, n, m, r }
    }

    /// Vertex index of the translated value `t >= 0`: `floor(n^2 t / n0)`, exact.
    pub fn grid_index(&self, t: f64) -> BigUint {
        debug_assert!(t >= 0.0);
        if t == 0.0 {
            return BigUint::zero();
        }
        let (mantissa, exp, _) = Float::integer_decode(t);
        let num = self.n.pow(2) * mantissa;
        if exp >= 0 {
            (num << exp as usize) / &self.n0
        } else {
            num / (&self.n0 << (-exp) as usize)
        }
    }

    /// Grid value `j n0 / n^2` of index `j`.
    pub fn grid_value(&self, j: &BigUint) -> f64 {
        ratio_to_f64(&(j * &self.n0), &self.n.pow(2))
    }

    pub fn polygon(&self) -> PolygonSpec {
        PolygonSpec { m: self.m.clone(), r: self.r }
    }
}

/// Largest minus smallest value, and the smallest gap between distinct values.
fn spread(values: &[f64]) -> (f64, Option<f64>) {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let span = sorted[sorted.len() - 1] - sorted[0];
    let min_gap = sorted.windows(2).map(|w| w[1] - w[0]).reduce(f64::min);
    (span, min_gap)
}

/// Smallest positive integer `n0` with `n0 >= span` and `n0 * min_gap >= 1`.
fn n0_for(span: f64, min_gap: f64) -> BigUint {
    let lower = span.ceil().max((1.0 / min_gap).ceil()).max(1.0);
    let mut n0 = BigUint::from_f64(lower).expect("finite spread");
    while n0.to_f64().expect("n0 fits in f64") * min_gap < 1.0 {
        n0 += 1u32;
    }
    n0
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(Error::Input(format!("delta must be positive and finite, got {delta}")))
    }
}

/// Parameters for a single coordinate.
pub fn one_dim_params(xs: &[f64], delta: f64) -> Result<OneDimParams> {
    check_delta(delta)?;
    if xs.len() < 2 {
        return Err(Error::TrivialInput("fewer than two values".into()));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Input("values must be finite".into()));
    }
    let (span, min_gap) = spread(xs);
    let min_gap = match min_gap {
        Some(g) if spread_is_distinct(xs) => g,
        _ => return Err(Error::Input("values must be pairwise distinct".into())),
    };
    Ok(OneDimParams::for_budget(n0_for(span, min_gap), delta))
}

fn spread_is_distinct(xs: &[f64]) -> bool {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// Largest per-pair errors of the two approximation stages on one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageErrors {
    /// `max | (y - y')^2 - (x - x')^2 |`: grid snapping.
    pub snapping: f64,
    /// `max | chord^2 - (y - y')^2 |`: wrapping the grid onto the polygon.
    pub bending: f64,
}

/// A delta-embedding of a point set into `k'` copies of one regular polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEmbedding {
    pub torus: TorusSpec,
    pub assignment: Vec<TorusPoint>,
    /// Strict bound met by every `|per_pair_error|`.
    pub delta: f64,
    /// Bound asked for, before the injectivity shrink.
    pub requested_delta: f64,
    /// Per-coordinate share of `delta`.
    pub budget: f64,
    pub params: OneDimParams,
    pub kept_coordinates: Vec<usize>,
    pub dropped_coordinates: Vec<usize>,
    /// Per kept coordinate, the value subtracted before snapping.
    pub offsets: Vec<f64>,
    /// Snapped grid values, `snapped[point][kept coordinate]`.
    pub snapped: Vec<Vec<f64>>,
    /// `|x_i - x_j|^2 - |f(x_i) - f(x_j)|^2`.
    pub per_pair_error: Vec<Vec<f64>>,
}

impl DeltaEmbedding {
    fn build(
        x: &PointSet,
        kept: Vec<usize>,
        dropped: Vec<usize>,
        params: OneDimParams,
        delta: f64,
        requested_delta: f64,
    ) -> Result<Self> {
        let n = x.len();
        let budget = delta / kept.len() as f64;
        let offsets: Vec<f64> = kept
            .iter()
            .map(|&c| x.points().iter().map(|p| p[c]).fold(f64::INFINITY, f64::min))
            .collect();
        let mut assignment = Vec::with_capacity(n);
        let mut snapped = Vec::with_capacity(n);
        for p in x.points() {
            let indices: Vec<BigUint> = kept.iter().zip(&offsets).map(|(&c, lo)| params.grid_index(p[c] - lo)).collect();
            snapped.push(indices.iter().map(|j| params.grid_value(j)).collect());
            assignment.push(TorusPoint::new(indices));
        }
        let torus = TorusSpec::new(vec![params.polygon(); kept.len()])?;
        let d = squared_distances(x);
        let mut per_pair_error = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..i {
                let e = d.get(i, j) - torus_distance_squared(&torus, &assignment[i], &assignment[j])?;
                per_pair_error[i][j] = e;
                per_pair_error[j][i] = e;
            }
        }
        Ok(Self {
            torus,
            assignment,
            delta,
            requested_delta,
            budget,
            params,
            kept_coordinates: kept,
            dropped_coordinates: dropped,
            offsets,
            snapped,
            per_pair_error,
        })
    }

    pub fn max_abs_error(&self) -> f64 {
        self.per_pair_error.iter().flatten().fold(0.0_f64, |acc, e| acc.max(e.abs()))
    }

    pub fn is_injective(&self) -> bool {
        let n = self.assignment.len();
        (0..n).all(|i| (i + 1..n).all(|j| self.assignment[i] != self.assignment[j]))
    }

    /// Splits the error on each kept coordinate into its snapping and bending parts.
    pub fn stage_errors(&self, x: &PointSet) -> Vec<StageErrors> {
        let n = x.len();
        let m = &self.params.m;
        let r = self.params.r;
        self.kept_coordinates
            .iter()
            .enumerate()
            .map(|(slot, &c)| {
                let mut out = StageErrors { snapping: 0.0, bending: 0.0 };
                for i in 0..n {
                    for j in 0..i {
                        let dx = x.point(i)[c] - x.point(j)[c];
                        let dy = self.snapped[i][slot] - self.snapped[j][slot];
                        let (a, b) = (&self.assignment[i].indices[slot], &self.assignment[j].indices[slot]);
                        let steps = if a >= b { a - b } else { b - a };
                        let ch = chord(m, r, &steps);
                        out.snapping = out.snapping.max((dy * dy - dx * dx).abs());
                        out.bending = out.bending.max((ch * ch - dy * dy).abs());
                    }
                }
                out
            })
            .collect()
    }
}

/// Delta-embeds distinct reals into a single regular polygon.
pub fn one_dim_embed(xs: &[f64], delta: f64) -> Result<DeltaEmbedding> {
    let params = one_dim_params(xs, delta)?;
    let x = PointSet::with_dim(xs.iter().map(|&v| vec![v]).collect(), 1)?;
    DeltaEmbedding::build(&x, vec![0], Vec::new(), params, delta, delta)
}

/// Delta-embeds a finite point set into an `(m, r)`-regular torus, one factor
/// per non-constant coordinate.
///
/// When `delta` is not below the smallest squared distance it is replaced by
/// half of it, which rules out two points landing on the same torus vertex.
pub fn product_embed(x: &PointSet, delta: f64) -> Result<DeltaEmbedding> {
    check_delta(delta)?;
    if x.len() < 2 {
        return Err(Error::TrivialInput("fewer than two points".into()));
    }
    let min_sq = squared_distances(x).min_off_diagonal().expect("at least two points");
    if min_sq <= 0.0 {
        return Err(Error::Input("points must be pairwise distinct".into()));
    }
    let used = if delta >= min_sq { min_sq / 2.0 } else { delta };

    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut n0 = BigUint::from(1u32);
    for c in 0..x.dim() {
        match spread(&x.coordinate(c)) {
            (span, Some(gap)) => {
                n0 = n0.max(n0_for(span, gap));
                kept.push(c);
            }
            _ => dropped.push(c),
        }
    }
    let params = OneDimParams::for_budget(n0, used / kept.len() as f64);
    DeltaEmbedding::build(x, kept, dropped, params, used, delta)
}
