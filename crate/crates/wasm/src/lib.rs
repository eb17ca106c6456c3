//! Browser bindings for the torus-embed demo page.
//!
//! Every export takes plain numbers or JSON text and returns JSON text, so the
//! page needs no generated TypeScript types. The `*_json` functions hold the
//! logic and run natively in tests; the `#[wasm_bindgen]` wrappers only turn
//! their errors into JavaScript exceptions.

use num_bigint::BigUint;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use torus_embed::delta::one_dim_embed;
use torus_embed::regular::embed_regular_simplex;
use torus_embed::torus::{torus_distance, vertex_position};
use torus_embed::{embed_distances, embed_simplex, OrderMode, PipelineConfig, SimplexInput, TorusPoint, TorusSpec};

/// Polygons with at most this many vertices get their outline sent to the page.
pub const MAX_OUTLINE_VERTICES: u32 = 256;

/// Correction factors drawn by the embed demo.
pub const MAX_DRAWN_FACTORS: usize = 12;

#[derive(Debug, Serialize)]
pub struct Mark {
    pub point: usize,
    pub index: String,
    pub x: f64,
    pub y: f64,
}

/// One polygon factor and where each input point sits on it.
#[derive(Debug, Serialize)]
pub struct FactorView {
    pub slot: usize,
    pub m: String,
    pub m_bits: u64,
    pub r: f64,
    pub side: f64,
    /// Outline vertices, omitted for huge `m`.
    pub outline: Option<Vec<[f64; 2]>>,
    pub marks: Vec<Mark>,
}

fn factor_view(t: &TorusSpec, points: &[TorusPoint], slot: usize) -> FactorView {
    let f = &t.factors[slot];
    let outline = (f.m <= BigUint::from(MAX_OUTLINE_VERTICES)).then(|| {
        let m: u32 = f.m.to_u32_digits().first().copied().unwrap_or(0);
        (0..m)
            .map(|k| {
                let (x, y) = vertex_position(&f.m, f.r, &BigUint::from(k));
                [x, y]
            })
            .collect()
    });
    let marks = points
        .iter()
        .enumerate()
        .map(|(point, p)| {
            let (x, y) = vertex_position(&f.m, f.r, &p.indices[slot]);
            Mark { point, index: p.indices[slot].to_string(), x, y }
        })
        .collect();
    FactorView { slot, m: f.m.to_string(), m_bits: f.m.bits(), r: f.r, side: f.side(), outline, marks }
}

fn distance_matrix(t: &TorusSpec, points: &[TorusPoint]) -> Result<Vec<Vec<f64>>, String> {
    points
        .iter()
        .map(|p| points.iter().map(|q| torus_distance(t, p, q).map_err(|e| e.to_string())).collect())
        .collect()
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("demo views serialize")
}

#[derive(Debug, Serialize)]
struct RegularView {
    alpha: f64,
    factors: Vec<FactorView>,
    distances: Vec<Vec<f64>>,
    max_rel_error: f64,
}

/// The regular simplex with `n` vertices and side `alpha` on `n` copies of an `m`-gon.
pub fn regular_json(n: u32, alpha: f64, m: u32) -> Result<String, String> {
    if !(1..=64).contains(&n) {
        return Err("n must be between 1 and 64".into());
    }
    if m < 2 {
        return Err("m must be at least 2".into());
    }
    let (t, pts) = embed_regular_simplex(n as usize, alpha, &BigUint::from(m)).map_err(|e| e.to_string())?;
    let distances = distance_matrix(&t, &pts)?;
    let max_rel_error = distances
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(move |(j, _)| *j != i).map(|(_, d)| (d - alpha).abs() / alpha))
        .fold(0.0, f64::max);
    let factors = (0..t.len()).map(|s| factor_view(&t, &pts, s)).collect();
    Ok(to_json(&RegularView { alpha, factors, distances, max_rel_error }))
}

#[derive(Debug, Serialize)]
struct LineView {
    n0: String,
    n: String,
    delta: f64,
    requested_delta: f64,
    snapped: Vec<f64>,
    errors: Vec<Vec<f64>>,
    max_error: f64,
    factor: FactorView,
}

/// The one-dimensional delta-embedding of the reals in `xs_json` (a JSON array).
pub fn delta_line_json(xs_json: &str, delta: f64) -> Result<String, String> {
    let xs: Vec<f64> = serde_json::from_str(xs_json).map_err(|e| format!("expected a JSON array of numbers: {e}"))?;
    let e = one_dim_embed(&xs, delta).map_err(|e| e.to_string())?;
    let view = LineView {
        n0: e.params.n0.to_string(),
        n: e.params.n.to_string(),
        delta: e.delta,
        requested_delta: e.requested_delta,
        snapped: e.snapped.iter().map(|s| s[0]).collect(),
        max_error: e.max_abs_error(),
        errors: e.per_pair_error.clone(),
        factor: factor_view(&e.torus, &e.assignment, 0),
    };
    Ok(to_json(&view))
}

#[derive(Debug, Serialize)]
struct OrderCount {
    m: String,
    bits: u64,
    factors: usize,
}

#[derive(Debug, Serialize)]
struct EmbedView {
    points: usize,
    factors: usize,
    ambient_dim: usize,
    alpha: Option<f64>,
    delta: Option<f64>,
    delta_factor_count: usize,
    orders: Vec<OrderCount>,
    max_abs: f64,
    max_rel: f64,
    accept_tol: f64,
    drawn: Vec<FactorView>,
    certificate: String,
}

/// Runs the full construction on `{"points": ...}` or `{"squared_distances": ...}`.
pub fn embed_json(input_json: &str, uniform_m: bool) -> Result<String, String> {
    let cfg = PipelineConfig {
        mode: if uniform_m { OrderMode::UniformM } else { OrderMode::Mixed },
        ..Default::default()
    };
    let cert = match SimplexInput::from_json(input_json).map_err(|e| e.to_string())? {
        SimplexInput::Points(p) => embed_simplex(&p, &cfg),
        SimplexInput::Distances(d) => embed_distances(&d, None, &cfg),
    }
    .map_err(|e| e.to_string())?;
    let mut orders: Vec<OrderCount> = Vec::new();
    for f in &cert.torus.factors {
        match orders.iter_mut().find(|o| o.m == f.m.to_string()) {
            Some(o) => o.factors += 1,
            None => orders.push(OrderCount { m: f.m.to_string(), bits: f.m.bits(), factors: 1 }),
        }
    }
    let k = cert.parameters.delta_factor_count.unwrap_or(0);
    let drawn = (k..cert.torus.len())
        .take(MAX_DRAWN_FACTORS)
        .map(|s| factor_view(&cert.torus, &cert.assignment, s))
        .collect();
    let view = EmbedView {
        points: cert.n_points(),
        factors: cert.torus.len(),
        ambient_dim: cert.torus.ambient_dim(),
        alpha: cert.parameters.alpha,
        delta: cert.parameters.delta,
        delta_factor_count: k,
        orders,
        max_abs: cert.errors.max_abs,
        max_rel: cert.errors.max_rel,
        accept_tol: cert.meta.accept_tol,
        drawn,
        certificate: cert.to_json(),
    };
    Ok(to_json(&view))
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn regular(n: u32, alpha: f64, m: u32) -> Result<String, JsError> {
    js(regular_json(n, alpha, m))
}

#[wasm_bindgen]
pub fn delta_line(xs_json: &str, delta: f64) -> Result<String, JsError> {
    js(delta_line_json(xs_json, delta))
}

#[wasm_bindgen]
pub fn embed(input_json: &str, uniform_m: bool) -> Result<String, JsError> {
    js(embed_json(input_json, uniform_m))
}
