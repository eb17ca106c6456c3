//! Regular simplices and their embedding into `(m, r)`-regular tori.
//!
//! Pick two adjacent vertices `p = 1` and `p' = 0` of a regular `m`-gon whose
//! side is `alpha / sqrt(2)`. Vertex `i` of the simplex goes to the torus point
//! that sits at `p` in factor `i` and at `p'` everywhere else, so any two
//! vertices differ in exactly two factors, each by one side.

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::torus::{ratio_to_f64, PolygonSpec, TorusPoint, TorusSpec};

/// `n` points in `R^(n-1)` with every pairwise distance equal to `side`.
///
/// Vertex `k` sits above the centroid of the first `k` vertices, at height
/// `side * sqrt((k + 1) / (2k))` along the `k`-th axis.
pub fn regular_simplex(n: usize, side: f64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::Input("a simplex needs at least one vertex".into()));
    }
    if !(side.is_finite() && side > 0.0) {
        return Err(Error::Input(format!("side length {side} must be positive")));
    }
    let dim = n - 1;
    let mut points: Vec<Vec<f64>> = vec![vec![0.0; dim]];
    for k in 1..n {
        let mut v = vec![0.0; dim];
        for p in &points {
            for (vc, pc) in v.iter_mut().zip(p) {
                *vc += pc;
            }
        }
        for vc in &mut v {
            *vc /= k as f64;
        }
        v[k - 1] = side * ((k + 1) as f64 / (2 * k) as f64).sqrt();
        points.push(v);
    }
    PointSet::with_dim(points, dim)
}

/// Circumradius of the regular `m`-gon with the given side.
pub fn circumradius_for_side(m: &BigUint, side: f64) -> f64 {
    side / (2.0 * (PI * ratio_to_f64(&BigUint::one(), m)).sin())
}

/// Embeds the regular simplex with `n` vertices and side `alpha` into
/// `n` copies of a regular `m`-gon.
pub fn embed_regular_simplex(n: usize, alpha: f64, m: &BigUint) -> Result<(TorusSpec, Vec<TorusPoint>)> {
    if n == 0 {
        return Err(Error::Input("a simplex needs at least one vertex".into()));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Input(format!("side length {alpha} must be positive")));
    }
    let r = circumradius_for_side(m, alpha / SQRT_2);
    let torus = TorusSpec::new(vec![PolygonSpec::new(m.clone(), r)?; n])?;
    let points = (0..n)
        .map(|i| TorusPoint::new((0..n).map(|slot| BigUint::from(u8::from(slot == i))).collect()))
        .collect();
    Ok((torus, points))
}
