//! Almost-regular distance matrices and their realization inside products of
//! regular simplices.
//!
//! A symmetric matrix `A` with zero diagonal and positive off-diagonal entries
//! is almost regular when
//!
//! ```text
//! sum_{i<j} (amax^2 - a_ij^2) < amax^2.
//! ```
//!
//! With `b^2` the slack of that inequality and `b_ij^2 = amax^2 - a_ij^2`, take a
//! regular simplex of side `b` on `n` vertices and, for every pair with
//! `b_ij > 0`, a regular simplex of side `b_ij` on `n - 1` vertices in which
//! points `i` and `j` share a vertex. Then
//! `|z_s - z_t|^2 = b^2 + sum b_ij^2 - b_st^2 = a_st^2`.

use nalgebra::DMatrix;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::regular::{embed_regular_simplex, regular_simplex};
use crate::torus::{PolygonSpec, TorusPoint, TorusSpec};

/// Factors with `b_ij <= SKIP_TOL * amax` are left out of the product.
pub const SKIP_TOL: f64 = 1e-13;

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlmostRegularCheck {
    pub valid: bool,
    /// `amax^2 - sum_{i<j} (amax^2 - a_ij^2)`.
    pub margin: f64,
}

fn validate_structure(a: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::Input("matrix must be square and nonempty".into()));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("matrix has a non-finite entry".into()));
    }
    let amax = a.iter().fold(0.0_f64, |acc, v| acc.max(*v));
    for i in 0..n {
        if a[(i, i)] != 0.0 {
            return Err(Error::Input(format!("diagonal entry ({i},{i}) is not zero")));
        }
        for j in 0..i {
            if a[(i, j)] <= 0.0 {
                return Err(Error::Input(format!("off-diagonal entry ({i},{j}) is not positive")));
            }
            if (a[(i, j)] - a[(j, i)]).abs() > SYMMETRY_TOL * amax {
                return Err(Error::Input(format!("entries ({i},{j}) and ({j},{i}) differ")));
            }
        }
    }
    Ok(amax)
}

fn margin_of(a: &DMatrix<f64>, amax: f64) -> f64 {
    let n = a.nrows();
    let amax2 = amax * amax;
    let deficit: f64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| amax2 - a[(i, j)].powi(2)).sum();
    amax2 - deficit
}

/// Evaluates the almost-regularity condition. A single point is vacuously valid.
pub fn check_almost_regular(a: &DMatrix<f64>) -> Result<AlmostRegularCheck> {
    let amax = validate_structure(a)?;
    let margin = margin_of(a, amax);
    Ok(AlmostRegularCheck { valid: a.nrows() == 1 || margin > 0.0, margin })
}

/// A validated almost-regular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostRegularMatrix {
    entries: DMatrix<f64>,
    amax: f64,
    margin: f64,
}

impl AlmostRegularMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let amax = validate_structure(&entries)?;
        let margin = margin_of(&entries, amax);
        if entries.nrows() > 1 && margin <= 0.0 {
            return Err(Error::NotAlmostRegular { margin });
        }
        let entries = (&entries + entries.transpose()) * 0.5;
        Ok(Self { entries, amax, margin })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("matrix rows have unequal lengths".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn amax(&self) -> f64 {
        self.amax
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// One regular simplex factor `Delta_ij` of the product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionFactor {
    pub i: usize,
    pub j: usize,
    pub side: f64,
    /// Vertex of `Delta_ij` assigned to each point; `phi[i] == phi[j]`.
    pub phi: Vec<usize>,
}

/// How an almost-regular matrix was realized: the base simplex side `b`
/// followed by the `Delta_ij` factors in lexicographic `(i, j)` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationPlan {
    pub n: usize,
    pub base_side: f64,
    pub factors: Vec<CorrectionFactor>,
}

impl RealizationPlan {
    pub fn new(a: &AlmostRegularMatrix) -> Self {
        let n = a.n();
        if n == 1 {
            return Self { n, base_side: 0.0, factors: Vec::new() };
        }
        let amax2 = a.amax * a.amax;
        let mut factors = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let side = (amax2 - a.get(i, j).powi(2)).max(0.0).sqrt();
                if side > SKIP_TOL * a.amax {
                    factors.push(CorrectionFactor { i, j, side, phi: collapse_map(n, i, j) });
                }
            }
        }
        Self { n, base_side: a.margin.sqrt(), factors }
    }

    /// Number of regular simplices in the product, counting the base.
    pub fn simplex_count(&self) -> usize {
        usize::from(self.n > 1) + self.factors.len()
    }
}

/// Map from `n` points onto the `n - 1` vertices of `Delta_ij` that merges `j` into `i`.
pub fn collapse_map(n: usize, i: usize, j: usize) -> Vec<usize> {
    debug_assert!(i < j && j < n);
    (0..n)
        .map(|s| match s.cmp(&j) {
            std::cmp::Ordering::Less => s,
            std::cmp::Ordering::Equal => i,
            std::cmp::Ordering::Greater => s - 1,
        })
        .collect()
}

/// Realizes `a` as an affinely independent subset of a product of regular simplices.
pub fn realize_almost_regular(a: &AlmostRegularMatrix) -> Result<(PointSet, RealizationPlan)> {
    let plan = RealizationPlan::new(a);
    let n = plan.n;
    if n == 1 {
        return Ok((PointSet::with_dim(vec![Vec::new()], 0)?, plan));
    }
    let mut points: Vec<Vec<f64>> = regular_simplex(n, plan.base_side)?.into_points();
    for f in &plan.factors {
        let delta_ij = regular_simplex(n - 1, f.side)?;
        for (s, z) in points.iter_mut().enumerate() {
            z.extend_from_slice(delta_ij.point(f.phi[s]));
        }
    }
    let dim = points[0].len();
    Ok((PointSet::with_dim(points, dim)?, plan))
}

/// Torus realization of a plan: every simplex of the product goes into its
/// own block of `m`-gons.
pub fn embed_plan(plan: &RealizationPlan, m: &BigUint) -> Result<(TorusSpec, Vec<TorusPoint>)> {
    let n = plan.n;
    if n == 1 {
        let torus = TorusSpec::new(vec![PolygonSpec::new(m.clone(), 1.0)?])?;
        return Ok((torus, vec![TorusPoint::from_u64s(&[0])]));
    }
    let (mut torus, mut points) = embed_regular_simplex(n, plan.base_side, m)?;
    for f in &plan.factors {
        let (t, block) = embed_regular_simplex(n - 1, f.side, m)?;
        torus = torus.product(t);
        points = points
            .into_iter()
            .enumerate()
            .map(|(s, p)| p.concat(block[f.phi[s]].clone()))
            .collect();
    }
    Ok((torus, points))
}

/// Embeds the points realizing `a` into an `m`-regular polygonal torus.
pub fn embed_almost_regular(a: &AlmostRegularMatrix, m: &BigUint) -> Result<(TorusSpec, Vec<TorusPoint>)> {
    embed_plan(&RealizationPlan::new(a), m)
}
