//! Seeded generators of test simplices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{is_simplex, squared_distances, PointSet, DEFAULT_RANK_TOL};
use crate::regular::regular_simplex;

/// Smallest pairwise distance accepted from the `random` generator.
pub const MIN_GAP: f64 = 1e-3;

const MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GenKind {
    /// Unit-side regular simplex.
    Regular,
    /// Uniform points in `[-1, 1]^(n-1)`, redrawn until affinely independent
    /// with all pairwise distances at least [`MIN_GAP`].
    Random,
    /// Unit regular simplex with uniform coordinate noise in `[-noise, noise]`.
    Perturbed { noise: f64 },
}

fn acceptable(p: &PointSet) -> bool {
    is_simplex(p, DEFAULT_RANK_TOL) && squared_distances(p).min_off_diagonal().is_none_or(|d| d.sqrt() >= MIN_GAP)
}

pub fn generate(kind: GenKind, n: usize, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::Input("need at least one point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = n - 1;
    match kind {
        GenKind::Regular => regular_simplex(n, 1.0),
        GenKind::Random => {
            for _ in 0..MAX_ATTEMPTS {
                let pts = (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect();
                let p = PointSet::with_dim(pts, dim)?;
                if acceptable(&p) {
                    return Ok(p);
                }
            }
            Err(Error::Input(format!("no acceptable random simplex after {MAX_ATTEMPTS} draws")))
        }
        GenKind::Perturbed { noise } => {
            if !(noise.is_finite() && noise >= 0.0) {
                return Err(Error::Input(format!("noise {noise} must be nonnegative")));
            }
            let base = regular_simplex(n, 1.0)?;
            for _ in 0..MAX_ATTEMPTS {
                let pts = base
                    .points()
                    .iter()
                    .map(|p| p.iter().map(|c| c + if noise > 0.0 { rng.gen_range(-noise..=noise) } else { 0.0 }).collect())
                    .collect();
                let p = PointSet::with_dim(pts, dim)?;
                if acceptable(&p) {
                    return Ok(p);
                }
            }
            Err(Error::Input(format!("no acceptable perturbed simplex after {MAX_ATTEMPTS} draws")))
        }
    }
}
