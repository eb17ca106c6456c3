//! Embedding a simplex into a regular polygonal torus.
//!
//! 1. Write the simplex `Y` as a regular expansion of a base set `X`:
//!    `|y_i - y_j|^2 = |x_i - x_j|^2 + alpha^2`.
//! 2. Delta-embed `X` with `delta = alpha^2 / n^2` into a torus `T1` via `f`.
//! 3. The leftover `alpha_ij^2 = alpha^2 + (|x_i - x_j|^2 - |f(x_i) - f(x_j)|^2)`
//!    form an almost-regular matrix, realized exactly on a torus `T0` via `h`.
//! 4. `y_i -> (f(x_i), h(z_i))` is an isometry into `T1 x T0`.

use nalgebra::DMatrix;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::almost_regular::{embed_plan, AlmostRegularMatrix, RealizationPlan};
use crate::certificate::{CertificateInput, EmbeddingCertificate, ErrorSummary, Meta, Parameters};
use crate::delta::{product_embed, DeltaEmbedding};
use crate::error::{Error, Result};
use crate::geometry::{
    centered_gram, realize, squared_distances, CenteredSpectrum, PointSet, SquaredDistanceMatrix, DEFAULT_RANK_TOL,
};
use crate::torus::{PolygonSpec, TorusPoint, TorusSpec};
use crate::verify::{verify_certificate, VerificationReport};

pub const DEFAULT_ACCEPT_TOL: f64 = 1e-8;

/// Polygon order used for the factors that realize the correction matrix.
pub const DEFAULT_CORRECTION_M: u32 = 4;

/// How polygon orders are chosen for the correction factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderMode {
    /// Small fixed order for correction factors; huge order only where the
    /// delta-embedding needs it.
    #[default]
    Mixed,
    /// Every factor uses the delta-embedding's order, giving an `m`-regular torus.
    UniformM,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub rank_tol: f64,
    /// Relative squared-distance tolerance the finished certificate must meet.
    pub accept_tol: f64,
    /// `alpha^2 = alpha_fraction * lambda_min`, in `(0, 2)`.
    pub alpha_fraction: f64,
    pub mode: OrderMode,
    pub correction_m: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            accept_tol: DEFAULT_ACCEPT_TOL,
            alpha_fraction: 1.0,
            mode: OrderMode::Mixed,
            correction_m: DEFAULT_CORRECTION_M,
        }
    }
}

/// `Y` written as a regular expansion of `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionDecomposition {
    pub base: PointSet,
    pub alpha: f64,
    /// Smallest eigenvalue of the centered Gram matrix of `Y` on the centered subspace.
    pub lambda_min: f64,
    pub centered_eigenvalues: Vec<f64>,
}

/// Splits a simplex into base set plus regular expansion with `alpha^2 = lambda_min`.
pub fn schoenberg_decompose(y: &PointSet, tol: f64) -> Result<ExpansionDecomposition> {
    decompose_distances(&squared_distances(y), tol, 1.0)
}

/// Subtracting `alpha^2` from every off-diagonal squared distance lowers the
/// centered spectrum by `alpha^2 / 2`, so the base stays realizable for any
/// `alpha^2 <= 2 lambda_min`.
pub fn decompose_distances(d: &SquaredDistanceMatrix, tol: f64, alpha_fraction: f64) -> Result<ExpansionDecomposition> {
    let n = d.n();
    if n < 2 {
        return Err(Error::TrivialInput("a single point has no regular expansion".into()));
    }
    if !(alpha_fraction > 0.0 && alpha_fraction < 2.0) {
        return Err(Error::Input(format!("alpha fraction {alpha_fraction} must lie in (0, 2)")));
    }
    let g = centered_gram(d);
    let spectrum = CenteredSpectrum::of(&g);
    spectrum.check_psd(tol)?;
    let rank = spectrum.rank(tol);
    if rank < n - 1 {
        return Err(Error::NotSimplex { rank, expected: n - 1 });
    }
    let lambda_min = spectrum.lambda_min().expect("n >= 2");
    let alpha2 = alpha_fraction * lambda_min;
    let base = realize(&g.shifted(alpha2 / 2.0), tol)?;
    Ok(ExpansionDecomposition { base, alpha: alpha2.sqrt(), lambda_min, centered_eigenvalues: spectrum.eigenvalues })
}

/// Every intermediate of one pipeline run.
#[derive(Debug, Clone)]
pub struct Construction {
    pub decomposition: ExpansionDecomposition,
    pub delta_embedding: DeltaEmbedding,
    pub correction: AlmostRegularMatrix,
    pub plan: RealizationPlan,
    pub correction_torus: TorusSpec,
    pub correction_points: Vec<TorusPoint>,
    pub certificate: EmbeddingCertificate,
    pub report: VerificationReport,
}

fn single_point_certificate(d: &SquaredDistanceMatrix, points: Option<&PointSet>, cfg: &PipelineConfig) -> Result<EmbeddingCertificate> {
    let torus = TorusSpec::new(vec![PolygonSpec::new(cfg.correction_m, 1.0)?])?;
    let mut cert = EmbeddingCertificate::from_parts(d, torus, vec![TorusPoint::from_u64s(&[0])], cfg.accept_tol);
    cert.input.points = points.map(|p| p.points().to_vec());
    cert.meta.rank_tol = cfg.rank_tol;
    Ok(cert)
}

/// Runs the whole construction and keeps the intermediates.
pub fn construct(d: &SquaredDistanceMatrix, points: Option<&PointSet>, cfg: &PipelineConfig) -> Result<Construction> {
    let n = d.n();
    if n < 2 {
        return Err(Error::TrivialInput("a single point needs no construction".into()));
    }
    let decomposition = decompose_distances(d, cfg.rank_tol, cfg.alpha_fraction)?;
    let alpha2 = decomposition.alpha * decomposition.alpha;
    let requested_delta = alpha2 / (n * n) as f64;
    let delta_embedding = product_embed(&decomposition.base, requested_delta)?;

    let corr = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            (delta_embedding.per_pair_error[i][j] + alpha2).sqrt()
        }
    });
    let correction = AlmostRegularMatrix::new(corr)?;
    let plan = RealizationPlan::new(&correction);
    let correction_m = match cfg.mode {
        OrderMode::Mixed => BigUint::from(cfg.correction_m),
        OrderMode::UniformM => delta_embedding.params.m.clone(),
    };
    let (correction_torus, correction_points) = embed_plan(&plan, &correction_m)?;

    let torus = delta_embedding.torus.clone().product(correction_torus.clone());
    let assignment = delta_embedding
        .assignment
        .iter()
        .zip(&correction_points)
        .map(|(f, h)| f.clone().concat(h.clone()))
        .collect();

    let parameters = Parameters {
        mode: Some(cfg.mode),
        alpha: Some(decomposition.alpha),
        alpha_fraction: Some(cfg.alpha_fraction),
        lambda_min: Some(decomposition.lambda_min),
        requested_delta: Some(requested_delta),
        delta: Some(delta_embedding.delta),
        delta_params: Some(delta_embedding.params.clone()),
        m_bits: Some(delta_embedding.params.m.bits()),
        delta_factor_count: Some(delta_embedding.torus.len()),
        kept_coordinates: Some(delta_embedding.kept_coordinates.clone()),
        dropped_coordinates: Some(delta_embedding.dropped_coordinates.clone()),
        correction_margin: Some(correction.margin()),
        realization_plan: Some(plan.clone()),
    };
    let mut certificate = EmbeddingCertificate {
        input: CertificateInput { squared_distances: d.to_rows(), points: points.map(|p| p.points().to_vec()) },
        torus,
        assignment,
        parameters,
        errors: ErrorSummary::default(),
        meta: Meta::new(cfg.accept_tol, cfg.rank_tol),
    };
    let report = verify_certificate(&certificate, cfg.accept_tol)?;
    certificate.errors = ErrorSummary { max_abs: report.max_abs, max_rel: report.max_rel };
    if !report.passed {
        return Err(Error::VerificationFailed { max_rel: report.max_rel, tol: cfg.accept_tol });
    }
    Ok(Construction {
        decomposition,
        delta_embedding,
        correction,
        plan,
        correction_torus,
        correction_points,
        certificate,
        report,
    })
}

/// Certificate for the embedding of a simplex given by its squared distances.
pub fn embed_distances(d: &SquaredDistanceMatrix, points: Option<&PointSet>, cfg: &PipelineConfig) -> Result<EmbeddingCertificate> {
    if d.n() == 1 {
        return single_point_certificate(d, points, cfg);
    }
    construct(d, points, cfg).map(|c| c.certificate)
}

/// Certificate for the embedding of a simplex given by coordinates.
pub fn embed_simplex(y: &PointSet, cfg: &PipelineConfig) -> Result<EmbeddingCertificate> {
    embed_distances(&squared_distances(y), Some(y), cfg)
}
