//! JSON interchange: simplex inputs and embedding certificates.
//!
//! Arbitrary-precision integers travel as decimal strings. Floats are written
//! in scientific notation with 17 significant digits, so a certificate parsed
//! and written again is byte-identical.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::almost_regular::RealizationPlan;
use crate::delta::OneDimParams;
use crate::error::{Error, Result};
use crate::geometry::{PointSet, SquaredDistanceMatrix};
use crate::pipeline::OrderMode;
use crate::torus::{TorusPoint, TorusSpec};

pub const TOOL_NAME: &str = "torus-embed";

/// The metric being embedded. `points` is kept when the input came as coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateInput {
    pub squared_distances: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
}

/// Construction record. Verification never reads it.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<OrderMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
    /// `alpha^2 / n^2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub requested_delta: Option<f64>,
    /// After the injectivity shrink.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_params: Option<OneDimParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_bits: Option<u64>,
    /// Leading torus factors that carry the delta-embedding.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_factor_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kept_coordinates: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dropped_coordinates: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization_plan: Option<RealizationPlan>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub max_abs: f64,
    pub max_rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub accept_tol: f64,
    pub rank_tol: f64,
    pub float_digits: u32,
}

impl Meta {
    pub fn new(accept_tol: f64, rank_tol: f64) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            accept_tol,
            rank_tol,
            float_digits: 17,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    pub input: CertificateInput,
    pub torus: TorusSpec,
    pub assignment: Vec<TorusPoint>,
    #[serde(default)]
    pub parameters: Parameters,
    pub errors: ErrorSummary,
    pub meta: Meta,
}

impl EmbeddingCertificate {
    /// A certificate with no construction record, e.g. for an embedding built by hand.
    pub fn from_parts(
        d: &SquaredDistanceMatrix,
        torus: TorusSpec,
        assignment: Vec<TorusPoint>,
        accept_tol: f64,
    ) -> Self {
        Self {
            input: CertificateInput { squared_distances: d.to_rows(), points: None },
            torus,
            assignment,
            parameters: Parameters::default(),
            errors: ErrorSummary::default(),
            meta: Meta::new(accept_tol, crate::geometry::DEFAULT_RANK_TOL),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidCertificate(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn n_points(&self) -> usize {
        self.input.squared_distances.len()
    }
}

/// Pretty JSON with every float as `d.ddddddddddddddddde<exp>`.
pub struct CanonicalFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Default for CanonicalFormatter<'_> {
    fn default() -> Self {
        Self { inner: PrettyFormatter::with_indent(b"  ") }
    }
}

impl Formatter for CanonicalFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter::default());
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// On-disk simplex description: exactly one of the two fields.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squared_distances: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimplexInput {
    Points(PointSet),
    Distances(SquaredDistanceMatrix),
}

impl SimplexInput {
    pub fn from_json(s: &str) -> Result<Self> {
        let file: InputFile = serde_json::from_str(s).map_err(|e| Error::Input(format!("malformed input JSON: {e}")))?;
        match (file.points, file.squared_distances) {
            (Some(p), None) => Ok(Self::Points(PointSet::new(p)?)),
            (None, Some(d)) => Ok(Self::Distances(SquaredDistanceMatrix::from_rows(&d)?)),
            _ => Err(Error::Input("input must hold exactly one of `points` or `squared_distances`".into())),
        }
    }
}

impl From<&PointSet> for InputFile {
    fn from(p: &PointSet) -> Self {
        Self { points: Some(p.points().to_vec()), squared_distances: None }
    }
}
