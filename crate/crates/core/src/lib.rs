//! Isometric embeddings of simplices into regular polygonal tori.
//!
//! Any finite affinely independent point set can be placed, with every
//! pairwise distance preserved exactly, on the vertices of a finite product of
//! regular polygons. [`pipeline::embed_simplex`] builds such an embedding and
//! returns an [`EmbeddingCertificate`]; [`verify::verify_certificate`] checks
//! one using nothing but chord lengths.
//!
//! ```
//! use torus_embed::{embed_simplex, verify_certificate, PipelineConfig, PointSet};
//!
//! let triangle = PointSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.2, 0.9]]).unwrap();
//! let cert = embed_simplex(&triangle, &PipelineConfig::default()).unwrap();
//! assert!(verify_certificate(&cert, 1e-8).unwrap().passed);
//! ```

pub mod almost_regular;
pub mod certificate;
pub mod delta;
pub mod error;
pub mod gen;
pub mod geometry;
pub mod pipeline;
pub mod regular;
pub mod torus;
pub mod verify;

pub use certificate::{EmbeddingCertificate, SimplexInput};
pub use error::{Error, Result};
pub use geometry::{PointSet, SquaredDistanceMatrix};
pub use pipeline::{embed_distances, embed_simplex, OrderMode, PipelineConfig};
pub use torus::{PolygonSpec, TorusPoint, TorusSpec};
pub use verify::{verify_certificate, VerificationReport};
