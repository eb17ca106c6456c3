//! Distance-geometry primitives.
//!
//! A finite point set is summarized by its matrix of squared distances `D`.
//! Double centering, `G = -1/2 * J * D * J` with `J = I - 11^T / n`, yields the
//! Gram matrix of the centered configuration. `D` has a Euclidean realization
//! exactly when `G` is positive semidefinite, and the realization dimension
//! equals the rank of `G`. Classical scaling inverts the construction.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for rank and PSD decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Symmetry slack accepted on matrices read from outside, relative to the largest entry.
const SYMMETRY_TOL: f64 = 1e-12;

/// An ordered list of points sharing one ambient dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl PointSet {
    /// Builds a point set, inferring the dimension from the first point.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Input("point set is empty".into()))?;
        Self::with_dim(points, dim)
    }

    pub fn with_dim(points: Vec<Vec<f64>>, dim: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("point set is empty".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Input(format!(
                    "point {i} has dimension {} but the set has dimension {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::Input(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(Self { points, dim })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    /// Values of coordinate `c` across all points.
    pub fn coordinate(&self, c: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[c]).collect()
    }

    /// True when no two points coincide exactly.
    pub fn is_distinct(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (i + 1..n).all(|j| self.points[i] != self.points[j]))
    }

    pub fn into_points(self) -> Vec<Vec<f64>> {
        self.points
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Symmetric matrix of pairwise squared distances.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredDistanceMatrix(DMatrix<f64>);

impl SquaredDistanceMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::Input(format!(
                "squared distance matrix must be square and nonempty, got {}x{}",
                n,
                entries.ncols()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("squared distance matrix has a non-finite entry".into()));
        }
        let slack = SYMMETRY_TOL * max_abs(&entries);
        for i in 0..n {
            if entries[(i, i)] != 0.0 {
                return Err(Error::Input(format!("diagonal entry ({i},{i}) is not zero")));
            }
            for j in 0..i {
                if entries[(i, j)] < 0.0 {
                    return Err(Error::Input(format!("entry ({i},{j}) is negative")));
                }
                if (entries[(i, j)] - entries[(j, i)]).abs() > slack {
                    return Err(Error::Input(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        // Exact symmetry from here on.
        let sym = (&entries + entries.transpose()) * 0.5;
        Ok(Self(sym))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("squared distance matrix rows have unequal lengths".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n()).map(|i| self.0.row(i).iter().copied().collect()).collect()
    }

    /// Smallest off-diagonal entry, `None` for a single point.
    pub fn min_off_diagonal(&self) -> Option<f64> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.0[(i, j)])
            .reduce(f64::min)
    }
}

/// Doubly centered Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(DMatrix<f64>);

impl GramMatrix {
    /// Wraps a symmetric matrix. Row sums are not checked, so any symmetric
    /// matrix can be fed to [`realize`].
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::Input("Gram matrix must be square and nonempty".into()));
        }
        let slack = SYMMETRY_TOL * max_abs(&entries);
        for i in 0..n {
            for j in 0..i {
                if (entries[(i, j)] - entries[(j, i)]).abs() > slack {
                    return Err(Error::Input(format!("Gram entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(Self((&entries + entries.transpose()) * 0.5))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Eigenvalues in decreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sym_eigen(&self.0).0
    }

    /// Subtracts `shift` times the centering projector, lowering every
    /// eigenvalue on the centered subspace by `shift`.
    pub fn shifted(&self, shift: f64) -> GramMatrix {
        GramMatrix(&self.0 - centering_projector(self.n()) * shift)
    }
}

/// `I - 11^T / n`.
pub fn centering_projector(n: usize) -> DMatrix<f64> {
    let inv = 1.0 / n as f64;
    DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 - inv } else { -inv })
}

/// Orthonormal basis of the centered subspace `{v : sum(v) = 0}`, as columns.
fn helmert_basis(n: usize) -> DMatrix<f64> {
    let mut q = DMatrix::zeros(n, n.saturating_sub(1));
    for k in 1..n {
        let norm = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            q[(i, k - 1)] = 1.0 / norm;
        }
        q[(k, k - 1)] = -(k as f64) / norm;
    }
    q
}

/// Eigen-decomposition with eigenvalues sorted decreasingly. Each eigenvector
/// is signed so that its largest-magnitude entry (first on ties) is positive.
pub(crate) fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let pivot = col
            .iter()
            .enumerate()
            .fold((0, 0.0_f64), |best, (i, v)| if v.abs() > best.1.abs() { (i, *v) } else { best })
            .0;
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.set_column(dst, &(col * sign));
    }
    (values, vectors)
}

/// Spectrum of a Gram matrix restricted to the centered subspace.
///
/// For `n` points this holds `n - 1` eigenvalues; the all-ones direction,
/// which a doubly centered matrix always annihilates, is excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredSpectrum {
    /// Decreasing order.
    pub eigenvalues: Vec<f64>,
}

impl CenteredSpectrum {
    pub fn of(g: &GramMatrix) -> Self {
        let q = helmert_basis(g.n());
        let restricted = q.transpose() * g.as_matrix() * &q;
        Self { eigenvalues: sym_eigen(&restricted).0 }
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0).max(0.0)
    }

    pub fn lambda_min(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }

    /// Number of eigenvalues above `tol * lambda_max`.
    pub fn rank(&self, tol: f64) -> usize {
        let lmax = self.lambda_max();
        if lmax <= 0.0 {
            return 0;
        }
        self.eigenvalues.iter().filter(|&&v| v > tol * lmax).count()
    }

    /// Fails with `NotEuclidean` if some eigenvalue lies below `-tol * lambda_max`.
    pub fn check_psd(&self, tol: f64) -> Result<()> {
        let lmax = self.lambda_max();
        match self.eigenvalues.last() {
            Some(&v) if v < -tol * lmax => Err(Error::NotEuclidean { eigenvalue: v, lambda_max: lmax, tol }),
            _ => Ok(()),
        }
    }
}

pub fn squared_distances(p: &PointSet) -> SquaredDistanceMatrix {
    let n = p.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let s: f64 = p.point(i).iter().zip(p.point(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            d[(i, j)] = s;
            d[(j, i)] = s;
        }
    }
    SquaredDistanceMatrix(d)
}

pub fn centered_gram(d: &SquaredDistanceMatrix) -> GramMatrix {
    let n = d.n();
    let m = d.as_matrix();
    let row_mean: Vec<f64> = (0..n).map(|i| m.row(i).sum() / n as f64).collect();
    let grand = row_mean.iter().sum::<f64>() / n as f64;
    let g = DMatrix::from_fn(n, n, |i, j| -0.5 * (m[(i, j)] - row_mean[i] - row_mean[j] + grand));
    GramMatrix((&g + g.transpose()) * 0.5)
}

/// Classical scaling: points whose centered Gram matrix is `g`.
///
/// Coordinates follow the eigenvectors in decreasing eigenvalue order; modes
/// at or below `tol * lambda_max` are dropped.
pub fn realize(g: &GramMatrix, tol: f64) -> Result<PointSet> {
    let n = g.n();
    let (values, vectors) = sym_eigen(g.as_matrix());
    let lmax = values[0].max(0.0);
    let lmin = values[n - 1];
    if lmin < -tol * lmax {
        return Err(Error::NotEuclidean { eigenvalue: lmin, lambda_max: lmax, tol });
    }
    let kept: Vec<usize> = (0..n).filter(|&k| lmax > 0.0 && values[k] > tol * lmax).collect();
    let points = (0..n)
        .map(|i| kept.iter().map(|&k| values[k].sqrt() * vectors[(i, k)]).collect())
        .collect();
    PointSet::with_dim(points, kept.len())
}

/// Affine independence test via the rank of the centered Gram matrix.
pub fn is_simplex(p: &PointSet, tol: f64) -> bool {
    let n = p.len();
    if n <= 1 {
        return n == 1;
    }
    let spectrum = CenteredSpectrum::of(&centered_gram(&squared_distances(p)));
    spectrum.rank(tol) == n - 1
}
