use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

/// Relative tolerance for hermiticity and positivity of matrices.
pub const MATRIX_TOL: f64 = 1e-12;

/// Spectral norm `‖X‖₀` via singular values.
pub fn spectral_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// `‖X − X†‖₀ ≤ tol · max(1, ‖X‖₀)`.
pub fn is_hermitian(m: &Matrix, tol: f64) -> bool {
    let scale = m.iter().fold(1.0_f64, |s, z| s.max(z.norm()));
    (m - m.adjoint()).iter().all(|z| z.norm() <= tol * scale)
}

/// Eigen-decomposition of the hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `A B` through four real products, which use the blocked real kernel.
pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, Complex64::new)
}

/// `V diag(d) V†`.
pub fn spectral_compose(v: &Matrix, d: &[f64]) -> Matrix {
    let mut scaled = v.clone();
    for (mut col, &x) in scaled.column_iter_mut().zip(d) {
        col.scale_mut(x);
    }
    matmul(&scaled, &v.adjoint())
}

/// Positive semi-definite up to `tol`: `m + tol·I` has a Cholesky factor.
///
/// Factors the real form `[[Re, −Im], [Im, Re]]`; the complex Cholesky
/// takes square roots of negative pivots without failing.
pub fn is_psd_within(m: &Matrix, tol: f64) -> bool {
    let n = m.nrows();
    let h = (m + m.adjoint()).scale(0.5);
    let real = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        let v = match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        };
        if r == c { v + tol } else { v }
    });
    real.cholesky().is_some()
}

/// Ascending eigenvalues of the hermitian part of `m`, without vectors.
pub fn hermitian_eigenvalues(m: &Matrix) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// `‖H‖₀ = max |λ|` for a hermitian `H`; only the hermitian part of `m`
/// is seen, so callers pass matrices that are hermitian by construction.
pub fn hermitian_norm(m: &Matrix) -> f64 {
    hermitian_eigenvalues(m).iter().fold(0.0, |a, v| a.max(v.abs()))
}

/// The weight operator `S = diag(s₁, …, s_N)` with `S ≥ I` on the first `N`
/// basis vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TruncatedDomain {
    weights: Vec<f64>,
}

impl TryFrom<Vec<f64>> for TruncatedDomain {
    type Error = Error;

    fn try_from(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights)
    }
}

impl From<TruncatedDomain> for Vec<f64> {
    fn from(d: TruncatedDomain) -> Self {
        d.weights
    }
}

impl TruncatedDomain {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("domain dimension must be positive".into()));
        }
        if let Some((i, s)) = weights.iter().enumerate().find(|(_, s)| !(s.is_finite() && **s >= 1.0)) {
            return Err(Error::InvalidInput(format!("weight s_{i} = {s} must be finite and >= 1")));
        }
        Ok(Self { weights })
    }

    /// `S = I`.
    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_matrix(&self) -> Matrix {
        Matrix::from_diagonal(&Vector::from_iterator(self.dim(), self.weights.iter().map(|&s| Complex64::new(s, 0.0))))
    }

    pub fn inverse_weight_matrix(&self) -> Matrix {
        Matrix::from_diagonal(&Vector::from_iterator(self.dim(), self.weights.iter().map(|&s| Complex64::new(1.0 / s, 0.0))))
    }

    /// Standard basis vector `e_i`.
    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = Vector::zeros(self.dim());
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    /// `f(S)` for a scalar function of the weights.
    pub fn weight_function(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix::from_diagonal(&Vector::from_iterator(self.dim(), self.weights.iter().map(|&s| Complex64::new(f(s), 0.0))))
    }

    /// `‖X‖ = ‖S^{-1} X S^{-1}‖₀`.
    pub fn quasi_norm(&self, x: &OperatorElement) -> f64 {
        let w = self.inverse_weight_matrix();
        spectral_norm(&(&w * x.matrix() * &w))
    }
}

/// A matrix acting on the truncated domain.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorElement {
    matrix: Matrix,
}

impl OperatorElement {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidInput(format!("matrix is {}x{}, expected square", matrix.nrows(), matrix.ncols())));
        }
        if let Some(i) = matrix.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidInput(format!("non-finite matrix entry at flat index {i}")));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: Matrix::identity(dim, dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: Matrix::zeros(dim, dim) }
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let d = Vector::from_iterator(values.len(), values.iter().map(|&v| Complex64::new(v, 0.0)));
        Self { matrix: Matrix::from_diagonal(&d) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { matrix: matmul(&self.matrix, &other.matrix) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix - &other.matrix }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { matrix: self.matrix.map(|z| z * c) }
    }

    /// `‖X‖₀`.
    pub fn norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }

    pub fn is_hermitian(&self) -> bool {
        is_hermitian(&self.matrix, MATRIX_TOL)
    }

    /// Smallest eigenvalue of the hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix).first().copied().unwrap_or(0.0)
    }

    /// Hermitian with spectrum in `[-tol·max(1, ‖X‖₀), ∞)`.
    pub fn is_positive(&self) -> bool {
        self.positivity_violation().is_none()
    }

    /// Index and value of the most negative eigenvalue when the element is
    /// not hermitian positive semi-definite.
    pub fn positivity_violation(&self) -> Option<(usize, f64)> {
        if !self.is_hermitian() {
            return Some((0, f64::NAN));
        }
        let values = hermitian_eigenvalues(&self.matrix);
        let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        match values.first() {
            Some(&v) if v < -MATRIX_TOL * scale => Some((0, v)),
            _ => None,
        }
    }

    /// `max |X_ij − Y_ij|`, the weak distance over basis vectors.
    pub fn entry_distance(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

// Entries are a plain number for real values and `[re, im]` otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Real(f64),
    Pair([f64; 2]),
}

impl Serialize for OperatorElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<RawEntry>> = (0..self.matrix.nrows())
            .map(|r| {
                (0..self.matrix.ncols())
                    .map(|c| {
                        let z = self.matrix[(r, c)];
                        if z.im == 0.0 { RawEntry::Real(z.re) } else { RawEntry::Pair([z.re, z.im]) }
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<RawEntry>>::deserialize(d)?;
        let n = rows.len();
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
            return Err(D::Error::custom(format!("row {r} has {} entries, expected {n}", row.len())));
        }
        let matrix = Matrix::from_fn(n, n, |r, c| match rows[r][c] {
            RawEntry::Real(v) => Complex64::new(v, 0.0),
            RawEntry::Pair([re, im]) => Complex64::new(re, im),
        });
        OperatorElement::new(matrix).map_err(D::Error::custom)
    }
}
