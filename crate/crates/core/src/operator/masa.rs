use num_complex::Complex64;

use super::domain::{hermitian_eigen, Matrix, OperatorElement, Vector};
use crate::base::CompactGrid;
use crate::calculus;
use crate::error::{Error, Result};
use crate::extended::ExtendedValue;
use crate::quasi::{AlgebraKind, QuasiElement, QuasiModel, SeminormFamily};
use crate::scalar::ScalarFunction;

/// Resolvent eigenvalues closer than this (relative) share an eigenspace.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Off-diagonal tolerance (relative) for membership in the diagonal algebra.
pub const DIAGONAL_TOL: f64 = 1e-10;

/// A maximal commutative subalgebra containing `1` and `(1 + a)^{-1}`,
/// realised as the diagonal algebra in a fixed orthonormal eigenbasis, with
/// the element `a` transported to the commutative grid model.
///
/// Characters of the diagonal algebra are labelled by basis index: the
/// grid is `0, 1, .., N − 1` and the value of `a` at point `i` is its
/// `i`-th eigenvalue.
#[derive(Debug, Clone)]
pub struct CommutativeBridge {
    basis: Matrix,
    eigenvalues: Vec<f64>,
    model: QuasiModel,
    element: QuasiElement,
}

/// Extracts the bridge for a hermitian positive semi-definite `a`.
///
/// Degenerate eigenspaces of `(1 + a)^{-1}` get the lexicographically
/// first orthonormal basis: standard basis vectors projected onto the
/// eigenspace and orthonormalised in index order.
pub fn maximal_commutative(a: &OperatorElement) -> Result<CommutativeBridge> {
    if let Some((index, _)) = a.positivity_violation() {
        return Err(Error::NotQuasiPositive { index });
    }
    let n = a.dim();
    if n < 2 {
        return Err(Error::InvalidInput("the bridge needs dimension at least 2".into()));
    }
    let resolvent = (Matrix::identity(n, n) + a.matrix())
        .try_inverse()
        .ok_or_else(|| Error::InvalidInput("1 + a is singular".into()))?;
    let resolvent = (&resolvent + resolvent.adjoint()) * Complex64::new(0.5, 0.0);
    let (mu, v) = hermitian_eigen(&resolvent);

    let mut basis = Matrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (mu[end] - mu[start]).abs() <= DEGENERACY_TOL * mu[end].abs().max(1e-300) {
            end += 1;
        }
        let group = v.columns(start, end - start).into_owned();
        let projector = &group * group.adjoint();
        let mut chosen: Vec<Vector> = Vec::new();
        for k in 0..n {
            if chosen.len() == end - start {
                break;
            }
            let mut w: Vector = projector.column(k).into_owned();
            for c in &chosen {
                let overlap = c.dotc(&w);
                w -= c * overlap;
            }
            let norm = w.norm();
            if norm > 1e-6 {
                chosen.push(w / Complex64::new(norm, 0.0));
            }
        }
        // Fallback keeps the solver's own vectors if projection lost rank.
        if chosen.len() < end - start {
            chosen = (0..end - start).map(|j| group.column(j).into_owned()).collect();
        }
        let mean_mu = mu[start..end].iter().sum::<f64>() / (end - start) as f64;
        for (j, c) in chosen.into_iter().enumerate() {
            basis.set_column(start + j, &c);
            eigenvalues.push((1.0 / mean_mu - 1.0).max(0.0));
        }
        start = end;
    }

    let grid = CompactGrid::uniform(0.0, (n - 1) as f64, n)?;
    let model = QuasiModel::new(grid.clone(), SeminormFamily::lp(&grid, 1.0)?, AlgebraKind::Linf);
    let element = model.element(eigenvalues.iter().map(|&l| ExtendedValue::real(l)).collect())?;
    Ok(CommutativeBridge { basis, eigenvalues, model, element })
}

impl CommutativeBridge {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Orthonormal eigenbasis, one column per character.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Eigenvalues of `a` in basis order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn model(&self) -> &QuasiModel {
        &self.model
    }

    /// `a` as an element of the commutative model.
    pub fn element(&self) -> &QuasiElement {
        &self.element
    }

    fn rotate(&self, x: &OperatorElement) -> Matrix {
        self.basis.adjoint() * x.matrix() * &self.basis
    }

    /// Largest off-diagonal entry of `x` in the eigenbasis, relative to `‖x‖₀`.
    pub fn off_diagonal(&self, x: &OperatorElement) -> f64 {
        let m = self.rotate(x);
        let mut worst: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if i != j {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
        worst / x.norm().max(1.0)
    }

    pub fn contains(&self, x: &OperatorElement) -> bool {
        x.dim() == self.dim() && self.off_diagonal(x) <= DIAGONAL_TOL
    }

    /// Diagonal of `x` in the eigenbasis as a grid element.
    pub fn to_diagonal(&self, x: &OperatorElement) -> Result<QuasiElement> {
        if !self.contains(x) {
            return Err(Error::InvalidInput(format!(
                "operator is not diagonal in the eigenbasis (off-diagonal {:e})",
                self.off_diagonal(x)
            )));
        }
        let m = self.rotate(x);
        QuasiElement::new((0..self.dim()).map(|i| ExtendedValue::from_complex(m[(i, i)])).collect())
    }

    pub fn from_diagonal(&self, d: &QuasiElement) -> Result<OperatorElement> {
        if d.len() != self.dim() {
            return Err(Error::InvalidInput("grid size mismatch".into()));
        }
        let values = d
            .values()
            .iter()
            .map(|v| v.finite().ok_or_else(|| Error::InvalidInput("∞ value has no matrix image".into())))
            .collect::<Result<Vec<_>>>()?;
        let m = &self.basis * Matrix::from_diagonal(&Vector::from_vec(values)) * self.basis.adjoint();
        OperatorElement::new(m)
    }

    /// `(1 + a)^{-1}` rebuilt from the bridge.
    pub fn resolvent(&self) -> OperatorElement {
        let d = QuasiElement::from_real(&self.eigenvalues.iter().map(|l| 1.0 / (1.0 + l)).collect::<Vec<_>>())
            .expect("finite");
        self.from_diagonal(&d).expect("finite")
    }

    /// `f(a)` through the commutative calculus at class order `n`.
    pub fn apply_function(&self, f: &ScalarFunction, n: u32) -> Result<OperatorElement> {
        let fa = calculus::apply_function(&self.model, f, &self.element, n)?;
        self.from_diagonal(&fa)
    }

    /// The positive `n`-th root of `a`.
    pub fn nth_root(&self, n: u32) -> Result<OperatorElement> {
        self.from_diagonal(&calculus::nth_root(&self.element, n)?)
    }

    /// `a · b` through the partial product of the commutative model; `b`
    /// must lie in the diagonal algebra.
    pub fn partial_product(&self, b: &OperatorElement) -> Result<OperatorElement> {
        let bd = self.to_diagonal(b)?;
        self.from_diagonal(&calculus::partial_product(&self.model, &self.element, &bd)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::spectral_norm;
    use crate::sampling;

    fn close(a: &OperatorElement, b: &OperatorElement, tol: f64) -> bool {
        spectral_norm(&(a.matrix() - b.matrix())) <= tol * a.norm().max(1.0)
    }

    #[test]
    fn diagonal_roots() {
        let a = OperatorElement::from_real_diagonal(&[4.0, 9.0]);
        let b = maximal_commutative(&a).unwrap();
        assert!(close(&b.nth_root(2).unwrap(), &OperatorElement::from_real_diagonal(&[2.0, 3.0]), 1e-14));
        let id = OperatorElement::identity(3);
        let b = maximal_commutative(&id).unwrap();
        for n in 1..=4 {
            assert!(close(&b.nth_root(n).unwrap(), &id, 1e-14));
        }
    }

    #[test]
    fn degenerate_basis_is_lexicographic() {
        let b = maximal_commutative(&OperatorElement::identity(3)).unwrap();
        assert!(close(&OperatorElement::new(b.basis().clone()).unwrap(), &OperatorElement::identity(3), 1e-14));
    }

    #[test]
    fn rejects_non_positive() {
        let a = OperatorElement::from_real_diagonal(&[1.0, -2.0]);
        assert!(matches!(maximal_commutative(&a), Err(Error::NotQuasiPositive { index: 0 })));
    }

    #[test]
    fn square_root_squares_back() {
        let mut rng = sampling::seeded(5);
        for _ in 0..10 {
            let a = sampling::psd_matrix(&mut rng, 12);
            let bridge = maximal_commutative(&a).unwrap();
            assert_eq!(bridge.dim(), 12);
            assert!(bridge.contains(&bridge.resolvent()));
            let r = bridge.apply_function(&ScalarFunction::Pow(0.5), 1).unwrap();
            assert!(r.is_positive());
            assert!(close(&r.mul(&r), &a, 1e-10));
            for n in 2..=4 {
                let root = bridge.nth_root(n).unwrap();
                let back = (1..n).fold(root.clone(), |acc, _| acc.mul(&root));
                assert!(close(&back, &a, 1e-10));
            }
        }
    }

    #[test]
    fn bridge_product_matches_matrix_product() {
        let mut rng = sampling::seeded(6);
        let a = sampling::psd_matrix(&mut rng, 8);
        let bridge = maximal_commutative(&a).unwrap();
        let b = bridge.apply_function(&ScalarFunction::ResolventPow(1), 0).unwrap();
        let via = bridge.partial_product(&b).unwrap();
        assert!(close(&via, &a.mul(&b), 1e-10));
        let outside = sampling::complex_matrix(&mut rng, 8, 1.0);
        assert!(matches!(bridge.partial_product(&outside), Err(Error::InvalidInput(_))));
    }
}
