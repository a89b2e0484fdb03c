use num_complex::Complex64;

use super::domain::{spectral_norm, Matrix, OperatorElement, TruncatedDomain};

/// Weights closer than this (relative) count as one eigenvalue of `S`.
pub const WEIGHT_TOL: f64 = 1e-12;

/// The commutant `𝒞(S) = {X : X S^{-1} = S^{-1} X}` at truncation scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Commutant {
    inverse_weights: Vec<f64>,
    /// Block label per basis index; equal labels share a weight.
    blocks: Vec<usize>,
    basis: Vec<(usize, usize)>,
}

/// Solves `X S^{-1} − S^{-1} X = 0`. The constraint acts on the matrix unit
/// `E_ij` as multiplication by `1/s_j − 1/s_i`, so its null space is spanned
/// by the units with `s_i = s_j`.
pub fn cs_algebra(domain: &TruncatedDomain) -> Commutant {
    let inverse_weights: Vec<f64> = domain.weights().iter().map(|s| 1.0 / s).collect();
    let n = inverse_weights.len();
    let mut blocks = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if blocks[i] != usize::MAX {
            continue;
        }
        for j in i..n {
            if blocks[j] == usize::MAX && same_weight(inverse_weights[i], inverse_weights[j]) {
                blocks[j] = next;
            }
        }
        next += 1;
    }
    let basis = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| blocks[i] == blocks[j])
        .collect();
    Commutant { inverse_weights, blocks, basis }
}

fn same_weight(a: f64, b: f64) -> bool {
    (a - b).abs() <= WEIGHT_TOL * a.abs().max(b.abs())
}

impl Commutant {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Matrix-unit positions `(i, j)` of the basis.
    pub fn basis_indices(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn basis(&self) -> Vec<Matrix> {
        let n = self.blocks.len();
        self.basis
            .iter()
            .map(|&(i, j)| {
                let mut m = Matrix::zeros(n, n);
                m[(i, j)] = Complex64::new(1.0, 0.0);
                m
            })
            .collect()
    }

    /// Block label of each basis index.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// `‖X S^{-1} − S^{-1} X‖₀ ≤ tol · max(1, ‖X‖₀)`.
    pub fn contains(&self, x: &OperatorElement, tol: f64) -> bool {
        self.residual(x) <= tol * x.norm().max(1.0)
    }

    pub fn residual(&self, x: &OperatorElement) -> f64 {
        let m = x.matrix();
        let r = Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * (self.inverse_weights[j] - self.inverse_weights[i]));
        spectral_norm(&r)
    }

    /// Orthogonal projection onto the commutant (drops off-block entries).
    pub fn project(&self, x: &OperatorElement) -> OperatorElement {
        let m = x.matrix();
        let p = Matrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            if self.blocks[i] == self.blocks[j] { m[(i, j)] } else { Complex64::new(0.0, 0.0) }
        });
        OperatorElement::new(p).expect("entries copied from a finite matrix")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    /// Null space of the full `N² × N²` commutation map via SVD.
    fn brute_force_null_space(domain: &TruncatedDomain) -> Vec<Vec<Complex64>> {
        let n = domain.dim();
        let w = domain.inverse_weight_matrix();
        let mut k = DMatrix::<Complex64>::zeros(n * n, n * n);
        for col in 0..n * n {
            let mut e = Matrix::zeros(n, n);
            e[(col % n, col / n)] = Complex64::new(1.0, 0.0);
            let c = &e * &w - &w * &e;
            for row in 0..n * n {
                k[(row, col)] = c[(row % n, row / n)];
            }
        }
        let svd = k.svd(false, true);
        let vt = svd.v_t.unwrap();
        (0..n * n)
            .filter(|&r| svd.singular_values[r] <= 1e-12)
            .map(|r| vt.row(r).iter().map(|z| z.conj()).collect())
            .collect()
    }

    fn check_against_oracle(weights: Vec<f64>) {
        let d = TruncatedDomain::new(weights).unwrap();
        let c = cs_algebra(&d);
        let null = brute_force_null_space(&d);
        assert_eq!(null.len(), c.dim());
        let n = d.dim();
        let positions: Vec<usize> = c.basis_indices().iter().map(|&(i, j)| i + j * n).collect();
        for v in &null {
            let outside: f64 = (0..n * n).filter(|p| !positions.contains(p)).map(|p| v[p].norm_sqr()).sum();
            assert!(outside.sqrt() <= 1e-12);
        }
        for b in c.basis() {
            let x = OperatorElement::new(b).unwrap();
            assert!(c.residual(&x) <= 1e-12);
        }
    }

    #[test]
    fn distinct_weights_give_diagonals() {
        let c = cs_algebra(&TruncatedDomain::new(vec![1.0, 2.0, 3.0]).unwrap());
        assert_eq!(c.basis_indices(), &[(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn identity_weight_gives_full_algebra() {
        assert_eq!(cs_algebra(&TruncatedDomain::identity(4).unwrap()).dim(), 16);
    }

    #[test]
    fn matches_brute_force_solve() {
        check_against_oracle(vec![1.0, 2.0, 1.0, 3.0, 2.0, 2.0]);
        check_against_oracle(vec![5.0; 8]);
        check_against_oracle(vec![1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5]);
        check_against_oracle(vec![2.0, 1.0]);
    }

    #[test]
    fn membership_and_projection() {
        let d = TruncatedDomain::new(vec![1.0, 2.0, 1.0]).unwrap();
        let c = cs_algebra(&d);
        let x = OperatorElement::new(Matrix::from_fn(3, 3, |i, j| Complex64::new((i * 3 + j) as f64, 1.0))).unwrap();
        assert!(!c.contains(&x, 1e-12));
        let p = c.project(&x);
        assert!(c.contains(&p, 1e-12));
        assert_eq!(p.matrix()[(0, 2)], x.matrix()[(0, 2)]);
        assert_eq!(p.matrix()[(0, 1)], Complex64::new(0.0, 0.0));
    }
}
