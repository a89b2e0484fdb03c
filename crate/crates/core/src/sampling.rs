//! Seeded random elements for the verification suites.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::base::{BoundedFunction, CompactGrid};
use crate::extended::ExtendedValue;
use crate::operator::{spectral_norm, Commutant, Matrix, OperatorElement, Vector};
use crate::quasi::{AlgebraKind, QuasiElement, QuasiModel};

pub type SuiteRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random complex grid function with modulus at most `scale`.
pub fn bounded(rng: &mut SuiteRng, grid: &CompactGrid, scale: f64) -> BoundedFunction {
    let values = (0..grid.len())
        .map(|_| Complex64::from_polar(scale * rng.gen::<f64>(), 2.0 * PI * rng.gen::<f64>()))
        .collect();
    BoundedFunction::new(values).expect("finite samples")
}

/// Random real grid function with values in `[lo, hi]`.
pub fn real(rng: &mut SuiteRng, grid: &CompactGrid, lo: f64, hi: f64) -> BoundedFunction {
    BoundedFunction::from_real((0..grid.len()).map(|_| rng.gen_range(lo..=hi)).collect())
        .expect("finite samples")
}

/// Smooth real function `c₀ + Σ c_k sin(2π f_k s + φ_k)` on the grid's
/// normalised coordinate `s ∈ [0, 1]`, with discrete slope below `max_slope`.
pub fn smooth(rng: &mut SuiteRng, grid: &CompactGrid, max_slope: f64) -> BoundedFunction {
    let (a, b) = grid.interval();
    let terms: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(1.0..6.0f64).floor(), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    let raw_slope: f64 = terms.iter().map(|(c, f, _)| c.abs() * 2.0 * PI * f / (b - a)).sum();
    let amp = if raw_slope > 0.0 { (0.5 * max_slope / raw_slope).min(1.0) } else { 1.0 };
    let c0 = rng.gen_range(-1.0..1.0);
    BoundedFunction::from_real_fn(grid, |t| {
        let s = (t - a) / (b - a);
        c0 + amp * terms.iter().map(|(c, f, p)| c * (2.0 * PI * f * s + p).sin()).sum::<f64>()
    })
    .expect("finite samples")
}

/// Random real element of `A₀`, scaled to sup norm `scale`.
pub fn algebra_real(rng: &mut SuiteRng, grid: &CompactGrid, kind: AlgebraKind, scale: f64) -> BoundedFunction {
    let x = match kind {
        AlgebraKind::Linf => real(rng, grid, -1.0, 1.0),
        AlgebraKind::Lipschitz { max_slope } => smooth(rng, grid, max_slope / scale.max(1.0)),
    };
    let s = x.sup_norm();
    if s == 0.0 {
        x
    } else {
        x.scale(Complex64::new(scale / s, 0.0))
    }
}

/// Random member of `𝒰(A₀)₊`: positive with sup norm at most one.
pub fn unit_positive(rng: &mut SuiteRng, grid: &CompactGrid, kind: AlgebraKind) -> BoundedFunction {
    let x = algebra_real(rng, grid, kind, 1.0);
    x.map(|z| Complex64::new(0.5 * (z.re + 1.0), 0.0))
}

/// Random quasi-positive element `c·|t − t₀|^{-α} + d·u(t)` with `u ≥ 0`
/// bounded, `α ≤ alpha_max`, and ∞ at the grid point `t₀`. With
/// probability 1/4 the singular part is dropped.
pub fn quasi_positive(rng: &mut SuiteRng, model: &QuasiModel, alpha_max: f64) -> QuasiElement {
    let grid = model.grid();
    let u = real(rng, grid, 0.0, 1.0);
    let d = rng.gen_range(0.0..3.0);
    let singular = rng.gen_bool(0.75);
    let center = rng.gen_range(0..grid.len());
    let t0 = grid.points()[center];
    let alpha = rng.gen_range(0.05..alpha_max.max(0.06));
    let c = rng.gen_range(0.1..2.0);
    let values = grid
        .points()
        .iter()
        .zip(u.values())
        .enumerate()
        .map(|(i, (&t, ui))| {
            let bounded = d * ui.re;
            if !singular {
                ExtendedValue::real(bounded)
            } else if i == center {
                ExtendedValue::Infinity
            } else {
                ExtendedValue::real(c * (t - t0).abs().powf(-alpha) + bounded)
            }
        })
        .collect();
    model.element(values).expect("sampled singularity is integrable")
}

/// Random complex vector with entries of modulus at most 1.
pub fn complex_vector(rng: &mut SuiteRng, n: usize) -> Vector {
    Vector::from_iterator(n, (0..n).map(|_| Complex64::from_polar(rng.gen::<f64>(), 2.0 * PI * rng.gen::<f64>())))
}

/// Random complex matrix with entries of modulus at most `scale`.
pub fn complex_matrix(rng: &mut SuiteRng, n: usize, scale: f64) -> OperatorElement {
    let m = Matrix::from_fn(n, n, |_, _| Complex64::from_polar(scale * rng.gen::<f64>(), 2.0 * PI * rng.gen::<f64>()));
    OperatorElement::new(m).expect("finite samples")
}

/// Haar-like unitary from the QR factor of a complex Gaussian-ish matrix.
pub fn unitary(rng: &mut SuiteRng, n: usize) -> Matrix {
    let g = Matrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    g.qr().q()
}

/// `B B† / n` for a random `B`; hermitian positive semi-definite.
pub fn psd_matrix(rng: &mut SuiteRng, n: usize) -> OperatorElement {
    let b = complex_matrix(rng, n, 1.0).into_matrix();
    let a = &b * b.adjoint() / Complex64::new(n as f64, 0.0);
    OperatorElement::new((&a + a.adjoint()) * Complex64::new(0.5, 0.0)).expect("finite samples")
}

/// Random commuting pair `(X, Y)` with `Y` hermitian, diagonal in a shared
/// random basis.
pub fn commuting_pair(rng: &mut SuiteRng, n: usize) -> (OperatorElement, OperatorElement) {
    let u = unitary(rng, n);
    let x = Vector::from_iterator(n, (0..n).map(|_| Complex64::from_polar(rng.gen_range(0.0..2.0), 2.0 * PI * rng.gen::<f64>())));
    let y = Vector::from_iterator(n, (0..n).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), 0.0)));
    let conj = |d: &Vector| &u * Matrix::from_diagonal(d) * u.adjoint();
    let y = conj(&y);
    let y = (&y + y.adjoint()) * Complex64::new(0.5, 0.0);
    (OperatorElement::new(conj(&x)).expect("finite"), OperatorElement::new(y).expect("finite"))
}

/// Random positive element of the commutant with norm at most 1.
pub fn unit_ball_positive(rng: &mut SuiteRng, commutant: &Commutant, n: usize) -> OperatorElement {
    let b = commutant.project(&complex_matrix(rng, n, 1.0)).into_matrix();
    let a = &b * b.adjoint();
    let a = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let norm = spectral_norm(&a);
    if norm == 0.0 {
        return OperatorElement::zero(n);
    }
    let target = rng.gen_range(0.1..1.0);
    OperatorElement::new(a * Complex64::new(target / norm, 0.0)).expect("finite")
}
