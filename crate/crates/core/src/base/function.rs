use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CompactGrid;
use crate::error::{Error, Result};
use crate::extended::FINITE_BOUND;
use crate::scalar::ScalarFunction;

/// Largest imaginary part tolerated for a value to count as real.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Positivity tolerance relative to the sup norm.
pub const POSITIVITY_REL_TOL: f64 = 1e-12;
/// Absolute floor for the positivity tolerance.
pub const POSITIVITY_FLOOR: f64 = 1e-300;

/// An element of the base algebra: one finite complex value per grid point.
///
/// Serialised as a JSON array of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct BoundedFunction {
    values: Vec<Complex64>,
}

impl TryFrom<Vec<[f64; 2]>> for BoundedFunction {
    type Error = Error;

    fn try_from(raw: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(raw.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<BoundedFunction> for Vec<[f64; 2]> {
    fn from(f: BoundedFunction) -> Self {
        f.values.iter().map(|z| [z.re, z.im]).collect()
    }
}

impl BoundedFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|z| !(z.norm() < FINITE_BOUND)) {
            return Err(Error::InvariantViolation(format!(
                "bounded function value at index {i} is not finite"
            )));
        }
        Ok(Self { values })
    }

    pub fn from_real(values: Vec<f64>) -> Result<Self> {
        Self::new(values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(grid: &CompactGrid, c: Complex64) -> Self {
        Self { values: vec![c; grid.len()] }
    }

    pub fn one(grid: &CompactGrid) -> Self {
        Self::constant(grid, Complex64::new(1.0, 0.0))
    }

    pub fn zero(grid: &CompactGrid) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: &CompactGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid.points().iter().map(|&t| f(t)).collect())
    }

    pub fn from_real_fn(grid: &CompactGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |t| Complex64::new(f(t), 0.0))
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.len(), other.len(), "grid size mismatch");
        Self { values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { values: self.values.iter().map(|&z| f(z)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    /// The involution `x ↦ x*`.
    pub fn adjoint(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn real_part(&self) -> Self {
        self.map(|z| Complex64::new(z.re, 0.0))
    }

    pub fn imag_part(&self) -> Self {
        self.map(|z| Complex64::new(z.im, 0.0))
    }

    /// `‖x‖₀ = max_t |x(t)|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    fn first_non_real(&self) -> Option<usize> {
        self.values.iter().position(|z| z.im.abs() > HERMITIAN_TOL)
    }

    pub fn is_hermitian(&self) -> bool {
        self.first_non_real().is_none()
    }

    fn require_hermitian(&self) -> Result<()> {
        match self.first_non_real() {
            Some(index) => Err(Error::NonHermitian { index, imag: self.values[index].im }),
            None => Ok(()),
        }
    }

    pub fn positivity_tolerance(&self) -> f64 {
        (POSITIVITY_REL_TOL * self.sup_norm()).max(POSITIVITY_FLOOR)
    }

    /// Membership in the positive cone.
    pub fn is_positive(&self) -> bool {
        let tol = self.positivity_tolerance();
        self.is_hermitian() && self.values.iter().all(|z| z.re >= -tol)
    }

    /// Splits a hermitian `x` into `(x₊, x₋, |x|)` with `x = x₊ − x₋`,
    /// `x₊x₋ = 0` and `|x| = x₊ + x₋`.
    pub fn decompose_hermitian(&self) -> Result<(Self, Self, Self)> {
        self.require_hermitian()?;
        let plus = self.map(|z| Complex64::new(z.re.max(0.0), 0.0));
        let minus = self.map(|z| Complex64::new((-z.re).max(0.0), 0.0));
        let abs = plus.add(&minus);
        Ok((plus, minus, abs))
    }

    /// `|x| = (x*x)^{1/2}`, built from the hermitian parts `x = x₁ + i x₂`.
    pub fn modulus(&self) -> Self {
        let (_, _, a1) = self.real_part().decompose_hermitian().expect("real part is hermitian");
        let (_, _, a2) = self.imag_part().decompose_hermitian().expect("imag part is hermitian");
        a1.zip_with(&a2, |p, q| Complex64::new(p.re.hypot(q.re), 0.0))
    }

    /// Applies `h` pointwise to a hermitian element.
    pub fn continuous_calculus(&self, h: &ScalarFunction) -> Result<Self> {
        self.require_hermitian()?;
        let values = self
            .values
            .iter()
            .map(|z| h.eval(z.re).map(|v| Complex64::new(v, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

/// A point-evaluation functional on the grid algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    index: usize,
}

impl Character {
    pub fn new(grid: &CompactGrid, index: usize) -> Result<Self> {
        if index >= grid.len() {
            return Err(Error::InvalidInput(format!(
                "character index {index} outside grid of {} points",
                grid.len()
            )));
        }
        Ok(Self { index })
    }

    /// All characters of the grid algebra.
    pub fn all(grid: &CompactGrid) -> impl Iterator<Item = Character> {
        (0..grid.len()).map(|index| Character { index })
    }

    /// Character at `index` without a grid bound check; evaluating it on a
    /// shorter function panics.
    pub fn from_index(index: usize) -> Self {
        Self { index }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn eval(&self, x: &BoundedFunction) -> Complex64 {
        x.values[self.index]
    }
}
