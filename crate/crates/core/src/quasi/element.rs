use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::base::{BoundedFunction, HERMITIAN_TOL, POSITIVITY_FLOOR, POSITIVITY_REL_TOL};
use crate::error::{Error, Result};
use crate::extended::ExtendedValue;

/// Width of the smallest grid window that may not be filled with ∞-points.
pub const INFINITY_WINDOW: usize = 3;

/// Checks the discrete nowhere-density rule: no `INFINITY_WINDOW`
/// consecutive infinite values.
pub fn check_infinity_window(values: &[ExtendedValue]) -> Result<()> {
    let mut run = 0;
    for (i, v) in values.iter().enumerate() {
        if v.is_infinite() {
            run += 1;
            if run >= INFINITY_WINDOW {
                return Err(Error::InvariantViolation(format!(
                    "∞-set contains {INFINITY_WINDOW} adjacent points ending at index {i}"
                )));
            }
        } else {
            run = 0;
        }
    }
    Ok(())
}

/// An element of the completion: one extended value per grid point.
///
/// Only the grid-level invariants are checked here; seminorm finiteness
/// depends on the topology and is checked by [`super::QuasiModel::element`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ExtendedValue>", into = "Vec<ExtendedValue>")]
pub struct QuasiElement {
    values: Vec<ExtendedValue>,
    hermitian: bool,
}

impl TryFrom<Vec<ExtendedValue>> for QuasiElement {
    type Error = Error;

    fn try_from(values: Vec<ExtendedValue>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<QuasiElement> for Vec<ExtendedValue> {
    fn from(a: QuasiElement) -> Self {
        a.values
    }
}

impl QuasiElement {
    pub fn new(values: Vec<ExtendedValue>) -> Result<Self> {
        for v in &values {
            v.validate()?;
        }
        check_infinity_window(&values)?;
        let hermitian = values
            .iter()
            .all(|v| v.finite().map_or(true, |z| z.im.abs() <= HERMITIAN_TOL));
        Ok(Self { values, hermitian })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| ExtendedValue::real(v)).collect())
    }

    pub fn from_bounded(x: &BoundedFunction) -> Self {
        Self {
            values: x.values().iter().map(|&z| ExtendedValue::Finite(z)).collect(),
            hermitian: x.is_hermitian(),
        }
    }

    pub fn values(&self) -> &[ExtendedValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> ExtendedValue {
        self.values[i]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn infinity_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.values[i].is_infinite()).collect()
    }

    pub fn has_infinity(&self) -> bool {
        self.values.iter().any(ExtendedValue::is_infinite)
    }

    /// Largest finite modulus.
    pub fn finite_sup(&self) -> f64 {
        self.values.iter().filter_map(|v| v.finite()).fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Finite values with ∞-points replaced by zero.
    pub fn finite_part(&self) -> Vec<Complex64> {
        self.values.iter().map(|v| v.finite().unwrap_or_default()).collect()
    }

    /// The bounded function with the same values, if there is no ∞-point.
    pub fn to_bounded(&self) -> Option<BoundedFunction> {
        let values = self.values.iter().map(|v| v.finite()).collect::<Option<Vec<_>>>()?;
        BoundedFunction::new(values).ok()
    }

    pub fn adjoint(&self) -> Self {
        Self { values: self.values.iter().map(|v| v.conj()).collect(), hermitian: self.hermitian }
    }

    pub fn positivity_tolerance(&self) -> f64 {
        (POSITIVITY_REL_TOL * self.finite_sup()).max(POSITIVITY_FLOOR)
    }

    /// First index violating quasi-positivity, if any.
    ///
    /// ∞-points count as `+∞`; finite values must be real and `≥ −tol`.
    pub fn quasi_positivity_violation(&self) -> Option<usize> {
        let tol = self.positivity_tolerance();
        self.values.iter().position(|v| match v.finite() {
            Some(z) => z.im.abs() > HERMITIAN_TOL || z.re < -tol,
            None => false,
        })
    }

    pub fn is_quasi_positive(&self) -> bool {
        self.quasi_positivity_violation().is_none()
    }

    pub(crate) fn require_quasi_positive(&self) -> Result<()> {
        match self.quasi_positivity_violation() {
            Some(index) => Err(Error::NotQuasiPositive { index }),
            None => Ok(()),
        }
    }

    /// Pointwise sum with `∞ + z = ∞`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_len(other)?;
        Self::new(self.values.iter().zip(&other.values).map(|(&a, &b)| a.add(b)).collect())
    }

    /// Pointwise scaling with `0·∞ = 0`.
    pub fn scale(&self, c: Complex64) -> Self {
        let values = self.values.iter().map(|v| v.scale(c)).collect();
        Self::new(values).expect("scaling cannot enlarge the ∞-set")
    }

    /// Pointwise product with a bounded function (`0·∞ = 0`).
    pub fn mul_bounded(&self, x: &BoundedFunction) -> Result<Self> {
        if x.len() != self.len() {
            return Err(Error::InvalidInput("grid size mismatch".into()));
        }
        Self::new(self.values.iter().zip(x.values()).map(|(&a, &c)| a.scale(c)).collect())
    }

    /// Pointwise `|a(t)|^q`-style map on finite values; ∞ stays ∞.
    pub fn map_finite(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(
            self.values
                .iter()
                .map(|v| match v {
                    ExtendedValue::Finite(z) => ExtendedValue::from_complex(f(*z)),
                    ExtendedValue::Infinity => ExtendedValue::Infinity,
                })
                .collect(),
        )
    }

    /// Exact equality of ∞ tags and finite values within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.len() == other.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(b, tol))
    }

    fn require_same_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::InvalidInput(format!(
                "grid size mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }
}
