use num_complex::Complex64;
use serde::Serialize;

use super::form::SesquilinearForm;
use crate::base::BoundedFunction;
use crate::error::{Error, Result};
use crate::quasi::QuasiElement;

/// An operator on `H_φ` that is diagonal in the support basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DiagonalOperator {
    pub diagonal: Vec<Complex64>,
}

impl DiagonalOperator {
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.diagonal.iter().zip(v).map(|(d, x)| d * x).collect()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { diagonal: self.apply(&other.diagonal) }
    }

    pub fn adjoint(&self) -> Self {
        Self { diagonal: self.diagonal.iter().map(|z| z.conj()).collect() }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.diagonal.iter().zip(&other.diagonal).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn norm(&self) -> f64 {
        self.diagonal.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// `(π_φ, λ_φ, H_φ)` for a diagonal form: `H_φ` is spanned by the support
/// points, `λ_φ(x) = (√w(t) x(t))_t` and `π_φ(x)` multiplies by `x(t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GnsData {
    support: Vec<usize>,
    sqrt_weights: Vec<f64>,
}

pub fn gns(form: &SesquilinearForm) -> GnsData {
    let support = form.support();
    let sqrt_weights = support.iter().map(|&i| form.weights()[i].sqrt()).collect();
    GnsData { support, sqrt_weights }
}

pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

impl GnsData {
    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn lambda(&self, x: &BoundedFunction) -> Vec<Complex64> {
        self.support.iter().zip(&self.sqrt_weights).map(|(&i, s)| x.get(i) * *s).collect()
    }

    pub fn pi(&self, x: &BoundedFunction) -> DiagonalOperator {
        DiagonalOperator { diagonal: self.support.iter().map(|&i| x.get(i)).collect() }
    }
}

/// Step count of the truncation schedule in [`extend_rep`].
const EXTENSION_STEPS: i32 = 60;

/// `π_φ(a)` for a quasi element, as the limit of `π_φ(a (1 + ε|a|)^{-1})`
/// along `ε_k = 2^{-k} / sup|a|` on the support.
pub fn extend_rep(g: &GnsData, a: &QuasiElement) -> Result<DiagonalOperator> {
    let mut values = Vec::with_capacity(g.dim());
    for &i in &g.support {
        match a.get(i).finite() {
            Some(z) => values.push(z),
            None => return Err(Error::UnboundedOnSupport { index: i }),
        }
    }
    let scale = values.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
    let truncate = |eps: f64| DiagonalOperator {
        diagonal: values.iter().map(|z| z / (1.0 + eps * z.norm())).collect(),
    };
    let mut current = truncate(1.0 / scale);
    for k in 1..=EXTENSION_STEPS {
        let next = truncate(2f64.powi(-k) / scale);
        let step = next.distance(&current);
        current = next;
        if step <= f64::EPSILON * scale {
            break;
        }
    }
    Ok(current)
}

/// The direct sum `⊕ π_φ` over a list of forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectSum {
    pub blocks: Vec<GnsData>,
}

impl DirectSum {
    pub fn new(forms: &[SesquilinearForm]) -> Self {
        Self { blocks: forms.iter().map(gns).collect() }
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(GnsData::dim).sum()
    }

    /// First block and local index where `a` and `b` act differently.
    ///
    /// Points where both are ∞ are not separated; one ∞ against a finite
    /// value is.
    pub fn separating_point(&self, a: &QuasiElement, b: &QuasiElement, tol: f64) -> Option<(usize, usize)> {
        for (k, g) in self.blocks.iter().enumerate() {
            for (j, &i) in g.support.iter().enumerate() {
                let differ = match (a.get(i).finite(), b.get(i).finite()) {
                    (Some(x), Some(y)) => (x - y).norm() > tol * x.norm().max(y.norm()).max(1.0),
                    (None, None) => false,
                    _ => true,
                };
                if differ {
                    return Some((k, j));
                }
            }
        }
        None
    }
}
