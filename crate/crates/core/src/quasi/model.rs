use num_complex::Complex64;
use serde::Serialize;

use super::{QuasiElement, SeminormFamily};
use crate::base::{BoundedFunction, CompactGrid};
use crate::error::{Error, Result};
use crate::extended::{ExtendedValue, FINITE_BOUND};

/// Which grid functions make up the base algebra `A₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraKind {
    /// Every bounded grid function (the `L^∞` model).
    Linf,
    /// Grid functions whose discrete slope stays below `max_slope`; a
    /// finite stand-in for the continuous functions.
    Lipschitz { max_slope: f64 },
}

impl AlgebraKind {
    /// Largest discrete slope `|x(t_{i+1}) − x(t_i)| / h`.
    pub fn slope(grid: &CompactGrid, x: &BoundedFunction) -> f64 {
        let h = grid.spacing();
        x.values().windows(2).fold(0.0, |m, w| m.max((w[1] - w[0]).norm() / h))
    }

    pub fn contains(&self, grid: &CompactGrid, x: &BoundedFunction) -> bool {
        match self {
            AlgebraKind::Linf => true,
            AlgebraKind::Lipschitz { max_slope } => Self::slope(grid, x) <= *max_slope * (1.0 + 1e-12),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Grid, topology and base algebra: everything needed to operate on
/// quasi elements.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiModel {
    grid: CompactGrid,
    family: SeminormFamily,
    algebra: AlgebraKind,
}

impl QuasiModel {
    pub fn new(grid: CompactGrid, family: SeminormFamily, algebra: AlgebraKind) -> Self {
        Self { grid, family, algebra }
    }

    /// `L^p` over `L^∞` on `[a, b]` with unit weight.
    pub fn lp(a: f64, b: f64, n: usize, p: f64) -> Result<Self> {
        let grid = CompactGrid::uniform(a, b, n)?;
        let family = SeminormFamily::lp(&grid, p)?;
        Ok(Self::new(grid, family, AlgebraKind::Linf))
    }

    pub fn grid(&self) -> &CompactGrid {
        &self.grid
    }

    pub fn family(&self) -> &SeminormFamily {
        &self.family
    }

    pub fn algebra(&self) -> AlgebraKind {
        self.algebra
    }

    /// Builds a quasi element and checks every model invariant.
    pub fn element(&self, values: Vec<ExtendedValue>) -> Result<QuasiElement> {
        let a = QuasiElement::new(values)?;
        self.validate(&a)?;
        Ok(a)
    }

    /// Samples a real function of `t`; non-finite or overflowing samples
    /// become ∞-points.
    pub fn element_from_fn(&self, f: impl Fn(f64) -> f64) -> Result<QuasiElement> {
        let mut values = Vec::with_capacity(self.grid.len());
        for &t in self.grid.points() {
            let v = f(t);
            if v.is_nan() {
                return Err(Error::DomainError { value: t, reason: "sample is NaN".into() });
            }
            values.push(ExtendedValue::real(v));
        }
        self.element(values)
    }

    pub fn validate(&self, a: &QuasiElement) -> Result<()> {
        if a.len() != self.grid.len() {
            return Err(Error::InvalidInput(format!(
                "element has {} values, grid has {} points",
                a.len(),
                self.grid.len()
            )));
        }
        for idx in 0..self.family.len() {
            let s = self.family.eval(idx, a);
            if !(s < FINITE_BOUND) {
                return Err(Error::InvariantViolation(format!("seminorm {idx} diverges")));
            }
        }
        Ok(())
    }

    pub fn embed(&self, x: &BoundedFunction) -> QuasiElement {
        QuasiElement::from_bounded(x)
    }

    /// `xa` or `ax`; the model is commutative so both sides agree.
    pub fn module_mult(&self, x: &BoundedFunction, a: &QuasiElement, _side: Side) -> Result<QuasiElement> {
        let out = a.mul_bounded(x)?;
        self.validate(&out)?;
        Ok(out)
    }

    /// `(1 + a)^{-1}` with `∞ ↦ 0`.
    pub fn invert_one_plus(&self, a: &QuasiElement) -> Result<BoundedFunction> {
        a.require_quasi_positive()?;
        let values = a
            .values()
            .iter()
            .map(|v| match v.finite() {
                Some(z) => Complex64::new(1.0 / (1.0 + z.re), 0.0),
                None => Complex64::new(0.0, 0.0),
            })
            .collect();
        BoundedFunction::new(values)
    }

    /// `a_ε = a(1 + εa)^{-1}` with `∞ ↦ 1/ε`.
    pub fn regularize(&self, a: &QuasiElement, eps: f64) -> Result<BoundedFunction> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidInput(format!("regularization parameter {eps} must be positive")));
        }
        a.require_quasi_positive()?;
        let values = a
            .values()
            .iter()
            .map(|v| match v.finite() {
                Some(z) => Complex64::new(z.re / (1.0 + eps * z.re), 0.0),
                None => Complex64::new(1.0 / eps, 0.0),
            })
            .collect();
        BoundedFunction::new(values)
    }

    pub fn seminorm(&self, a: &QuasiElement, idx: usize) -> f64 {
        self.family.eval(idx, a)
    }

    pub fn seminorms(&self, a: &QuasiElement) -> Vec<f64> {
        (0..self.family.len()).map(|i| self.family.eval(i, a)).collect()
    }

    /// `p_λ(a − b)` over the points where both are finite. Validated
    /// elements have null ∞-sets, so the remaining points carry the value.
    pub fn distance(&self, a: &QuasiElement, b: &QuasiElement, idx: usize) -> f64 {
        let diff: Vec<Complex64> = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| match (x.finite(), y.finite()) {
                (Some(x), Some(y)) => x - y,
                _ => Complex64::new(0.0, 0.0),
            })
            .collect();
        self.family.eval_finite(idx, &diff)
    }

    /// Largest distance over the whole family.
    pub fn max_distance(&self, a: &QuasiElement, b: &QuasiElement) -> f64 {
        (0..self.family.len()).map(|i| self.distance(a, b, i)).fold(0.0, f64::max)
    }

    pub fn distance_bounded(&self, a: &QuasiElement, x: &BoundedFunction) -> f64 {
        self.max_distance(a, &QuasiElement::from_bounded(x))
    }

    pub fn is_quasi_positive(&self, a: &QuasiElement) -> bool {
        a.is_quasi_positive()
    }

    /// Truncations `min(a, 2^k)` for `k = 0..levels`: a net of positive
    /// bounded functions approximating a quasi-positive `a`.
    pub fn truncation_net(&self, a: &QuasiElement, levels: u32) -> Result<Vec<BoundedFunction>> {
        a.require_quasi_positive()?;
        (0..levels)
            .map(|k| {
                let cap = (k as f64).exp2();
                BoundedFunction::from_real(
                    a.values()
                        .iter()
                        .map(|v| v.finite().map_or(cap, |z| z.re.max(0.0).min(cap)))
                        .collect(),
                )
            })
            .collect()
    }

    /// Certifies quasi-positivity by an explicit net: every truncation is
    /// positive and the net converges to `a` in every seminorm. Returns the
    /// final distance.
    pub fn positivity_witness(&self, a: &QuasiElement, tol: f64) -> Option<f64> {
        if !a.is_quasi_positive() {
            return None;
        }
        let levels = (a.finite_sup().max(1.0).log2().ceil() as u32 + 2).min(1100);
        let net = self.truncation_net(a, levels).ok()?;
        if !net.iter().all(BoundedFunction::is_positive) {
            return None;
        }
        let last = net.last()?;
        // Positive parts differ from `a` only within the positivity tolerance.
        let d = self.distance_bounded(a, last);
        let scale = self.seminorms(a).into_iter().fold(1.0, f64::max);
        (d <= tol * scale).then_some(d)
    }

    pub fn wedge_sum(&self, a: &QuasiElement, b: &QuasiElement) -> Result<QuasiElement> {
        a.require_quasi_positive()?;
        b.require_quasi_positive()?;
        let out = a.add(b)?;
        self.validate(&out)?;
        Ok(out)
    }

    pub fn wedge_scale(&self, a: &QuasiElement, scalar: f64) -> Result<QuasiElement> {
        if !(scalar >= 0.0 && scalar.is_finite()) {
            return Err(Error::InvalidInput(format!("wedge scalar {scalar} must be nonnegative")));
        }
        a.require_quasi_positive()?;
        let out = a.scale(Complex64::new(scalar, 0.0));
        self.validate(&out)?;
        Ok(out)
    }

    /// `a + scalar·b` inside the quasi-positive wedge.
    pub fn wedge_ops(&self, a: &QuasiElement, b: &QuasiElement, scalar: f64) -> Result<QuasiElement> {
        let sb = self.wedge_scale(b, scalar)?;
        self.wedge_sum(a, &sb)
    }
}
