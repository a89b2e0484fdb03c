//! Spectra of quasi-positive elements, the `C_k` function classes, the
//! functional calculus `f(a) = g_k(a)(1 + a)^k`, partial multiplication and
//! quasi n-th roots.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended::ExtendedValue;
use crate::gelfand::MixedElement;
use crate::quasi::{QuasiElement, QuasiModel, Side};
use crate::scalar::ScalarFunction;

/// Numeric ceiling for `sup |g_k|` over the sampled finite spectrum.
pub const CLASS_SUP_THRESHOLD: f64 = 1e12;

/// The spectrum `σ(a) ⊂ [0, ∞]` of a quasi-positive element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    finite_values: Vec<f64>,
    contains_infinity: bool,
}

impl Spectrum {
    /// Sorted, deduplicated finite spectral values.
    pub fn finite_values(&self) -> &[f64] {
        &self.finite_values
    }

    pub fn contains_infinity(&self) -> bool {
        self.contains_infinity
    }

    pub fn max_finite(&self) -> f64 {
        self.finite_values.last().copied().unwrap_or(0.0)
    }

    /// `sup_{λ ∈ σ} |f(λ)|`, using `lim f` at ∞.
    pub fn sup_of(&self, f: &ScalarFunction) -> Result<f64> {
        let mut sup = if self.contains_infinity { f.limit_at_infinity().norm() } else { 0.0 };
        for &v in &self.finite_values {
            sup = sup.max(f.eval(v)?.abs());
        }
        Ok(sup)
    }
}

pub fn spectrum(a: &QuasiElement) -> Result<Spectrum> {
    a.require_quasi_positive()?;
    let mut finite_values: Vec<f64> = a.finite_part().iter().zip(a.values()).filter(|(_, v)| v.is_finite()).map(|(z, _)| z.re).collect();
    finite_values.sort_by(f64::total_cmp);
    finite_values.dedup();
    Ok(Spectrum { finite_values, contains_infinity: a.has_infinity() })
}

/// `g_k(λ) = f(λ) / (1 + λ)^k`.
fn g(f: &ScalarFunction, k: u32, v: f64) -> Result<f64> {
    Ok(f.eval(v)? / (1.0 + v).powi(k as i32))
}

/// Smallest `k ≤ n` with `g_k` bounded on `σ(a)`, or `None`.
///
/// Near ∞ the declared growth exponent decides; the sampled finite
/// spectrum guards against blow-up elsewhere.
pub fn class_index(f: &ScalarFunction, a: &QuasiElement, n: u32) -> Result<Option<u32>> {
    let sigma = spectrum(a)?;
    let growth = f.growth_exponent();
    for k in 0..=n {
        if sigma.contains_infinity && growth > k as f64 {
            continue;
        }
        let mut sup: f64 = 0.0;
        for &v in &sigma.finite_values {
            sup = sup.max(g(f, k, v)?.abs());
        }
        if sup <= CLASS_SUP_THRESHOLD {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `f(a)`, evaluated as `f(â(φ))` at finite points and `lim_{λ→∞} f(λ)` at
/// ∞-points. Requires `f ∈ C_k(σ(a))` for some `k ≤ n` and `a^n` defined.
pub fn apply_function(model: &QuasiModel, f: &ScalarFunction, a: &QuasiElement, n: u32) -> Result<QuasiElement> {
    class_index(f, a, n)?.ok_or(Error::NotInClass { n })?;
    evaluate(model, a, n, f.limit_at_infinity(), |v| f.eval(v))
}

/// `f(a)` through the factorisation `g_k(a)(1 + a)^k` for a given
/// admissible `k`.
pub fn apply_function_with(model: &QuasiModel, f: &ScalarFunction, a: &QuasiElement, n: u32, k: u32) -> Result<QuasiElement> {
    if k > n {
        return Err(Error::InvalidInput(format!("class index {k} exceeds n = {n}")));
    }
    class_index(f, a, k)?.ok_or(Error::NotInClass { n: k })?;
    evaluate(model, a, n, f.limit_at_infinity(), |v| Ok(g(f, k, v)? * (1.0 + v).powi(k as i32)))
}

fn evaluate(
    model: &QuasiModel,
    a: &QuasiElement,
    n: u32,
    limit: ExtendedValue,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<QuasiElement> {
    power(model, a, n)?;
    let mut values = Vec::with_capacity(a.len());
    for v in a.values() {
        values.push(match v.finite() {
            Some(z) => ExtendedValue::real(f(z.re)?),
            None => limit,
        });
    }
    model.element(values)
}

/// Schedule and stopping rule for partial products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductSchedule {
    /// `ε_k = base^{-k} / scale`.
    pub base: f64,
    pub tol: f64,
    pub decay: f64,
    pub window: usize,
    pub max_steps: usize,
}

impl Default for ProductSchedule {
    fn default() -> Self {
        Self { base: 2.0, tol: 1e-8, decay: 0.75, window: 5, max_steps: 40 }
    }
}

impl ProductSchedule {
    pub fn with_base(base: f64) -> Self {
        Self { base, ..Self::default() }
    }
}

/// Outcome of a convergent partial product.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialProduct {
    /// The pointwise extended product, which is the τ-limit.
    pub product: QuasiElement,
    /// Last regularized product, carrying the product's ∞-set.
    pub limit_estimate: QuasiElement,
    /// Successive-difference distances, one per step after the first.
    pub distances: Vec<f64>,
}

pub fn partial_product(model: &QuasiModel, a: &QuasiElement, b: &QuasiElement) -> Result<QuasiElement> {
    partial_product_with(model, a, b, &ProductSchedule::default()).map(|p| p.product)
}

/// `ab` as the τ-limit of `a_ε b_ε` along the schedule.
///
/// Returns `NotMultipliable` when the regularized products are not τ-Cauchy
/// or the pointwise product is not an element of the completion.
pub fn partial_product_with(model: &QuasiModel, a: &QuasiElement, b: &QuasiElement, schedule: &ProductSchedule) -> Result<PartialProduct> {
    a.require_quasi_positive()?;
    b.require_quasi_positive()?;
    if a.len() != b.len() {
        return Err(Error::InvalidInput("grid size mismatch".into()));
    }
    let pointwise: Vec<ExtendedValue> = a.values().iter().zip(b.values()).map(|(&u, &v)| u.mul_saturating(v)).collect();
    let mask: Vec<bool> = pointwise.iter().map(ExtendedValue::is_infinite).collect();
    let product = QuasiElement::new(pointwise)
        .map_err(|e| Error::NotMultipliable(format!("pointwise product: {e}")))?;
    let scale = a.finite_sup().max(b.finite_sup()).max(1.0);

    let step = |k: usize| -> Result<QuasiElement> {
        let eps = schedule.base.powi(-(k as i32)) / scale;
        let x = model.regularize(a, eps)?;
        let y = model.regularize(b, eps)?;
        let values = x
            .values()
            .iter()
            .zip(y.values())
            .zip(&mask)
            .map(|((&u, &v), &inf)| if inf { ExtendedValue::Infinity } else { ExtendedValue::from_complex(u * v) })
            .collect();
        QuasiElement::new(values)
    };

    let norm = model.seminorms(&product).into_iter().filter(|v| v.is_finite()).fold(1.0, f64::max);
    let threshold = schedule.tol * norm;
    let mut prev = step(0)?;
    let mut distances = Vec::new();
    let mut converged = false;
    for k in 1..=schedule.max_steps {
        let next = step(k)?;
        distances.push(model.max_distance(&next, &prev));
        prev = next;
        if !converged && cauchy(&distances, threshold, schedule) {
            converged = true;
        }
        if converged && distances.last().is_some_and(|&d| d <= 1e-4 * threshold) {
            break;
        }
    }
    if !converged {
        return Err(Error::NotMultipliable(format!(
            "regularized products are not τ-Cauchy after {} steps (last distance {:e})",
            schedule.max_steps,
            distances.last().copied().unwrap_or(f64::NAN)
        )));
    }
    model
        .validate(&product)
        .map_err(|e| Error::NotMultipliable(format!("pointwise product: {e}")))?;
    let gap = model.max_distance(&prev, &product);
    if gap > threshold {
        return Err(Error::NotMultipliable(format!("τ-limit differs from the pointwise product by {gap:e}")));
    }
    Ok(PartialProduct { product, limit_estimate: prev, distances })
}

fn cauchy(distances: &[f64], threshold: f64, schedule: &ProductSchedule) -> bool {
    let Some(&last) = distances.last() else { return false };
    if last > threshold || distances.len() < schedule.window + 1 {
        return false;
    }
    let tail = &distances[distances.len() - schedule.window - 1..];
    tail.windows(2).all(|w| w[1] == 0.0 || w[1] <= schedule.decay * w[0])
}

/// `a^n` by iterated partial multiplication.
pub fn power(model: &QuasiModel, a: &QuasiElement, n: u32) -> Result<QuasiElement> {
    a.require_quasi_positive()?;
    let mut acc = a.clone();
    for _ in 1..n {
        acc = partial_product(model, &acc, a)?;
    }
    Ok(acc)
}

/// `(ax)(by) = (ab)xy` for mixed elements without bounded summand.
pub fn mixed_product(model: &QuasiModel, m1: &MixedElement, m2: &MixedElement) -> Result<QuasiElement> {
    for m in [m1, m2] {
        if m.y().values().iter().any(|z| z.norm() != 0.0) {
            return Err(Error::InvalidInput("mixed product needs elements of the form ax".into()));
        }
    }
    let ab = partial_product(model, m1.a(), m2.a())?;
    model.module_mult(&m1.x().mul(m2.x()), &ab, Side::Left)
}

/// The quasi-positive `b` with `b^n = a`: pointwise `a(t)^{1/n}`, `∞ ↦ ∞`.
pub fn nth_root(a: &QuasiElement, n: u32) -> Result<QuasiElement> {
    if n == 0 {
        return Err(Error::InvalidInput("root order must be at least 1".into()));
    }
    a.require_quasi_positive()?;
    a.map_finite(|z| Complex64::new(z.re.max(0.0).powf(1.0 / n as f64), 0.0))
}

/// Relative τ-residual of `b^n` against `a`.
pub fn root_residual(model: &QuasiModel, a: &QuasiElement, b: &QuasiElement, n: u32) -> Result<f64> {
    let bn = power(model, b, n)?;
    if bn.infinity_set() != a.infinity_set() {
        return Ok(f64::INFINITY);
    }
    let scale = model.seminorms(a).into_iter().fold(1.0, f64::max);
    Ok(model.max_distance(&bn, a) / scale)
}
