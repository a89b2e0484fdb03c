//! Extension of characters to `ℂ*`-valued functionals on mixed elements
//! `ax + y`, and the resulting extended Gelfand transform.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::base::{BoundedFunction, Character};
use crate::error::{Error, Result};
use crate::extended::ExtendedValue;
use crate::quasi::{check_infinity_window, QuasiElement};
use crate::report::{Report, Tally, Verdict};

/// Denominators `φ((1 + a|x|)^{-1})` at or below this are treated as zero.
pub const DENOMINATOR_TOL: f64 = 1e-13;

const SUITE: &str = "gelfand";

/// The element `ax + y` with `a` quasi-positive and `x, y` bounded.
///
/// Only this form is accepted: the functional is not extended to the
/// linear span of such elements.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedElement {
    a: QuasiElement,
    x: BoundedFunction,
    y: BoundedFunction,
    /// `a·|x|`, with `|x|` built from the hermitian parts of `x`.
    a_abs_x: QuasiElement,
    x_is_zero: bool,
}

impl MixedElement {
    pub fn new(a: QuasiElement, x: BoundedFunction, y: BoundedFunction) -> Result<Self> {
        if let Some(index) = a.quasi_positivity_violation() {
            return Err(Error::NotQuasiPositive { index });
        }
        if x.len() != a.len() || y.len() != a.len() {
            return Err(Error::InvalidInput("mixed element parts live on different grids".into()));
        }
        let a_abs_x = a.mul_bounded(&x.modulus())?;
        let x_is_zero = x.values().iter().all(|z| z.norm() == 0.0);
        Ok(Self { a, x, y, a_abs_x, x_is_zero })
    }

    /// `a = a·1 + 0`.
    pub fn quasi(a: QuasiElement) -> Result<Self> {
        let n = a.len();
        let one = BoundedFunction::new(vec![Complex64::new(1.0, 0.0); n])?;
        let zero = BoundedFunction::new(vec![Complex64::new(0.0, 0.0); n])?;
        Self::new(a, one, zero)
    }

    /// `y = 0·0 + y`.
    pub fn bounded(y: BoundedFunction) -> Result<Self> {
        let n = y.len();
        let zero = vec![ExtendedValue::ZERO; n];
        Self::new(QuasiElement::new(zero)?, BoundedFunction::new(vec![Complex64::new(0.0, 0.0); n])?, y)
    }

    pub fn a(&self) -> &QuasiElement {
        &self.a
    }

    pub fn x(&self) -> &BoundedFunction {
        &self.x
    }

    pub fn y(&self) -> &BoundedFunction {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `φ((1 + a|x|)^{-1})`.
    pub fn denominator(&self, ch: Character) -> f64 {
        match self.a_abs_x.get(ch.index()).finite() {
            Some(z) => 1.0 / (1.0 + z.re),
            None => 0.0,
        }
    }

    /// The adjoint `a x* + y*`.
    pub fn adjoint(&self) -> Self {
        Self::new(self.a.clone(), self.x.adjoint(), self.y.adjoint()).expect("same a")
    }
}

/// `φ′(ax + y)`.
///
/// Returns `None` where the value depends on more than the grid values:
/// `a` is infinite at the character while `x` vanishes there without being
/// the zero element, so `φ′(ax)` is not determined by `φ′(a)` and `φ(x)`.
pub fn phi_prime(ch: Character, m: &MixedElement) -> Option<ExtendedValue> {
    let i = ch.index();
    let x = m.x.get(i);
    let y = m.y.get(i);
    match m.a.get(i) {
        ExtendedValue::Infinity if x.norm() == 0.0 => {
            if m.x_is_zero {
                Some(ExtendedValue::Finite(y))
            } else {
                None
            }
        }
        ExtendedValue::Infinity => Some(ExtendedValue::Infinity),
        ExtendedValue::Finite(a) => {
            let d = m.denominator(ch);
            if d.abs() <= DENOMINATOR_TOL {
                return Some(ExtendedValue::Infinity);
            }
            let numerator = (a * x + y) * d;
            Some(ExtendedValue::from_complex(numerator / d))
        }
    }
}

/// The transform `\widehat{ax+y}` as a function on the characters.
///
/// Undetermined values serialise as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtendedFunction {
    values: Vec<Option<ExtendedValue>>,
}

impl ExtendedFunction {
    pub fn values(&self) -> &[Option<ExtendedValue>] {
        &self.values
    }

    pub fn get(&self, i: usize) -> Option<ExtendedValue> {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn infinity_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.values[i] == Some(ExtendedValue::Infinity)).collect()
    }

    pub fn indeterminate_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.values[i].is_none()).collect()
    }

    /// `sup |f|` over the determined values.
    pub fn sup(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Exact ∞ tags and finite values within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.len() == other.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => a.approx_eq(b, tol),
                (None, None) => true,
                _ => false,
            })
    }
}

/// Evaluates `φ′` at every character and checks the window rule on the
/// ∞-set.
pub fn transform(m: &MixedElement) -> Result<ExtendedFunction> {
    let values: Vec<Option<ExtendedValue>> =
        (0..m.len()).map(|i| phi_prime(Character::from_index(i), m)).collect();
    let tags: Vec<ExtendedValue> = values.iter().map(|v| v.unwrap_or(ExtendedValue::ZERO)).collect();
    check_infinity_window(&tags)?;
    Ok(ExtendedFunction { values })
}

/// Pointwise extended evaluation of `a(t)x(t) + y(t)`, used as an
/// independent reference for the transform at determined points.
pub fn pointwise(m: &MixedElement) -> Vec<ExtendedValue> {
    (0..m.len())
        .map(|i| m.a.get(i).scale(m.x.get(i)).add(ExtendedValue::Finite(m.y.get(i))))
        .collect()
}

fn value_gap(lhs: Option<ExtendedValue>, rhs: Option<ExtendedValue>) -> f64 {
    match (lhs, rhs) {
        (Some(ExtendedValue::Finite(a)), Some(ExtendedValue::Finite(b))) => (a - b).norm() / b.norm().max(1.0),
        (Some(ExtendedValue::Infinity), Some(ExtendedValue::Infinity)) => 0.0,
        (None, _) | (_, None) => 0.0,
        _ => f64::INFINITY,
    }
}

/// Additivity, homogeneity, the product law and the denominator
/// implications of `φ′`, over the given samples and characters.
pub fn functional_laws_check(samples: &[MixedElement], chars: &[Character], tol: f64) -> Report {
    let mut add = Tally::new();
    let mut hom = Tally::new();
    let mut prod = Tally::new();
    let mut den = Tally::new();
    let n = samples.first().map_or(0, MixedElement::len);
    let one = BoundedFunction::new(vec![Complex64::new(1.0, 0.0); n]).expect("finite");
    for (s, m) in samples.iter().enumerate() {
        let a_only = MixedElement::quasi(m.a.clone()).expect("quasi-positive");
        let next = &samples[(s + 1) % samples.len()];
        let sum = m.a.add(&next.a).ok().and_then(|ab| MixedElement::quasi(ab).ok());
        let next_only = MixedElement::quasi(next.a.clone()).expect("quasi-positive");
        let lambda = Complex64::new(0.5 + s as f64 % 3.0, (s % 2) as f64);
        let scaled_a = MixedElement::new(m.a.clone(), one.scale(lambda), one.scale(Complex64::new(0.0, 0.0)))
            .expect("quasi-positive");
        let zero_a = MixedElement::new(m.a.clone(), one.scale(Complex64::new(0.0, 0.0)), one.scale(Complex64::new(0.0, 0.0)))
            .expect("quasi-positive");
        for &ch in chars {
            let i = ch.index();
            let pa = phi_prime(ch, &a_only);
            if let Some(sum) = &sum {
                let pb = phi_prime(ch, &next_only);
                let lhs = phi_prime(ch, sum);
                let rhs = match (pa, pb) {
                    (Some(a), Some(b)) => Some(a.add(b)),
                    _ => None,
                };
                let gap = value_gap(lhs, rhs);
                add.record(gap <= tol, gap, || json!({"sample": s, "char": i}));
            }
            let lhs = phi_prime(ch, &scaled_a);
            let gap = value_gap(lhs, pa.map(|v| v.scale(lambda)));
            let zero = phi_prime(ch, &zero_a);
            let zero_gap = value_gap(zero, Some(ExtendedValue::ZERO));
            hom.record(gap <= tol && zero_gap <= tol, gap.max(zero_gap), || json!({"sample": s, "char": i, "lambda": [lambda.re, lambda.im]}));

            let x = ch.eval(&m.x);
            let ambiguous = pa == Some(ExtendedValue::Infinity) && x.norm() == 0.0;
            if !ambiguous {
                let lhs = phi_prime(ch, m);
                let rhs = pa.map(|v| v.scale(x).add(ExtendedValue::Finite(ch.eval(&m.y))));
                let gap = value_gap(lhs, rhs);
                prod.record(gap <= tol, gap, || json!({"sample": s, "char": i}));
            }

            let d_abs = m.denominator(ch);
            let d_a = a_only.denominator(ch);
            let i_ok = d_abs.abs() > DENOMINATOR_TOL || d_a.abs() <= DENOMINATOR_TOL;
            let ii_ok = !(d_a.abs() <= DENOMINATOR_TOL && x.norm() != 0.0) || d_abs.abs() <= DENOMINATOR_TOL;
            den.record(i_ok && ii_ok, if i_ok && ii_ok { 0.0 } else { 1.0 }, || json!({"sample": s, "char": i, "d_abs_x": d_abs, "d_a": d_a}));
        }
    }
    let mut r = Report::new();
    r.push(add.into_check(SUITE, "additivity"));
    r.push(hom.into_check(SUITE, "homogeneity"));
    r.push(prod.into_check(SUITE, "product_law"));
    r.push(den.into_check(SUITE, "denominator_implications"));
    r
}

fn product_gap(lhs: &ExtendedFunction, rhs: &[Option<ExtendedValue>]) -> (f64, usize) {
    let mut worst: f64 = 0.0;
    let mut at = 0;
    for (i, (l, r)) in lhs.values().iter().zip(rhs).enumerate() {
        let g = value_gap(*l, *r);
        if g > worst {
            worst = g;
            at = i;
        }
    }
    (worst, at)
}

fn times(f: &ExtendedFunction, x: &BoundedFunction) -> Vec<Option<ExtendedValue>> {
    f.values().iter().zip(x.values()).map(|(v, &c)| v.map(|v| v.scale(c))).collect()
}

/// Wedge isomorphism checks for `Φ = transform`: injectivity, additivity
/// and homogeneity on the quasi-positive samples, isometric *-isomorphism
/// on `A₀`, and the four product laws.
pub fn wedge_iso_check(quasi: &[QuasiElement], bounded: &[BoundedFunction], tol: f64) -> Report {
    let mut inj = Tally::new();
    let mut add = Tally::new();
    let mut hom = Tally::new();
    let mut iso = Tally::new();
    let mut laws = Tally::new();
    let phi = |a: &QuasiElement| transform(&MixedElement::quasi(a.clone()).expect("quasi-positive"));
    let phi_ax = |a: &QuasiElement, x: &BoundedFunction| {
        let n = x.len();
        let zero = BoundedFunction::new(vec![Complex64::new(0.0, 0.0); n]).expect("finite");
        transform(&MixedElement::new(a.clone(), x.clone(), zero).expect("quasi-positive"))
    };
    let transforms: Vec<Option<ExtendedFunction>> = quasi.iter().map(|a| phi(a).ok()).collect();
    for (s, a) in quasi.iter().enumerate() {
        let b = &quasi[(s + 1) % quasi.len()];
        let x = &bounded[s % bounded.len()];
        let x2 = &bounded[(s + 1) % bounded.len()];
        let (Some(fa), Some(fb)) = (&transforms[s], &transforms[(s + 1) % quasi.len()]) else {
            continue;
        };
        if a != b {
            let distinct = !fa.approx_eq(fb, 0.0);
            inj.record(distinct, if distinct { 0.0 } else { 1.0 }, || json!({"sample": s}));
        }
        if let Ok(ab) = a.add(b) {
            if let Ok(fab) = phi(&ab) {
                let rhs: Vec<_> = fa.values().iter().zip(fb.values()).map(|(u, v)| Some(u.unwrap().add(v.unwrap()))).collect();
                let (g, at) = product_gap(&fab, &rhs);
                add.record(g <= tol, g, || json!({"sample": s, "char": at}));
                if let Ok(fabx) = phi_ax(&ab, x) {
                    let rhs = times(&fab, x);
                    let (g, at) = product_gap(&fabx, &rhs);
                    laws.record(g <= tol, g, || json!({"law": "sum_times_x", "sample": s, "char": at}));
                }
            }
        }
        let lambda = 0.25 + (s % 7) as f64;
        if let Ok(fl) = phi(&a.scale(Complex64::new(lambda, 0.0))) {
            let rhs: Vec<_> = fa.values().iter().map(|v| v.map(|v| v.scale(Complex64::new(lambda, 0.0)))).collect();
            let (g, at) = product_gap(&fl, &rhs);
            hom.record(g <= tol, g, || json!({"sample": s, "char": at, "lambda": lambda}));
            if let Ok(flx) = phi_ax(&a.scale(Complex64::new(lambda, 0.0)), x) {
                let rhs: Vec<_> = times(fa, x).into_iter().map(|v| v.map(|v| v.scale(Complex64::new(lambda, 0.0)))).collect();
                let (g, at) = product_gap(&flx, &rhs);
                laws.record(g <= tol, g, || json!({"law": "scaled_times_x", "sample": s, "char": at}));
            }
        }
        if let Ok(fax) = phi_ax(a, x) {
            let (g, at) = product_gap(&fax, &times(fa, x));
            laws.record(g <= tol, g, || json!({"law": "times_x", "sample": s, "char": at}));
        }
        if let Ok(fsum) = phi_ax(a, &x.add(x2)) {
            let rhs: Vec<_> = fa.values().iter().zip(x.values()).zip(x2.values())
                .map(|((v, &c1), &c2)| v.map(|v| v.scale(c1 + c2)))
                .collect();
            let (g, at) = product_gap(&fsum, &rhs);
            laws.record(g <= tol, g, || json!({"law": "times_sum", "sample": s, "char": at}));
        }
    }
    for (s, x) in bounded.iter().enumerate() {
        let Ok(fx) = transform(&MixedElement::bounded(x.clone()).expect("bounded")) else { continue };
        let y = &bounded[(s + 1) % bounded.len()];
        let fy = transform(&MixedElement::bounded(y.clone()).expect("bounded")).expect("bounded");
        let fxy = transform(&MixedElement::bounded(x.mul(y)).expect("bounded")).expect("bounded");
        let fxs = transform(&MixedElement::bounded(x.adjoint()).expect("bounded")).expect("bounded");
        let norm_gap = (fx.sup() - x.sup_norm()).abs();
        let mut gap = norm_gap;
        for i in 0..x.len() {
            let (u, v) = (fx.get(i).and_then(|v| v.finite()), fy.get(i).and_then(|v| v.finite()));
            let (Some(u), Some(v)) = (u, v) else {
                gap = f64::INFINITY;
                break;
            };
            gap = gap.max(value_gap(fxy.get(i), Some(ExtendedValue::Finite(u * v))));
            gap = gap.max(value_gap(fxs.get(i), Some(ExtendedValue::Finite(u.conj()))));
        }
        iso.record(norm_gap == 0.0 && gap <= tol, gap, || json!({"sample": s, "sup_gap": norm_gap}));
    }
    let mut r = Report::new();
    for (name, t) in [("injective", inj), ("additive", add), ("homogeneous", hom), ("isometry", iso), ("product_laws", laws)] {
        let empty = t.trials == 0;
        let mut c = t.into_check(SUITE, name);
        if empty {
            c.verdict = Verdict::Indeterminate;
        }
        r.push(c);
    }
    r
}

/// Continuity near an ∞-point: `|φ′|` along the `steps` characters closest
/// to `center` (approaching from the side of larger indices when
/// possible) increases monotonically and exceeds `bound` on all of them.
pub fn blows_up_towards(m: &MixedElement, center: usize, steps: usize, bound: f64) -> bool {
    let right = center + steps < m.len();
    let mods: Vec<f64> = (1..=steps)
        .rev()
        .map(|d| if right { center + d } else { center - d })
        .map(|i| phi_prime(Character::from_index(i), m).map_or(f64::NAN, |v| v.norm()))
        .collect();
    let reaches = phi_prime(Character::from_index(center), m) == Some(ExtendedValue::Infinity);
    reaches && mods.iter().all(|&v| v > bound) && mods.windows(2).all(|w| w[1] > w[0])
}

/// `φ′` agreement on pairs of representations of the same pointwise
/// function: ∞ tags and indeterminacy must match exactly, finite values
/// within `tol` (relative to `max(1, |value|)`).
pub fn agreement_check(pairs: &[(MixedElement, MixedElement)], tol: f64) -> Report {
    let mut t = Tally::new();
    for (s, (m1, m2)) in pairs.iter().enumerate() {
        let mut worst: f64 = 0.0;
        let mut at = None;
        for i in 0..m1.len() {
            let ch = Character::from_index(i);
            let (u, v) = (phi_prime(ch, m1), phi_prime(ch, m2));
            let g = match (u, v) {
                (None, None) => 0.0,
                (Some(_), None) | (None, Some(_)) => f64::INFINITY,
                _ => value_gap(u, v),
            };
            if g > worst {
                worst = g;
                at = Some(i);
            }
        }
        t.record(worst <= tol, worst, || json!({"pair": s, "char": at}));
    }
    let mut r = Report::new();
    r.push(t.into_check(SUITE, "well_defined"));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::CompactGrid;
    use crate::quasi::QuasiModel;
    use crate::sampling;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn model(n: usize) -> QuasiModel {
        QuasiModel::lp(0.0, 1.0, n, 1.0).unwrap()
    }

    fn inv_sqrt(m: &QuasiModel, coef: f64) -> QuasiElement {
        m.element_from_fn(|t| coef * t.powf(-0.5)).unwrap()
    }

    #[test]
    fn extends_characters_exactly() {
        let g = CompactGrid::uniform(0.0, 1.0, 257).unwrap();
        let mut rng = sampling::seeded(3);
        let x = sampling::bounded(&mut rng, &g, 5.0);
        let m = MixedElement::bounded(x.clone()).unwrap();
        for ch in Character::all(&g) {
            assert_eq!(phi_prime(ch, &m), Some(ExtendedValue::Finite(ch.eval(&x))));
        }
    }

    #[test]
    fn quasi_positive_values_and_infinity() {
        let m = model(257);
        let a = inv_sqrt(&m, 1.0);
        let f = transform(&MixedElement::quasi(a.clone()).unwrap()).unwrap();
        assert_eq!(f.infinity_set(), vec![0]);
        for i in 1..a.len() {
            let exact = a.get(i).finite().unwrap();
            let got = f.get(i).unwrap().finite().unwrap();
            assert!((got - exact).norm() <= 1e-12 * exact.norm());
        }
    }

    #[test]
    fn matches_pointwise_evaluation() {
        let m = model(513);
        let mut rng = sampling::seeded(11);
        for _ in 0..20 {
            let a = sampling::quasi_positive(&mut rng, &m, 0.45);
            let x = sampling::bounded(&mut rng, m.grid(), 3.0);
            let y = sampling::bounded(&mut rng, m.grid(), 3.0);
            let mixed = MixedElement::new(a, x, y).unwrap();
            let f = transform(&mixed).unwrap();
            for (v, w) in f.values().iter().zip(pointwise(&mixed)) {
                if let Some(v) = v {
                    let scale = w.norm().max(1.0);
                    assert!(v.approx_eq(&w, 1e-12 * scale), "{v:?} vs {w:?}");
                }
            }
        }
    }

    #[test]
    fn adjacent_infinities_rejected() {
        let mut vals = vec![ExtendedValue::real(1.0); 16];
        vals[4..7].fill(ExtendedValue::Infinity);
        assert!(matches!(QuasiElement::new(vals), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn span_inputs_refused() {
        let a = QuasiElement::from_real(&[1.0, -1.0, 2.0]).unwrap();
        let one = BoundedFunction::from_real(vec![1.0; 3]).unwrap();
        assert!(matches!(
            MixedElement::new(a, one.clone(), one),
            Err(Error::NotQuasiPositive { index: 1 })
        ));
    }

    #[test]
    fn vanishing_multiplier_at_infinity_is_indeterminate() {
        let m = model(65);
        let a = inv_sqrt(&m, 1.0);
        let x = BoundedFunction::from_real_fn(m.grid(), |t| t).unwrap();
        let y = BoundedFunction::from_real_fn(m.grid(), |_| 2.0).unwrap();
        let f = transform(&MixedElement::new(a.clone(), x, y.clone()).unwrap()).unwrap();
        assert_eq!(f.indeterminate_set(), vec![0]);
        assert_eq!(serde_json::to_value(&f).unwrap()[0], serde_json::Value::Null);
        let zero = BoundedFunction::zero(m.grid());
        let f = transform(&MixedElement::new(a, zero, y).unwrap()).unwrap();
        assert_eq!(f.get(0), Some(ExtendedValue::real(2.0)));
    }

    #[test]
    fn representation_pairs_agree() {
        let m = model(1025);
        let mut rng = sampling::seeded(5);
        let mut pairs = Vec::new();
        for k in 0..30 {
            let a = sampling::quasi_positive(&mut rng, &m, 0.45);
            let p = sampling::real(&mut rng, m.grid(), 0.0, 2.0);
            let x = sampling::bounded(&mut rng, m.grid(), 2.0);
            let y = sampling::bounded(&mut rng, m.grid(), 2.0);
            let lam = 0.5 + k as f64;
            let shifted = a.add(&m.embed(&p)).unwrap();
            pairs.push((
                MixedElement::new(shifted, x.clone(), y.clone()).unwrap(),
                MixedElement::new(a.clone(), x.clone(), p.mul(&x).add(&y)).unwrap(),
            ));
            pairs.push((
                MixedElement::new(a.scale(c(lam)), x.clone(), y.clone()).unwrap(),
                MixedElement::new(a, x.scale(c(lam)), y).unwrap(),
            ));
        }
        let r = agreement_check(&pairs, 1e-10);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn functional_laws_hold() {
        let m = model(513);
        let mut rng = sampling::seeded(7);
        let samples: Vec<MixedElement> = (0..20)
            .map(|_| {
                let a = sampling::quasi_positive(&mut rng, &m, 0.45);
                let x = sampling::bounded(&mut rng, m.grid(), 2.0);
                let y = sampling::bounded(&mut rng, m.grid(), 2.0);
                MixedElement::new(a, x, y).unwrap()
            })
            .collect();
        let chars: Vec<Character> = Character::all(m.grid()).collect();
        let r = functional_laws_check(&samples, &chars, 1e-10);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.checks.len(), 4);
    }

    #[test]
    fn infinite_value_forces_zero_denominator() {
        let m = model(129);
        let a = inv_sqrt(&m, 1.0);
        let x = BoundedFunction::from_real_fn(m.grid(), |t| 1.0 + t).unwrap();
        let mixed = MixedElement::new(a.clone(), x, BoundedFunction::zero(m.grid())).unwrap();
        assert_eq!(mixed.denominator(Character::from_index(0)), 0.0);
        let zero_scaled = MixedElement::new(a, BoundedFunction::zero(m.grid()), BoundedFunction::zero(m.grid())).unwrap();
        assert_eq!(phi_prime(Character::from_index(0), &zero_scaled), Some(ExtendedValue::ZERO));
    }

    #[test]
    fn wedge_isomorphism_laws() {
        let m = model(513);
        let mut rng = sampling::seeded(13);
        let quasi: Vec<QuasiElement> = (0..20).map(|_| sampling::quasi_positive(&mut rng, &m, 0.45)).collect();
        let bounded: Vec<BoundedFunction> = (0..20).map(|_| sampling::bounded(&mut rng, m.grid(), 2.0)).collect();
        let r = wedge_iso_check(&quasi, &bounded, 1e-10);
        assert!(r.passed(), "{r:?}");
        assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass));
    }

    #[test]
    fn blows_up_near_infinity_point() {
        let m = model(4096);
        let mixed = MixedElement::quasi(inv_sqrt(&m, 1e5)).unwrap();
        assert!(blows_up_towards(&mixed, 0, 5, 1e6));
        let bounded = MixedElement::quasi(m.element_from_fn(|t| 1.0 + t).unwrap()).unwrap();
        assert!(!blows_up_towards(&bounded, 0, 5, 1e6));
    }

    #[test]
    fn adjoint_conjugates_transform() {
        let m = model(257);
        let mut rng = sampling::seeded(17);
        let a = sampling::quasi_positive(&mut rng, &m, 0.45);
        let x = sampling::bounded(&mut rng, m.grid(), 2.0);
        let y = sampling::bounded(&mut rng, m.grid(), 2.0);
        let mixed = MixedElement::new(a, x, y).unwrap();
        let f = transform(&mixed).unwrap();
        let g = transform(&mixed.adjoint()).unwrap();
        for (u, v) in f.values().iter().zip(g.values()) {
            match (u, v) {
                (Some(ExtendedValue::Finite(u)), Some(ExtendedValue::Finite(v))) => {
                    assert!((u.conj() - v).norm() <= 1e-12 * u.norm().max(1.0))
                }
                _ => assert_eq!(u.map(|u| u.is_infinite()), v.map(|v| v.is_infinite())),
            }
        }
    }
}
