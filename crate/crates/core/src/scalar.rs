//! Scalar functions on `[0, ∞)` with declared growth at infinity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::ExtendedValue;

/// Negative arguments this close to zero are treated as zero by
/// fractional powers, absorbing roundoff in positive elements.
const NEGATIVE_SLACK: f64 = 1e-12;

/// Piecewise linear interpolation table, clamped outside its range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRaw")]
pub struct Table {
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Deserialize)]
struct TableRaw {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl TryFrom<TableRaw> for Table {
    type Error = Error;

    fn try_from(raw: TableRaw) -> Result<Self> {
        Table::new(raw.x, raw.y)
    }
}

impl Table {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::InvalidInput(
                "table needs matching x and y with at least 2 entries".into(),
            ));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("table entries must be finite".into()));
        }
        if x.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("table abscissae must be strictly increasing".into()));
        }
        Ok(Self { x, y })
    }

    pub fn eval(&self, v: f64) -> f64 {
        let n = self.x.len();
        if v <= self.x[0] {
            return self.y[0];
        }
        if v >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.x.partition_point(|&x| x <= v) - 1;
        let s = (v - self.x[i]) / (self.x[i + 1] - self.x[i]);
        self.y[i] + s * (self.y[i + 1] - self.y[i])
    }

    fn last(&self) -> f64 {
        self.y[self.y.len() - 1]
    }

    fn sup(&self) -> f64 {
        self.y.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Catalog of functions usable in the functional calculus.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFunction {
    /// `λ^q`.
    Pow(f64),
    /// `(1 + λ)^{-m}`.
    ResolventPow(u32),
    /// `e^{-λ}`.
    ExpNeg,
    /// `c₀ + c₁λ + c₂λ² + …`.
    Poly(Vec<f64>),
    Table(Table),
    Product(Box<ScalarFunction>, Box<ScalarFunction>),
    Sum(Box<ScalarFunction>, Box<ScalarFunction>),
    Scaled(f64, Box<ScalarFunction>),
}

/// Leading behaviour `coef · λ^exponent` as `λ → ∞`.
///
/// `exponent` is `-∞` for functions decaying faster than any power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotic {
    pub coef: f64,
    pub exponent: f64,
}

impl ScalarFunction {
    /// The constant function `u₀ = 1`.
    pub fn one() -> Self {
        ScalarFunction::Poly(vec![1.0])
    }

    /// The identity `u₁(λ) = λ`.
    pub fn identity() -> Self {
        ScalarFunction::Pow(1.0)
    }

    pub fn times(self, other: ScalarFunction) -> Self {
        ScalarFunction::Product(Box::new(self), Box::new(other))
    }

    pub fn plus(self, other: ScalarFunction) -> Self {
        ScalarFunction::Sum(Box::new(self), Box::new(other))
    }

    pub fn scaled(self, c: f64) -> Self {
        ScalarFunction::Scaled(c, Box::new(self))
    }

    pub fn eval(&self, v: f64) -> Result<f64> {
        use ScalarFunction::*;
        let out = match self {
            Pow(q) => pow(v, *q)?,
            ResolventPow(m) => {
                if v <= -1.0 {
                    return Err(Error::DomainError {
                        value: v,
                        reason: "(1+λ)^-m needs λ > -1".into(),
                    });
                }
                (1.0 + v).powi(-(*m as i32))
            }
            ExpNeg => (-v).exp(),
            Poly(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * v + ci),
            Table(t) => t.eval(v),
            Product(f, g) => f.eval(v)? * g.eval(v)?,
            Sum(f, g) => f.eval(v)? + g.eval(v)?,
            Scaled(c, f) => c * f.eval(v)?,
        };
        if out.is_nan() {
            return Err(Error::DomainError { value: v, reason: format!("{self} is undefined") });
        }
        Ok(out)
    }

    pub fn asymptotic(&self) -> Asymptotic {
        use ScalarFunction::*;
        let a = |coef, exponent| Asymptotic { coef, exponent };
        match self {
            Pow(q) => a(1.0, *q),
            ResolventPow(m) => a(1.0, -(*m as f64)),
            ExpNeg => a(1.0, f64::NEG_INFINITY),
            Poly(c) => match c.iter().rposition(|&ci| ci != 0.0) {
                Some(d) => a(c[d], d as f64),
                None => a(0.0, f64::NEG_INFINITY),
            },
            Table(t) if t.last() == 0.0 => a(0.0, f64::NEG_INFINITY),
            Table(t) => a(t.last(), 0.0),
            Product(f, g) => {
                let (f, g) = (f.asymptotic(), g.asymptotic());
                if f.exponent == f64::NEG_INFINITY || g.exponent == f64::NEG_INFINITY {
                    a(f.coef * g.coef, f64::NEG_INFINITY)
                } else {
                    a(f.coef * g.coef, f.exponent + g.exponent)
                }
            }
            Sum(f, g) => {
                let (f, g) = (f.asymptotic(), g.asymptotic());
                if f.exponent > g.exponent {
                    f
                } else if g.exponent > f.exponent {
                    g
                } else {
                    a(f.coef + g.coef, f.exponent)
                }
            }
            Scaled(c, _) if *c == 0.0 => a(0.0, f64::NEG_INFINITY),
            Scaled(c, f) => {
                let f = f.asymptotic();
                a(c * f.coef, f.exponent)
            }
        }
    }

    /// Declared growth exponent `g` with `f(λ) = O(λ^g)` as `λ → ∞`.
    pub fn growth_exponent(&self) -> f64 {
        self.asymptotic().exponent
    }

    /// `lim_{λ→∞} f(λ)` in ℂ*.
    pub fn limit_at_infinity(&self) -> ExtendedValue {
        let Asymptotic { coef, exponent } = self.asymptotic();
        if exponent < 0.0 {
            ExtendedValue::ZERO
        } else if exponent == 0.0 {
            ExtendedValue::real(coef)
        } else {
            ExtendedValue::Infinity
        }
    }

    /// Upper bound for `sup_{λ ≥ 0} |f(λ)|` when it is known in closed form.
    pub fn bound_on_half_line(&self) -> Option<f64> {
        use ScalarFunction::*;
        match self {
            ResolventPow(_) | ExpNeg => Some(1.0),
            Pow(q) if *q == 0.0 => Some(1.0),
            Poly(c) if c.iter().skip(1).all(|&ci| ci == 0.0) => Some(c.first().map_or(0.0, |c| c.abs())),
            Table(t) => Some(t.sup()),
            Product(f, g) => Some(f.bound_on_half_line()? * g.bound_on_half_line()?),
            Sum(f, g) => Some(f.bound_on_half_line()? + g.bound_on_half_line()?),
            Scaled(c, f) => Some(c.abs() * f.bound_on_half_line()?),
            _ => None,
        }
    }

    /// Parses a catalog name: `pow:q`, `respow:m`, `expneg`, `poly:[c0,c1,..]`.
    ///
    /// Tables are loaded by the caller and passed as [`ScalarFunction::Table`].
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
        match kind {
            "pow" => Ok(ScalarFunction::Pow(parse_rational(arg)?)),
            "respow" => arg
                .trim()
                .parse::<u32>()
                .map(ScalarFunction::ResolventPow)
                .map_err(|e| Error::Parse(format!("respow exponent `{arg}`: {e}"))),
            "expneg" => Ok(ScalarFunction::ExpNeg),
            "poly" => serde_json::from_str::<Vec<f64>>(arg)
                .map(ScalarFunction::Poly)
                .map_err(|e| Error::Parse(format!("poly coefficients `{arg}`: {e}"))),
            _ => Err(Error::Parse(format!("unknown function `{spec}`"))),
        }
    }
}

fn pow(v: f64, q: f64) -> Result<f64> {
    if q.fract() == 0.0 && q.abs() < i32::MAX as f64 {
        if v == 0.0 && q < 0.0 {
            return Err(Error::DomainError { value: v, reason: format!("λ^{q} at 0") });
        }
        return Ok(v.powi(q as i32));
    }
    let v = if v < 0.0 && v >= -NEGATIVE_SLACK { 0.0 } else { v };
    if v < 0.0 || (v == 0.0 && q < 0.0) {
        return Err(Error::DomainError { value: v, reason: format!("λ^{q} needs λ > 0") });
    }
    Ok(v.powf(q))
}

fn parse_rational(s: &str) -> Result<f64> {
    let s = s.trim();
    let err = |e: &dyn fmt::Display| Error::Parse(format!("exponent `{s}`: {e}"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|e| err(&e))?;
            let q: f64 = q.trim().parse().map_err(|e| err(&e))?;
            if q == 0.0 {
                return Err(err(&"zero denominator"));
            }
            p / q
        }
        None => s.parse().map_err(|e| err(&e))?,
    };
    if !v.is_finite() {
        return Err(err(&"not finite"));
    }
    Ok(v)
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ScalarFunction::*;
        match self {
            Pow(q) => write!(f, "pow:{q}"),
            ResolventPow(m) => write!(f, "respow:{m}"),
            ExpNeg => write!(f, "expneg"),
            Poly(c) => write!(f, "poly:{}", serde_json::to_string(c).unwrap_or_default()),
            Table(t) => write!(f, "table[{}]", t.x.len()),
            Product(a, b) => write!(f, "({a})*({b})"),
            Sum(a, b) => write!(f, "({a})+({b})"),
            Scaled(c, a) => write!(f, "{c}*({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_values() {
        assert_eq!(ScalarFunction::Pow(0.5).eval(4.0).unwrap(), 2.0);
        assert_eq!(ScalarFunction::ResolventPow(2).eval(1.0).unwrap(), 0.25);
        assert_eq!(ScalarFunction::Poly(vec![1.0, 2.0, 3.0]).eval(2.0).unwrap(), 17.0);
        assert_eq!(ScalarFunction::ExpNeg.eval(0.0).unwrap(), 1.0);
        assert!(ScalarFunction::Pow(0.5).eval(-1.0).is_err());
        assert_eq!(ScalarFunction::Pow(0.5).eval(-1e-15).unwrap(), 0.0);
        assert_eq!(ScalarFunction::Pow(2.0).eval(-3.0).unwrap(), 9.0);
    }

    #[test]
    fn table_interpolates_and_clamps() {
        let t = Table::new(vec![0.0, 1.0, 3.0], vec![1.0, 3.0, 2.0]).unwrap();
        assert_eq!(t.eval(-5.0), 1.0);
        assert_eq!(t.eval(0.5), 2.0);
        assert_eq!(t.eval(2.0), 2.5);
        assert_eq!(t.eval(10.0), 2.0);
        assert!(Table::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn growth_and_limits() {
        use ScalarFunction::*;
        assert_eq!(Pow(0.5).growth_exponent(), 0.5);
        assert_eq!(ResolventPow(3).growth_exponent(), -3.0);
        assert_eq!(Poly(vec![1.0, 0.0, 2.0, 0.0]).growth_exponent(), 2.0);
        let prod = Pow(0.5).times(ResolventPow(1));
        assert_eq!(prod.growth_exponent(), -0.5);
        assert_eq!(prod.limit_at_infinity(), ExtendedValue::ZERO);
        let ratio = Pow(1.0).times(ResolventPow(1));
        assert_eq!(ratio.limit_at_infinity(), ExtendedValue::real(1.0));
        assert_eq!(Pow(1.5).limit_at_infinity(), ExtendedValue::Infinity);
        assert_eq!(ExpNeg.times(Pow(3.0)).limit_at_infinity(), ExtendedValue::ZERO);
        assert_eq!(ScalarFunction::one().limit_at_infinity(), ExtendedValue::real(1.0));
    }

    #[test]
    fn parse_catalog_names() {
        assert_eq!(ScalarFunction::parse("pow:1/2").unwrap(), ScalarFunction::Pow(0.5));
        assert_eq!(ScalarFunction::parse("pow:0.25").unwrap(), ScalarFunction::Pow(0.25));
        assert_eq!(ScalarFunction::parse("respow:2").unwrap(), ScalarFunction::ResolventPow(2));
        assert_eq!(
            ScalarFunction::parse("poly:[1,0,2]").unwrap(),
            ScalarFunction::Poly(vec![1.0, 0.0, 2.0])
        );
        assert!(ScalarFunction::parse("sin").is_err());
        assert!(ScalarFunction::parse("pow:1/0").is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(ScalarFunction::ExpNeg.bound_on_half_line(), Some(1.0));
        assert_eq!(ScalarFunction::Pow(1.0).bound_on_half_line(), None);
    }
}
