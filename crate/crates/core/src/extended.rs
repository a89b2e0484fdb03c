//! Values in the extended complex plane ℂ ∪ {∞}.

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitude bound for finite payloads.
pub const FINITE_BOUND: f64 = 1e300;

/// A point of the one-point compactification of ℂ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedValue {
    Finite(Complex64),
    Infinity,
}

use ExtendedValue::{Finite, Infinity};

impl ExtendedValue {
    pub const ZERO: ExtendedValue = Finite(Complex64::new(0.0, 0.0));

    pub fn real(v: f64) -> Self {
        Self::from_complex(Complex64::new(v, 0.0))
    }

    /// Maps non-finite or overflowing magnitudes to `Infinity`. NaN is kept
    /// as a finite NaN payload so callers can reject it explicitly.
    pub fn from_complex(z: Complex64) -> Self {
        if z.re.is_infinite() || z.im.is_infinite() || z.norm() >= FINITE_BOUND {
            Infinity
        } else {
            Finite(z)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            Finite(z) => Some(*z),
            Infinity => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Finite(z) if z.re == 0.0 && z.im == 0.0)
    }

    pub fn conj(&self) -> Self {
        match self {
            Finite(z) => Finite(z.conj()),
            Infinity => Infinity,
        }
    }

    /// Modulus, `+inf` at ∞.
    pub fn norm(&self) -> f64 {
        match self {
            Finite(z) => z.norm(),
            Infinity => f64::INFINITY,
        }
    }

    /// `∞ + z = ∞`, including `∞ + ∞` (both summands lie in the wedge).
    pub fn add(self, other: Self) -> Self {
        match (self, other) {
            (Finite(a), Finite(b)) => Self::from_complex(a + b),
            _ => Infinity,
        }
    }

    /// `c·∞ = ∞` for `c ≠ 0`, `0·∞ = 0`.
    pub fn scale(self, c: Complex64) -> Self {
        match self {
            Finite(z) => Self::from_complex(z * c),
            Infinity if c.re == 0.0 && c.im == 0.0 => Self::ZERO,
            Infinity => Infinity,
        }
    }

    /// Product with the ∞·∞ case refused.
    pub fn checked_mul(self, other: Self) -> Option<Self> {
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Self::from_complex(a * b)),
            (Infinity, Finite(c)) | (Finite(c), Infinity) => Some(Infinity.scale(c)),
            (Infinity, Infinity) => None,
        }
    }

    /// Product where `∞·∞ = ∞`; only partial multiplication uses this.
    pub fn mul_saturating(self, other: Self) -> Self {
        self.checked_mul(other).unwrap_or(Infinity)
    }

    /// Equality with exact ∞ tags and a finite tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (Finite(a), Finite(b)) => (a - b).norm() <= tol,
            (Infinity, Infinity) => true,
            _ => false,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Finite(z) if z.re.is_nan() || z.im.is_nan() => {
                Err(Error::InvalidInput("NaN value".into()))
            }
            _ => Ok(()),
        }
    }
}

impl From<f64> for ExtendedValue {
    fn from(v: f64) -> Self {
        Self::real(v)
    }
}

impl From<Complex64> for ExtendedValue {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

// Encoding: a plain number for real values, `[re, im]` for complex ones,
// `{"inf": true}` for ∞.
impl Serialize for ExtendedValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Finite(z) if z.im == 0.0 => s.serialize_f64(z.re),
            Finite(z) => {
                let mut t = s.serialize_tuple(2)?;
                t.serialize_element(&z.re)?;
                t.serialize_element(&z.im)?;
                t.end()
            }
            Infinity => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("inf", &true)?;
                m.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawValue {
    Real(f64),
    Pair([f64; 2]),
    Inf { inf: bool },
}

impl<'de> Deserialize<'de> for ExtendedValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawValue::deserialize(d)? {
            RawValue::Real(v) => Ok(Self::real(v)),
            RawValue::Pair([re, im]) => Ok(Self::from_complex(Complex64::new(re, im))),
            RawValue::Inf { inf: true } => Ok(Infinity),
            RawValue::Inf { inf: false } => Err(de::Error::custom("{\"inf\": false} is not a value")),
        }
    }
}
