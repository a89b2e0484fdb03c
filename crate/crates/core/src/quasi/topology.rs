use num_complex::Complex64;
use serde::Serialize;

use super::QuasiElement;
use crate::base::{BoundedFunction, CompactGrid};
use crate::error::{Error, Result};

/// ∞-sets whose total quadrature weight stays below this many grid
/// spacings are treated as null sets.
pub const NULL_SET_SPACINGS: f64 = 16.0;

/// Largest inward-to-outward shell mass ratio still read as integrable.
pub const SHELL_DECAY: f64 = 0.75;

/// Dyadic shells used by the divergence test: distances in `[2^j, 2^{j+1})`
/// for `j` in this range.
const FIRST_SHELL: u32 = 2;
const LAST_SHELL: u32 = 9;
const MIN_SHELLS: u32 = 3;

/// One weighted-L^p seminorm `p(a) = (Σ w(t)·q(t)·|a(t)|^p)^{1/p}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormSpec {
    pub p: f64,
    pub weight: Vec<f64>,
}

/// The topology `τ`: a finite family of weighted-L^p seminorms on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormFamily {
    specs: Vec<SeminormSpec>,
    /// `weight · quadrature weight`, one vector per spec.
    combined: Vec<Vec<f64>>,
    spacing: f64,
}

impl SeminormFamily {
    pub fn new(grid: &CompactGrid, specs: Vec<SeminormSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::InvalidInput("seminorm family is empty".into()));
        }
        for (i, s) in specs.iter().enumerate() {
            if !(s.p >= 1.0 && s.p.is_finite()) {
                return Err(Error::InvalidInput(format!("spec {i}: exponent {} < 1", s.p)));
            }
            if s.weight.len() != grid.len() {
                return Err(Error::InvalidInput(format!("spec {i}: weight length mismatch")));
            }
            if let Some(j) = s.weight.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
                return Err(Error::InvalidInput(format!(
                    "spec {i}: weight {} at index {j} is not strictly positive",
                    s.weight[j]
                )));
            }
        }
        let combined = specs
            .iter()
            .map(|s| s.weight.iter().zip(grid.weights()).map(|(w, q)| w * q).collect())
            .collect();
        Ok(Self { specs, combined, spacing: grid.spacing() })
    }

    /// Single unweighted L^p seminorm.
    pub fn lp(grid: &CompactGrid, p: f64) -> Result<Self> {
        Self::new(grid, vec![SeminormSpec { p, weight: vec![1.0; grid.len()] }])
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn specs(&self) -> &[SeminormSpec] {
        &self.specs
    }

    pub fn exponent(&self, idx: usize) -> f64 {
        self.specs[idx].p
    }

    /// `w(t)·q(t)` for spec `idx`.
    pub fn point_weights(&self, idx: usize) -> &[f64] {
        &self.combined[idx]
    }

    /// `C_λ = (Σ w·q)^{1/p}`, so that `p_λ(x) ≤ C_λ ‖x‖₀`.
    pub fn domination_constant(&self, idx: usize) -> f64 {
        self.combined[idx].iter().sum::<f64>().powf(1.0 / self.specs[idx].p)
    }

    /// Seminorm of a vector of finite values.
    pub fn eval_finite(&self, idx: usize, values: &[Complex64]) -> f64 {
        let p = self.specs[idx].p;
        let s: f64 = self.combined[idx].iter().zip(values).map(|(w, z)| w * z.norm().powf(p)).sum();
        s.powf(1.0 / p)
    }

    pub fn eval_bounded(&self, idx: usize, x: &BoundedFunction) -> f64 {
        self.eval_finite(idx, x.values())
    }

    /// Seminorm of a quasi element.
    ///
    /// The finite part is integrated directly. The ∞-set contributes nothing
    /// when it is null (total quadrature weight at most
    /// `NULL_SET_SPACINGS · h`) and the values around each ∞-point pass the
    /// dyadic shell test; otherwise the result is `+∞`.
    pub fn eval(&self, idx: usize, a: &QuasiElement) -> f64 {
        let inf = a.infinity_set();
        if !inf.is_empty() {
            let quad = self.quadrature_mass(idx, &inf);
            if quad > NULL_SET_SPACINGS * self.spacing {
                return f64::INFINITY;
            }
            if inf.iter().any(|&i| self.diverges_at(idx, a, i)) {
                return f64::INFINITY;
            }
        }
        self.eval_finite(idx, &a.finite_part())
    }

    fn quadrature_mass(&self, idx: usize, points: &[usize]) -> f64 {
        points.iter().map(|&i| self.combined[idx][i] / self.specs[idx].weight[i]).sum()
    }

    /// Shell masses `m_j = Σ w q |a|^p` over index distances `[2^j, 2^{j+1})`
    /// on one side of `center`.
    fn shell_masses(&self, idx: usize, a: &QuasiElement, center: usize, right: bool) -> Vec<f64> {
        let n = a.len();
        let room = if right { n - 1 - center } else { center };
        let p = self.specs[idx].p;
        let mut masses = Vec::new();
        for j in FIRST_SHELL..=LAST_SHELL {
            let (lo, hi) = (1usize << j, 1usize << (j + 1));
            if hi - 1 > room {
                break;
            }
            let m = (lo..hi)
                .map(|d| if right { center + d } else { center - d })
                .map(|i| match a.get(i).finite() {
                    Some(z) => self.combined[idx][i] * z.norm().powf(p),
                    None => 0.0,
                })
                .sum();
            masses.push(m);
        }
        masses
    }

    /// Inward-to-outward mass ratio per dyadic shell near `center`, fitted
    /// by least squares on `log₂ m_j`. `None` when too few shells fit.
    pub fn shell_decay(&self, idx: usize, a: &QuasiElement, center: usize, right: bool) -> Option<f64> {
        let m = self.shell_masses(idx, a, center, right);
        if (m.len() as u32) < MIN_SHELLS {
            return None;
        }
        if m[0] == 0.0 {
            return Some(0.0);
        }
        if m.iter().any(|&v| v == 0.0) {
            return Some(f64::INFINITY);
        }
        let k = m.len() as f64;
        let xs: Vec<f64> = (0..m.len()).map(|j| j as f64).collect();
        let ys: Vec<f64> = m.iter().map(|v| v.log2()).collect();
        let mx = xs.iter().sum::<f64>() / k;
        let my = ys.iter().sum::<f64>() / k;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        Some((-sxy / sxx).exp2())
    }

    /// True when the mass of `|a|^p` does not shrink fast enough towards the
    /// ∞-point `center` for the integral to converge.
    pub fn diverges_at(&self, idx: usize, a: &QuasiElement, center: usize) -> bool {
        [false, true]
            .iter()
            .filter_map(|&right| self.shell_decay(idx, a, center, right))
            .any(|ratio| ratio > SHELL_DECAY)
    }
}
