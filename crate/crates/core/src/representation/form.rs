use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::base::BoundedFunction;
use crate::error::{Error, Result};
use crate::operator::{hermitian_eigen, spectral_norm, OperatorElement};
use crate::quasi::{QuasiElement, QuasiModel};
use crate::sampling::{self, SuiteRng};

pub const FORM_PSD_TOL: f64 = 1e-12;
pub const INVARIANCE_TOL: f64 = 1e-12;
/// Sampled pairs per seminorm in the continuity search.
pub const CONTINUITY_PAIRS: usize = 200;
/// Largest sampled ratio still accepted as continuous.
pub const CONTINUITY_CAP: f64 = 1e6;

/// Input description of a form over the grid points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FormSpec {
    Diagonal { weights: Vec<f64> },
    Kernel { matrix: OperatorElement },
}

/// Seminorm index with the sampled ratio bound and the exact grid constant
/// `sup_b φ(b, b) / p_λ(b)²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityWitness {
    pub seminorm: usize,
    pub sampled_ratio: f64,
    pub grid_constant: f64,
}

/// `φ(x, y) = Σ w(t) x(t) conj(y(t))`, the diagonal form left after the
/// invariance check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SesquilinearForm {
    weights: Vec<f64>,
    continuity: ContinuityWitness,
}

/// Validates positivity, invariance and continuity of `spec` on `model`.
///
/// Kernels must be hermitian positive semi-definite and, because invariance
/// under the commutative multiplication forces it, diagonal. Continuity is
/// decided by maximising `|φ(a, b)| / (p_λ(a) p_λ(b))` over sampled bounded
/// pairs for each seminorm.
pub fn make_form(model: &QuasiModel, spec: &FormSpec, rng: &mut SuiteRng) -> Result<SesquilinearForm> {
    ContinuityProbe::new(model, rng).make_form(spec)
}

/// Sampled test pairs with their seminorms, shared by every form built
/// through the same probe.
pub struct ContinuityProbe<'a> {
    model: &'a QuasiModel,
    pairs: Vec<(BoundedFunction, BoundedFunction)>,
    /// `norms[idx][k]`: product of the `idx`-th seminorms of pair `k`.
    norms: Vec<Vec<f64>>,
}

impl<'a> ContinuityProbe<'a> {
    pub fn new(model: &'a QuasiModel, rng: &mut SuiteRng) -> Self {
        let family = model.family();
        let pairs: Vec<(BoundedFunction, BoundedFunction)> = (0..CONTINUITY_PAIRS)
            .map(|_| (sampling::bounded(rng, model.grid(), 1.0), sampling::bounded(rng, model.grid(), 1.0)))
            .collect();
        let norms = (0..family.len())
            .map(|idx| pairs.iter().map(|(a, b)| family.eval_bounded(idx, a) * family.eval_bounded(idx, b)).collect())
            .collect();
        Self { model, pairs, norms }
    }

    pub fn make_form(&self, spec: &FormSpec) -> Result<SesquilinearForm> {
        let n = self.model.grid().len();
        let weights = match spec {
            FormSpec::Diagonal { weights } => {
                check_len(weights.len(), n)?;
                if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
                    return Err(Error::InvalidInput(format!("non-finite weight {w}")));
                }
                let scale = weights.iter().fold(1.0_f64, |m, w| m.max(w.abs()));
                let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
                if min < -FORM_PSD_TOL * scale {
                    return Err(Error::NotPositive { eigenvalue: min });
                }
                weights.iter().map(|w| w.max(0.0)).collect()
            }
            FormSpec::Kernel { matrix } => kernel_weights(matrix, n)?,
        };
        let continuity = self.witness(&weights)?;
        Ok(SesquilinearForm { weights, continuity })
    }

    fn witness(&self, weights: &[f64]) -> Result<ContinuityWitness> {
        let family = self.model.family();
        let support: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
        let values: Vec<f64> = self
            .pairs
            .iter()
            .map(|(a, b)| support.iter().map(|&i| a.get(i) * b.get(i).conj() * weights[i]).sum::<Complex64>().norm())
            .collect();
        let mut best: Option<ContinuityWitness> = None;
        for (idx, norms) in self.norms.iter().enumerate() {
            let ratio = values.iter().zip(norms).fold(0.0_f64, |m, (&num, &denom)| {
                if denom > 0.0 {
                    m.max(num / denom)
                } else if num > 0.0 {
                    f64::INFINITY
                } else {
                    m
                }
            });
            if best.as_ref().map_or(true, |b| ratio < b.sampled_ratio) {
                let grid_constant = grid_constant(family.point_weights(idx), family.exponent(idx), weights);
                best = Some(ContinuityWitness { seminorm: idx, sampled_ratio: ratio, grid_constant });
            }
        }
        match best {
            Some(w) if w.sampled_ratio < CONTINUITY_CAP => Ok(w),
            Some(w) => Err(Error::NotContinuous { ratio: w.sampled_ratio }),
            None => Err(Error::NotContinuous { ratio: f64::INFINITY }),
        }
    }
}

fn check_len(got: usize, n: usize) -> Result<()> {
    if got != n {
        return Err(Error::InvalidInput(format!("form has {got} weights, grid has {n} points")));
    }
    Ok(())
}

fn kernel_weights(k: &OperatorElement, n: usize) -> Result<Vec<f64>> {
    check_len(k.dim(), n)?;
    let m = k.matrix();
    let scale = spectral_norm(m).max(1.0);
    if !k.is_hermitian() {
        return Err(Error::InvalidInput("kernel is not hermitian".into()));
    }
    let (values, _) = hermitian_eigen(m);
    if let Some(&min) = values.first() {
        if min < -FORM_PSD_TOL * scale {
            return Err(Error::NotPositive { eigenvalue: min });
        }
    }
    // φ(e_j e_j, e_i) = K_ij while φ(e_j, e_j* e_i) = δ_ij K_ij.
    let mut worst = (0, 0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)].norm() > worst.2 {
                worst = (i, j, m[(i, j)].norm());
            }
        }
    }
    if worst.2 > INVARIANCE_TOL * scale {
        let (i, j, residual) = worst;
        return Err(Error::NotInvariant { a: j, x: j, y: i, residual });
    }
    Ok((0..n).map(|i| m[(i, i)].re.max(0.0)).collect())
}

/// `sup_b Σ w |b|² / (Σ μ |b|^p)^{2/p}`: with `c_i = w_i / μ_i^{2/p}` this is
/// `max c` for `p ≤ 2` and `‖c‖_{p/(p−2)}` for `p > 2`.
pub fn grid_constant(mu: &[f64], p: f64, weights: &[f64]) -> f64 {
    let mut c = Vec::with_capacity(weights.len());
    for (&m, &w) in mu.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        if m <= 0.0 {
            return f64::INFINITY;
        }
        c.push(w / m.powf(2.0 / p));
    }
    if p <= 2.0 {
        c.into_iter().fold(0.0, f64::max)
    } else {
        let r = p / (p - 2.0);
        c.iter().map(|x| x.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

fn diagonal_form(weights: &[f64], x: &[Complex64], y: &[Complex64]) -> Complex64 {
    weights.iter().zip(x).zip(y).map(|((w, a), b)| a * b.conj() * *w).sum()
}

impl SesquilinearForm {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn continuity(&self) -> &ContinuityWitness {
        &self.continuity
    }

    /// Indices with positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| self.weights[i] > 0.0).collect()
    }

    pub fn eval(&self, x: &BoundedFunction, y: &BoundedFunction) -> Complex64 {
        diagonal_form(&self.weights, x.values(), y.values())
    }

    /// `φ̃(a, a)` for a quasi element; `+∞` when `a` is ∞ on the support.
    pub fn quadratic(&self, a: &QuasiElement) -> f64 {
        self.weights.iter().zip(a.values()).fold(0.0, |s, (&w, v)| {
            if w == 0.0 {
                s
            } else {
                match v.finite() {
                    Some(z) => s + w * z.norm_sqr(),
                    None => f64::INFINITY,
                }
            }
        })
    }
}
