//! Fixtures shared by the criterion benches.

use qcstar_core::sampling::{self, SuiteRng};
use qcstar_core::{QuasiElement, QuasiModel};

/// The L¹ model on `[0, 1]` with `n` points.
pub fn l1_model(n: usize) -> QuasiModel {
    QuasiModel::lp(0.0, 1.0, n, 1.0).expect("valid grid")
}

/// `t^{-alpha}` on the model's grid.
pub fn power_singularity(model: &QuasiModel, alpha: f64) -> QuasiElement {
    model.element_from_fn(|t| t.powf(-alpha)).expect("integrable for alpha < 1")
}

pub fn quasi_samples(rng: &mut SuiteRng, model: &QuasiModel, count: usize) -> Vec<QuasiElement> {
    (0..count).map(|_| sampling::quasi_positive(rng, model, 0.45)).collect()
}
