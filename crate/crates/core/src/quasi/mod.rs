//! The completion `Ã₀[τ]` of the grid algebra under weighted-L^p seminorms.

mod axioms;
mod element;
mod model;
pub(crate) mod topology;

pub use axioms::{verify_axioms, AxiomConfig, AxiomReport, NormComparison};
pub use element::{check_infinity_window, QuasiElement, INFINITY_WINDOW};
pub use model::{AlgebraKind, QuasiModel, Side};
pub use topology::{SeminormFamily, SeminormSpec, NULL_SET_SPACINGS, SHELL_DECAY};
