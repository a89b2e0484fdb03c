//! Locally convex quasi C*-algebras on two finite models: weighted-L^p
//! completions of grid functions, and truncations of an operator algebra
//! commuting with a weight operator.

pub mod base;
pub mod calculus;
pub mod error;
pub mod extended;
pub mod gelfand;
pub mod io;
pub mod operator;
pub mod quasi;
pub mod report;
pub mod representation;
pub mod sampling;
pub mod scalar;

pub use base::{BoundedFunction, Character, CompactGrid};
pub use error::{Error, Result};
pub use extended::ExtendedValue;
pub use gelfand::{ExtendedFunction, MixedElement};
pub use io::{parse_model, ModelFile};
pub use operator::{OperatorElement, TruncatedDomain};
pub use quasi::{QuasiElement, QuasiModel, SeminormFamily};
pub use report::{Check, Report, Verdict};
pub use representation::{FormSpec, GnsData, SesquilinearForm};
pub use scalar::{ScalarFunction, Table};
