//! The unital commutative C*-algebra of bounded functions on a sampled
//! compact interval.

mod function;
mod grid;

pub use function::{BoundedFunction, Character, HERMITIAN_TOL, POSITIVITY_FLOOR, POSITIVITY_REL_TOL};
pub use grid::CompactGrid;
