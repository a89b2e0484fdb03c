//! Truncations of the algebra of operators commuting with a weight
//! operator `S ≥ 1`, with their uniform topologies.

mod checks;
mod commutant;
mod domain;
mod masa;
mod seminorm;

pub use checks::{
    absolute_value, check_decay_class, physical_product_check, physical_seminorm, prop43_batch, prop43_check, topology_order_check,
    weak_limit_check, RepresentationMap,
};
pub use commutant::{cs_algebra, Commutant, WEIGHT_TOL};
pub use domain::{
    hermitian_eigen, hermitian_eigenvalues, hermitian_norm, is_hermitian, is_psd_within, matmul, spectral_compose, spectral_norm,
    Matrix, OperatorElement, TruncatedDomain, Vector, MATRIX_TOL,
};
pub use masa::{maximal_commutative, CommutativeBridge, DEGENERACY_TOL, DIAGONAL_TOL};
pub use seminorm::{
    admissible_check, eval_seminorm, inner, set_radius, Admissibility, BoundedSet, BoundedSetFamily, FamilyKind,
    SeminormKind, VectorSet,
};
