//! Positive invariant forms on the grid model, their GNS representations,
//! and the continuity conditions linking them to the topology.

mod checks;
mod form;
mod gns;

pub use checks::{bounded_continuity_check, extension_check, gns_invariants_check, sufficiency_and_faithfulness};
pub use form::{
    grid_constant, make_form, ContinuityProbe, ContinuityWitness, FormSpec, SesquilinearForm, CONTINUITY_CAP, CONTINUITY_PAIRS,
    FORM_PSD_TOL, INVARIANCE_TOL,
};
pub use gns::{extend_rep, gns, inner, DiagonalOperator, DirectSum, GnsData};
