//! Measures at infinity and the combinatorics of spherical residues.
//!
//! * [`delta`] — cylinder masses on chambers at infinity seen from a special
//!   vertex, refinement consistency, local proportionality between two
//!   basepoints and the basepoint change of opposition measures.
//! * [`opp`] — chambers opposite a vertex at infinity: the half-strip
//!   bisystem and its disintegration, and the finite decomposition in a
//!   generalized polygon.
//! * [`projectivity`] — perspectivities and projectivity groups.
//! * [`asymmetry`] — search for asymmetric extension patterns among convex
//!   chamber subcomplexes.

pub mod asymmetry;
pub mod delta;
pub mod opp;
pub mod projectivity;

pub use asymmetry::{asymmetry_search, verify_witness, AsymmetryOutcome, AsymmetryWitness};
pub use delta::{
    basepoint_change_check, delta_refinement_check, delta_total_mass, in_sector, local_proportionality_check,
    mu_delta_cylinder, sector_box, sector_vertex, thin_delta_system, unit_translations, BasepointReport, CountMode,
    DeltaMass, ProportionalityReport, Refinement, RefinementReport,
};
pub use opp::{
    line_continuations, line_vertices, opp_bisystem, opp_decomposition, opp_disintegration_check, panel_tree_degrees,
    strip_name, OppDecomposition,
};
pub use projectivity::{
    is_two_transitive, opposition_types, perspectivity, projectivity_group, Perspectivity, ProjectivityGroup,
};
