//! Constant-to-one extension counting.
//!
//! For convex complexes `Z1 ⊆ Z2` every type-preserving embedding of `Z1`
//! into a building extends to `Z2` in the same number of ways. This module
//! computes that number symbolically (as a product of factors in the
//! thickness parameters), checks it against exhaustive enumeration on finite
//! desk models, and checks that counts depend only on isomorphism types.

mod brute;
mod compare;
mod factor;
mod flat;
mod link;
mod wall;

pub use crate::coxeter::Thickness;
pub use brute::{brute_star, brute_thin, brute_tree, BruteReport, TreeModel};
pub use compare::{
    carry_to, check_witness, comparability_check, conjugate_entry, e_chain_catalog, e_segment, vertex_stabilizer,
    CatalogEntry, ComparabilityReport, Morphism, Witness,
};
pub use factor::{ExtCount, Factor};
pub use flat::{count_flat, count_flat_ordered, StepOrder};
pub use link::{link_counts, link_gonality, link_poly, link_types, link_value, LinkCount, LinkTable};
pub use wall::{count_wall, wall_chain, WallModel, WallStep, WallStepKind};
