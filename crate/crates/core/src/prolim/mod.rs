//! Finite inverse systems of constant-to-one maps and their limit measures.
//!
//! A system is a finite directed index poset with a finite stage at every
//! index and constant-to-one restriction maps. Fixing counting measure at a
//! base index determines a unique rescaled counting measure on every stage
//! such that all maps are uniformly measure-preserving. The limit space is
//! never materialized: the limit measure is the cylinder-mass function,
//! which is all that exact finite checks can observe. Infinite total mass is
//! allowed; queries are always about finite-mass cylinders.

mod disintegrate;
mod models;
mod system;

pub use disintegrate::{disintegrate_check, fiber_system};
pub use models::{
    catalog_system, coset_index_name, directed_forward_shift, directed_shift, haar_model, line_model, rect_name,
    rooted_tree_automorphisms, segment_name, segment_shift, tree_product, BiSystem, CATALOG, STAGE_CAPACITY,
};
pub(crate) use models::{check_capacity, induced};
pub use system::{
    additivity_check, fiber_size, first_empty, invariance_check, pushforward, relatively_uniform, CtoMap, Cylinder,
    CylinderFunction, FinStage, InvSystem, InvarianceReport, SystemAutomorphism,
};
