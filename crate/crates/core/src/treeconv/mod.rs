//! Convex subcomplexes of wall spaces `ℝ × T`.
//!
//! A convex subcomplex is stored as a subtree `S` of a finite tree window and
//! two bound functions `f`, `g` on it; the complex is the set of `(x, h)` with
//! `x ∈ S` and `f(x) ≤ h ≤ −g(x)`. Cells are never stored globally: each
//! apartment (the preimage of a line of the tree) is unfolded onto the model
//! apartment and handled with exact half-apartment arithmetic.

mod complex;
mod extend;
mod random;
mod saturate;
mod tree;

pub use complex::{hull_oracle, line_hull, lower_value, upper_value, Fiber, WallComplex, YChamber};
pub use extend::{
    chamber_below, components, elementary_extensions, envelope, extend_along, extend_vertical, is_admissible,
    maximal_segments, non_admissible_witness, vertical_chamber, vertical_sites, Component, EdgeChoice, EndpointCase,
    Envelope, Extension, ExtensionKind, NonAdmissibleWitness, SegmentOnLine, Side,
};
pub use random::{random_chamber, random_complex, random_tree, RandomShape};
pub use saturate::{classify_degenerate, saturate, sideways_saturation, Degeneracy, Saturation};
pub use tree::{CoarseEdge, CoarseVertex, LineView, TreeVertex, WallTree};
