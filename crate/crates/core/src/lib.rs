//! Exact, desk-scale combinatorics of rank-2 Euclidean buildings.
//!
//! The crate is organised in layers:
//!
//! * [`coxeter`] — root data for the four rank-2 root systems, the model
//!   Euclidean Coxeter complex (alcoves, walls, vertex types), combinatorial
//!   convex hulls and the slope systems of wall spaces.
//! * [`treeconv`] — convex subcomplexes of wall spaces `ℝ × T`, described by a
//!   subtree and two convex bound functions, together with their elementary
//!   extensions, saturations and an independent hull oracle.
//! * [`counting`] — constant-to-one extension counts with symbolic fiber
//!   sizes, link tables of spherical residues and brute-force oracles on
//!   finite desk models.
//! * [`prolim`] — finite inverse systems of constant-to-one maps, relatively
//!   uniform measures, cylinder masses and disintegration.
//! * [`boundary`] — cylinder measures at infinity, proportionality and
//!   basepoint checks, and perspectivities on finite generalized polygons.
//!
//! All arithmetic is exact: rationals are [`Q`] and symbolic fiber sizes are
//! polynomials in the thickness parameters ([`poly::Poly`]).

// Matrix, distance-table and fiber code indexes several arrays in lockstep.
#![allow(clippy::needless_range_loop)]

pub mod boundary;
pub mod counting;
pub mod coxeter;
mod error;
pub mod json;
pub mod poly;
pub mod polygon;
pub mod prolim;
pub mod rational;
pub mod treeconv;
pub mod verify;

pub use coxeter::{Kind, Point, Region, RootSystem2, Thickness};
pub use error::{Error, Result};
pub use rational::{Bound, Q};
