//! Random convex complexes for property tests and verification suites.

use std::sync::Arc;

use rand::Rng;

use super::complex::{hull_oracle, WallComplex, YChamber};
use super::tree::WallTree;
use crate::coxeter::SlopeSystem;
use crate::error::Result;
use crate::rational::qi;

/// Parameters of random instances.
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    /// Maximal number of fine tree vertices.
    pub max_vertices: usize,
    /// Maximal coarse degree.
    pub max_degree: usize,
    /// Seed chambers are drawn with centroid height in `[-height, height)`.
    pub height: i64,
    /// Number of seed chambers (inclusive range).
    pub seeds: (usize, usize),
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape { max_vertices: 20, max_degree: 3, height: 4, seeds: (1, 3) }
    }
}

/// A random window with at most `shape.max_vertices` fine vertices.
pub fn random_tree<R: Rng>(slopes: Arc<SlopeSystem>, shape: &RandomShape, rng: &mut R) -> Result<Arc<WallTree>> {
    let per_edge = slopes.fine_offsets.len() - 1;
    // n coarse vertices give 1 + (n-1)·per_edge fine vertices.
    let max_coarse = ((shape.max_vertices - 1) / per_edge + 1).max(2);
    let n = rng.gen_range(2..=max_coarse);
    Ok(Arc::new(WallTree::random(slopes, n, [shape.max_degree; 2], rng)?))
}

/// A random chamber of the window with centroid height in `[-height, height)`.
pub fn random_chamber<R: Rng>(tree: &WallTree, height: i64, rng: &mut R) -> YChamber {
    let alc = tree.slopes.strip_alcoves(qi(-height), qi(height));
    let edge = rng.gen_range(0..tree.edges.len());
    YChamber { edge, tri: alc[rng.gen_range(0..alc.len())] }
}

/// A random convex complex: the hull of a few random chambers.
pub fn random_complex<R: Rng>(slopes: Arc<SlopeSystem>, shape: &RandomShape, rng: &mut R) -> Result<WallComplex> {
    let tree = random_tree(slopes, shape, rng)?;
    let k = rng.gen_range(shape.seeds.0..=shape.seeds.1);
    let seeds: Vec<YChamber> = (0..k).map(|_| random_chamber(&tree, shape.height, rng)).collect();
    Ok(hull_oracle(&WallComplex::empty(tree), &seeds))
}
