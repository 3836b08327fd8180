//! Combinatorial convex hulls in the model apartment.
//!
//! A convex subcomplex is an intersection of closed half-apartments
//! `{α ≤ k}`; it is stored by its tight integer levels `lo ≤ α ≤ hi` for every
//! positive root.

use std::collections::BTreeSet;

use super::alcove::{Alcove, ChamberWindow};
use super::{eval_root, Kind, Point, RootCoeffs, RootSystem2};
use crate::error::{Error, Result};
use crate::rational::{ceil, floor, qi, Q};

/// A convex subcomplex of the model apartment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Region {
    pub kind: Kind,
    /// Tight `(lo, hi)` levels, one pair per positive root (root-data order).
    pub levels: Vec<(i64, i64)>,
    /// Radius of the root-value box the region was computed in.
    pub window: i64,
}

/// Alcoves containing the vertex `v` (its star), sorted.
pub fn star(rs: &RootSystem2, v: Point) -> Vec<Alcove> {
    let t = rs.vertex_type(v).expect("star of a non-vertex") as usize;
    let d1 = Point::new(Q::new(1, 7), Q::new(1, 11));
    let d2 = Point::new(Q::new(-1, 13), Q::new(1, 5));
    let start = Alcove::containing_perturbed(rs, v, d1, d2).expect("generic perturbation");
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        for s in (0..3).filter(|&s| s != t) {
            let b = a.neighbour(rs, s);
            if seen.insert(b) {
                stack.push(b);
            }
        }
    }
    seen.into_iter().collect()
}

/// Vertices adjacent to `v` (sharing an edge), sorted.
pub fn vertex_neighbours(rs: &RootSystem2, v: Point) -> Vec<Point> {
    let set: BTreeSet<Point> = star(rs, v).iter().flat_map(|a| a.vertices).filter(|&w| w != v).collect();
    set.into_iter().collect()
}

/// A half-apartment `{sign·α ≤ bound}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedHalf {
    pub root: RootCoeffs,
    pub sign: i8,
    pub bound: i64,
}

/// Smallest convex subcomplex containing the given vertices.
///
/// Every point must be a vertex of the model apartment. Fails with
/// `WindowOverflow` if the hull reaches the boundary of the `window` box.
pub fn convex_hull(rs: &RootSystem2, vertices: &[Point], window: i64) -> Result<Region> {
    if vertices.is_empty() {
        return Err(Error::Precondition("convex hull of an empty set".into()));
    }
    if let Some(p) = vertices.iter().find(|p| rs.vertex_type(**p).is_none()) {
        return Err(Error::Precondition(format!("{p:?} is not a vertex")));
    }
    let mut levels = Vec::with_capacity(rs.positive_roots.len());
    for &c in &rs.positive_roots {
        let vals = vertices.iter().map(|&p| eval_root(c, p));
        let lo = floor(vals.clone().min().expect("nonempty"));
        let hi = ceil(vals.max().expect("nonempty"));
        if lo <= -window || hi >= window {
            return Err(Error::WindowOverflow(format!(
                "hull needs levels {lo}..{hi} for root {c:?}, window radius is {window}"
            )));
        }
        levels.push((lo, hi));
    }
    Ok(Region { kind: rs.kind, levels, window })
}

/// The tight half-apartments whose intersection is the region.
pub fn half_apartments(rs: &RootSystem2, region: &Region) -> Vec<SignedHalf> {
    let mut out = Vec::new();
    for (&c, &(lo, hi)) in rs.positive_roots.iter().zip(&region.levels) {
        out.push(SignedHalf { root: c, sign: 1, bound: hi });
        out.push(SignedHalf { root: c, sign: -1, bound: -lo });
    }
    out
}

impl Region {
    /// Hull of a set of alcoves.
    pub fn hull_of_alcoves(rs: &RootSystem2, alcoves: &[Alcove], window: i64) -> Result<Region> {
        let pts: Vec<Point> = alcoves.iter().flat_map(|a| a.vertices).collect();
        convex_hull(rs, &pts, window)
    }

    pub fn contains_point(&self, rs: &RootSystem2, p: Point) -> bool {
        rs.positive_roots.iter().zip(&self.levels).all(|(&c, &(lo, hi))| {
            let v = eval_root(c, p);
            v >= qi(lo) && v <= qi(hi)
        })
    }

    pub fn contains_alcove(&self, rs: &RootSystem2, a: &Alcove) -> bool {
        a.vertices.iter().all(|&v| self.contains_point(rs, v))
    }

    /// Indices of the window alcoves contained in the region.
    pub fn chambers(&self, rs: &RootSystem2, window: &ChamberWindow) -> Vec<usize> {
        (0..window.len()).filter(|&i| self.contains_alcove(rs, &window.alcoves[i])).collect()
    }

    /// All vertices of the region, sorted.
    pub fn vertices(&self, rs: &RootSystem2) -> Vec<Point> {
        let [c1, c2] = rs.highest_root;
        let d = num_integer::lcm(c1, c2);
        let range = |root: RootCoeffs| {
            let idx = rs.root_index(root).expect("simple root");
            let (lo, hi) = self.levels[idx];
            (lo * d)..=(hi * d)
        };
        let mut out = Vec::new();
        for a in range([1, 0]) {
            for b in range([0, 1]) {
                let p = Point::new(Q::new(a, d), Q::new(b, d));
                if self.contains_point(rs, p) && rs.vertex_type(p).is_some() {
                    out.push(p);
                }
            }
        }
        out.sort();
        out
    }

    /// All alcoves contained in the region, sorted.
    pub fn alcoves(&self, rs: &RootSystem2) -> Vec<Alcove> {
        let mut out = BTreeSet::new();
        for v in self.vertices(rs) {
            for a in star(rs, v) {
                if self.contains_alcove(rs, &a) {
                    out.insert(a);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Hull of the region and additional vertices (levels widen per root).
    pub fn join(&self, rs: &RootSystem2, points: &[Point]) -> Result<Region> {
        let mut levels = self.levels.clone();
        for (k, &c) in rs.positive_roots.iter().enumerate() {
            for &p in points {
                let v = eval_root(c, p);
                levels[k].0 = levels[k].0.min(floor(v));
                levels[k].1 = levels[k].1.max(ceil(v));
            }
            if levels[k].0 <= -self.window || levels[k].1 >= self.window {
                return Err(Error::WindowOverflow(format!("join leaves the window of radius {}", self.window)));
            }
        }
        Ok(Region { kind: self.kind, levels, window: self.window })
    }

    /// Recomputes tight levels from the vertex set.
    pub fn tighten(&self, rs: &RootSystem2) -> Result<Region> {
        let verts = self.vertices(rs);
        if verts.is_empty() {
            return Err(Error::Precondition("region contains no vertex".into()));
        }
        convex_hull(rs, &verts, self.window)
    }

    /// Image of the region under a map of the apartment that permutes walls.
    pub fn map_points(&self, rs: &RootSystem2, f: impl Fn(Point) -> Point) -> Result<Region> {
        let verts: Vec<Point> = self.vertices(rs).into_iter().map(f).collect();
        convex_hull(rs, &verts, self.window)
    }

    /// Whether `self ⊆ other` as point sets.
    pub fn is_subset(&self, other: &Region) -> bool {
        self.levels.iter().zip(&other.levels).all(|(a, b)| a.0 >= b.0 && a.1 <= b.1)
    }

    /// Whether the region contains a chamber (is two-dimensional).
    pub fn has_chamber(&self, rs: &RootSystem2) -> bool {
        if self.levels.iter().any(|&(lo, hi)| lo == hi) {
            return false;
        }
        // A two-dimensional tight region contains an alcove; search for one.
        let w = self.window;
        match ChamberWindow::new(rs, w) {
            Ok(win) => !self.chambers(rs, &win).is_empty(),
            Err(_) => false,
        }
    }
}
