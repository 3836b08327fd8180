//! Rank-2 root systems and the model Euclidean Coxeter complex.
//!
//! Points are stored in the basis of fundamental weights `(ω1, ω2)`, so a root
//! `c1·α1 + c2·α2` evaluates on `x = x1·ω1 + x2·ω2` as `c1·x1 + c2·x2`.
//! The inner product is the Gram matrix of the weights, normalized so that
//! short roots have squared length 2.

mod alcove;
mod region;
mod slope;
mod thickness;

pub use alcove::{Alcove, AlcoveId, ChamberWindow};
pub use region::{convex_hull, half_apartments, Region, SignedHalf};
pub use region::{star, vertex_neighbours};
pub use slope::{slope_system, SlopeClass, SlopeSystem, StripFrame};
pub(crate) use thickness::coxeter_order;
pub use thickness::{panel_classes, Thickness};

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{qi, Q};

/// The four irreducible rank-2 types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A2,
    B2,
    C2,
    G2,
}

impl Kind {
    /// All four kinds in a fixed order.
    pub const ALL: [Kind; 4] = [Kind::A2, Kind::B2, Kind::C2, Kind::G2];

    /// Vertex types (0, 1, 2) of special vertices.
    pub fn special_types(self) -> &'static [u8] {
        match self {
            Kind::A2 => &[0, 1, 2],
            Kind::B2 => &[0, 2],
            Kind::C2 => &[0, 1],
            Kind::G2 => &[0],
        }
    }

    /// Gonality of the spherical Weyl group: order of `s1·s2`.
    pub fn gonality(self) -> usize {
        match self {
            Kind::A2 => 3,
            Kind::B2 | Kind::C2 => 4,
            Kind::G2 => 6,
        }
    }

    /// The type at infinity opposite to type `i ∈ {1,2}`.
    pub fn opposite_type(self, i: u8) -> u8 {
        match self {
            Kind::A2 => 3 - i,
            _ => i,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::A2 => "A2",
            Kind::B2 => "B2",
            Kind::C2 => "C2",
            Kind::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A2" => Ok(Kind::A2),
            "B2" => Ok(Kind::B2),
            "C2" => Ok(Kind::C2),
            "G2" => Ok(Kind::G2),
            other => Err(Error::Parse(format!("unknown root system type {other:?}"))),
        }
    }
}

/// A point of the model apartment, in fundamental-weight coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub [Q; 2]);

impl Point {
    pub fn new(x1: Q, x2: Q) -> Self {
        Point([x1, x2])
    }

    pub fn origin() -> Self {
        Point([Q::zero(), Q::zero()])
    }

    pub fn scale(self, t: Q) -> Point {
        Point([self.0[0] * t, self.0[1] * t])
    }
}

impl std::ops::Add for Point {
    type Output = Point;

    fn add(self, o: Point) -> Point {
        Point([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl std::ops::Sub for Point {
    type Output = Point;

    fn sub(self, o: Point) -> Point {
        Point([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

/// A root written in the basis of simple roots: `c[0]·α1 + c[1]·α2`.
pub type RootCoeffs = [i64; 2];

/// Evaluates the root with coefficients `c` at `p`.
pub fn eval_root(c: RootCoeffs, p: Point) -> Q {
    qi(c[0]) * p.0[0] + qi(c[1]) * p.0[1]
}

/// A wall `{x : α(x) = level}` for a positive root `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Wall {
    pub root: RootCoeffs,
    pub level: i64,
}

/// Root data of a rank-2 root system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem2 {
    pub kind: Kind,
    /// Positive roots in the simple-root basis, simple roots first.
    pub positive_roots: Vec<RootCoeffs>,
    /// The highest root `α0`.
    pub highest_root: RootCoeffs,
    /// `cartan[i][j] = α_i(α_j^∨)`.
    pub cartan: [[i64; 2]; 2],
    /// Inner products `(ω_i, ω_j)`.
    pub gram: [[Q; 2]; 2],
    /// Coroots of the positive roots (same order), in weight coordinates.
    pub coroots: Vec<Point>,
}

/// Inner products `(α_i, α_j)` of the simple roots.
fn simple_root_gram(kind: Kind) -> [[i64; 2]; 2] {
    match kind {
        Kind::A2 => [[2, -1], [-1, 2]],
        // α1 long, α2 short.
        Kind::B2 => [[4, -2], [-2, 2]],
        // α1 short, α2 long.
        Kind::C2 => [[2, -2], [-2, 4]],
        // α1 short, α2 long.
        Kind::G2 => [[2, -3], [-3, 6]],
    }
}

/// Builds the exact root data of `kind`.
pub fn root_data(kind: Kind) -> RootSystem2 {
    let b = simple_root_gram(kind);
    let mut cartan = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            cartan[i][j] = 2 * b[i][j] / b[j][j];
        }
    }
    // Weight Gram matrix is the inverse of the simple-root Gram matrix.
    let det = qi(b[0][0] * b[1][1] - b[0][1] * b[1][0]);
    let gram = [[qi(b[1][1]) / det, qi(-b[0][1]) / det], [qi(-b[1][0]) / det, qi(b[0][0]) / det]];
    // Closure of the simple roots under simple reflections.
    let reflect_coeffs = |c: RootCoeffs, i: usize| -> RootCoeffs {
        // s_i(β) = β − β(α_i^∨) α_i with β(α_i^∨) = Σ_k c_k a_{k i}.
        let pairing = c[0] * cartan[0][i] + c[1] * cartan[1][i];
        let mut out = c;
        out[i] -= pairing;
        out
    };
    let mut all: Vec<RootCoeffs> = vec![[1, 0], [0, 1]];
    let mut idx = 0;
    while idx < all.len() {
        let c = all[idx];
        for i in 0..2 {
            let r = reflect_coeffs(c, i);
            if !all.contains(&r) {
                all.push(r);
            }
        }
        idx += 1;
    }
    let mut positive: Vec<RootCoeffs> = all.into_iter().filter(|c| c[0] >= 0 && c[1] >= 0).collect();
    positive.sort_by_key(|c| (c[0] + c[1], c[1]));
    let highest_root = *positive.last().expect("nonempty");
    let mut rs = RootSystem2 { kind, positive_roots: positive, highest_root, cartan, gram, coroots: Vec::new() };
    rs.coroots = rs.positive_roots.iter().map(|&c| rs.coroot_of(c)).collect();
    rs
}

impl RootSystem2 {
    /// Inner product of two points.
    pub fn inner(&self, a: Point, b: Point) -> Q {
        let g = &self.gram;
        a.0[0] * (g[0][0] * b.0[0] + g[0][1] * b.0[1]) + a.0[1] * (g[1][0] * b.0[0] + g[1][1] * b.0[1])
    }

    /// The vector `v` with `(v, y) = α(y)` for all `y`.
    fn dual_vector(&self, c: RootCoeffs) -> Point {
        // Solve G v = c.
        let g = &self.gram;
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let (c0, c1) = (qi(c[0]), qi(c[1]));
        Point([(g[1][1] * c0 - g[0][1] * c1) / det, (g[0][0] * c1 - g[1][0] * c0) / det])
    }

    /// Coroot `α^∨ = 2v/(α,α)` of the root with coefficients `c`.
    pub fn coroot_of(&self, c: RootCoeffs) -> Point {
        let v = self.dual_vector(c);
        let len2 = eval_root(c, v);
        v.scale(qi(2) / len2)
    }

    /// Squared length `(α, α)` of the root with coefficients `c`.
    pub fn root_length2(&self, c: RootCoeffs) -> Q {
        eval_root(c, self.dual_vector(c))
    }

    /// Coroot of a positive root given by its index.
    pub fn coroot(&self, idx: usize) -> Point {
        self.coroots[idx]
    }

    /// Index of a positive root, if `c` is one.
    pub fn root_index(&self, c: RootCoeffs) -> Option<usize> {
        self.positive_roots.iter().position(|&r| r == c)
    }

    /// Reflection in the wall `{α = k}`: `x ↦ x − (α(x) − k)·α^∨`.
    pub fn reflect(&self, p: Point, wall: Wall) -> Point {
        let cor = self.coroot_of(wall.root);
        let t = eval_root(wall.root, p) - qi(wall.level);
        p - cor.scale(t)
    }

    /// Fundamental weight `ω_i` (i ∈ {1,2}).
    pub fn weight(&self, i: u8) -> Point {
        match i {
            1 => Point([Q::one(), Q::zero()]),
            2 => Point([Q::zero(), Q::one()]),
            _ => panic!("weight index must be 1 or 2"),
        }
    }

    /// Vertices of the fundamental alcove, indexed by type (0, 1, 2).
    pub fn fundamental_vertices(&self) -> [Point; 3] {
        let [c1, c2] = self.highest_root;
        [Point::origin(), Point([Q::zero(), Q::new(1, c2)]), Point([Q::new(1, c1), Q::zero()])]
    }

    /// Folds `p` into the closed fundamental alcove, returning the folded
    /// point and the walls reflected in (in order).
    pub fn fold(&self, p: Point) -> (Point, Vec<Wall>) {
        let mut x = p;
        let mut walls = Vec::new();
        loop {
            if x.0[0] < Q::zero() {
                let w = Wall { root: [1, 0], level: 0 };
                x = self.reflect(x, w);
                walls.push(w);
            } else if x.0[1] < Q::zero() {
                let w = Wall { root: [0, 1], level: 0 };
                x = self.reflect(x, w);
                walls.push(w);
            } else if eval_root(self.highest_root, x) > Q::one() {
                let w = Wall { root: self.highest_root, level: 1 };
                x = self.reflect(x, w);
                walls.push(w);
            } else {
                return (x, walls);
            }
        }
    }

    /// Vertex type of `p` (0, 1 or 2), or `None` if `p` is not a vertex.
    pub fn vertex_type(&self, p: Point) -> Option<u8> {
        let (x, _) = self.fold(p);
        self.fundamental_vertices().iter().position(|&v| v == x).map(|t| t as u8)
    }

    /// Whether `p` is a special vertex (lies on a wall of every parallel class).
    pub fn is_special(&self, p: Point) -> bool {
        self.positive_roots.iter().all(|&c| eval_root(c, p).is_integer())
    }

    /// Positive roots `α` and levels `k` with `α(p) = k`, i.e. walls through `p`.
    pub fn walls_through(&self, p: Point) -> Vec<Wall> {
        self.positive_roots
            .iter()
            .filter_map(|&c| {
                let v = eval_root(c, p);
                v.is_integer().then(|| Wall { root: c, level: v.to_integer() })
            })
            .collect()
    }

    /// The finite Weyl group as integer matrices acting on weight coordinates,
    /// in a canonical order (by word length, then lexicographically).
    pub fn weyl_group(&self) -> Vec<[[i64; 2]; 2]> {
        let simple = |i: usize| -> [[i64; 2]; 2] {
            // s_i(x)_k = x_k − x_i·a_{k i}
            let mut m = [[1, 0], [0, 1]];
            for k in 0..2 {
                m[k][i] -= self.cartan[k][i];
            }
            m
        };
        let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| -> [[i64; 2]; 2] {
            let mut m = [[0; 2]; 2];
            for r in 0..2 {
                for c in 0..2 {
                    m[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
                }
            }
            m
        };
        let mut elems = vec![[[1, 0], [0, 1]]];
        let mut frontier = elems.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                for i in 0..2 {
                    let n = mul(simple(i), *m);
                    if !elems.contains(&n) && !next.contains(&n) {
                        next.push(n);
                    }
                }
            }
            next.sort();
            elems.extend(next.iter().copied());
            frontier = next;
        }
        elems
    }
}

/// A type-preserving automorphism of the model apartment, `x ↦ A·x + b`
/// in weight coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    pub linear: [[i64; 2]; 2],
    #[serde(with = "alcove::point_serde")]
    pub shift: Point,
}

impl AffineMap {
    pub fn identity() -> AffineMap {
        AffineMap { linear: [[1, 0], [0, 1]], shift: Point::origin() }
    }

    /// Reflection in a wall.
    pub fn reflection(rs: &RootSystem2, wall: Wall) -> AffineMap {
        let shift = rs.reflect(Point::origin(), wall);
        let col = |p: Point| rs.reflect(p, wall) - shift;
        let (a, b) = (col(rs.weight(1)), col(rs.weight(2)));
        let int = |x: Q| x.to_integer();
        AffineMap { linear: [[int(a.0[0]), int(b.0[0])], [int(a.0[1]), int(b.0[1])]], shift }
    }

    /// Translation by a vector (type-preserving iff it lies in the coroot lattice).
    pub fn translation(v: Point) -> AffineMap {
        AffineMap { linear: [[1, 0], [0, 1]], shift: v }
    }

    pub fn apply(&self, p: Point) -> Point {
        apply_matrix(self.linear, p) + self.shift
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let mut m = [[0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = self.linear[r][0] * other.linear[0][c] + self.linear[r][1] * other.linear[1][c];
            }
        }
        AffineMap { linear: m, shift: self.apply(other.shift) }
    }

    /// Whether the map sends the fundamental alcove to an alcove with the same
    /// vertex types (hence preserves all types).
    pub fn is_type_preserving(&self, rs: &RootSystem2) -> bool {
        let verts = rs.fundamental_vertices();
        let imgs: Vec<Point> = verts.iter().map(|&v| self.apply(v)).collect();
        let is_alcove = Alcove::containing(rs, (imgs[0] + imgs[1] + imgs[2]).scale(Q::new(1, 3)))
            .map(|a| {
                let mut x = a.vertices.to_vec();
                let mut y = imgs.clone();
                x.sort();
                y.sort();
                x == y
            })
            .unwrap_or(false);
        is_alcove && (0..3).all(|t| rs.vertex_type(imgs[t]) == Some(t as u8))
    }
}

/// Applies an integer matrix (acting on weight coordinates) to a point.
pub fn apply_matrix(m: [[i64; 2]; 2], p: Point) -> Point {
    Point([qi(m[0][0]) * p.0[0] + qi(m[0][1]) * p.0[1], qi(m[1][0]) * p.0[0] + qi(m[1][1]) * p.0[1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    #[test]
    fn positive_root_counts_and_highest_roots() {
        let expect = [(Kind::A2, 3, [1, 1]), (Kind::B2, 4, [1, 2]), (Kind::C2, 4, [2, 1]), (Kind::G2, 6, [3, 2])];
        for (k, n, hr) in expect {
            let rs = root_data(k);
            assert_eq!(rs.positive_roots.len(), n, "{k}");
            assert_eq!(rs.highest_root, hr, "{k}");
            for c in &rs.positive_roots {
                assert!(c[0] <= hr[0] && c[1] <= hr[1], "{k}: highest root dominates");
            }
        }
    }

    #[test]
    fn simple_roots_are_dual_to_weights() {
        for k in Kind::ALL {
            let rs = root_data(k);
            for i in 1..=2u8 {
                for j in 1..=2u8 {
                    let a = if i == 1 { [1, 0] } else { [0, 1] };
                    let v = eval_root(a, rs.weight(j));
                    assert_eq!(v, if i == j { Q::one() } else { Q::zero() });
                }
            }
        }
    }

    #[test]
    fn short_roots_have_squared_length_two() {
        for k in Kind::ALL {
            let rs = root_data(k);
            let min = rs.positive_roots.iter().map(|&c| rs.root_length2(c)).min().unwrap();
            assert_eq!(min, qi(2), "{k}");
        }
    }

    #[test]
    fn root_set_closed_under_reflections() {
        for k in Kind::ALL {
            let rs = root_data(k);
            for (ai, &a) in rs.positive_roots.iter().enumerate() {
                for &b in &rs.positive_roots {
                    // s_a(b) = b − b(a^∨) a
                    let pairing = eval_root(b, rs.coroot(ai));
                    assert!(pairing.is_integer());
                    let p = pairing.to_integer();
                    let r = [b[0] - p * a[0], b[1] - p * a[1]];
                    let neg = [-r[0], -r[1]];
                    assert!(rs.positive_roots.contains(&r) || rs.positive_roots.contains(&neg));
                }
            }
        }
    }

    #[test]
    fn a2_reflection_of_first_weight() {
        let rs = root_data(Kind::A2);
        let w = Wall { root: [1, 0], level: 0 };
        let r = rs.reflect(rs.weight(1), w);
        assert_eq!(r, rs.weight(1) - rs.coroot(0));
    }

    #[test]
    fn vertex_types_follow_the_convention() {
        for k in Kind::ALL {
            let rs = root_data(k);
            let [v0, v1, v2] = rs.fundamental_vertices();
            assert_eq!(rs.vertex_type(v0), Some(0));
            assert_eq!(rs.vertex_type(v1), Some(1));
            assert_eq!(rs.vertex_type(v2), Some(2));
            // The neighbour of 0 in direction ω2 has type 1, in direction ω1 type 2.
            assert!(v1.0[0].is_zero() && v1.0[1] > Q::zero());
            assert!(v2.0[1].is_zero() && v2.0[0] > Q::zero());
            let specials: Vec<u8> =
                (0..3u8).filter(|&t| rs.is_special(rs.fundamental_vertices()[t as usize])).collect();
            assert_eq!(specials, k.special_types(), "{k}");
            assert_eq!(rs.vertex_type(Point::new(q(1, 7), q(1, 7))), None);
        }
    }

    #[test]
    fn weyl_group_orders() {
        for (k, n) in [(Kind::A2, 6), (Kind::B2, 8), (Kind::C2, 8), (Kind::G2, 12)] {
            assert_eq!(root_data(k).weyl_group().len(), n);
        }
    }

    fn kind_strategy() -> impl Strategy<Value = Kind> {
        prop_oneof![Just(Kind::A2), Just(Kind::B2), Just(Kind::C2), Just(Kind::G2)]
    }

    proptest! {
        #[test]
        fn reflections_are_involutions(k in kind_strategy(), n1 in -50i64..50, d1 in 1i64..12,
                                       n2 in -50i64..50, d2 in 1i64..12, ri in 0usize..6, lvl in -4i64..4) {
            let rs = root_data(k);
            let root = rs.positive_roots[ri % rs.positive_roots.len()];
            let w = Wall { root, level: lvl };
            let p = Point::new(q(n1, d1), q(n2, d2));
            let r = rs.reflect(p, w);
            prop_assert_eq!(eval_root(root, r), qi(2 * lvl) - eval_root(root, p));
            prop_assert_eq!(rs.reflect(r, w), p);
        }

        #[test]
        fn vertex_type_is_invariant_under_affine_reflections(k in kind_strategy(), word in proptest::collection::vec((0usize..6, -3i64..3), 0..8),
                                                              t in 0usize..3) {
            let rs = root_data(k);
            let p = rs.fundamental_vertices()[t];
            let mut x = p;
            for (ri, lvl) in word {
                let root = rs.positive_roots[ri % rs.positive_roots.len()];
                x = rs.reflect(x, Wall { root, level: lvl });
            }
            prop_assert_eq!(rs.vertex_type(x), Some(t as u8));
        }
    }
}
