//! Cylinder measures on the space of chambers at infinity seen from a
//! special vertex, and their proportionality and basepoint properties.
//!
//! A chamber at infinity seen from the origin is the germ of a sector based
//! at the origin; cylinders are pinned by a finite convex region of the
//! model sector `S = {α₁ ≥ 0, α₂ ≥ 0}`. The mass of the cylinder pinned on
//! `C` is the reciprocal of the number of extensions of the origin to
//! `conv({0} ∪ C)`: the limit of the relatively uniform measures that give
//! mass one to the origin.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::counting::{brute_thin, count_flat, link_value, LinkCount};
use crate::coxeter::{apply_matrix, convex_hull, eval_root, Alcove, Point, Region, RootSystem2, Thickness};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::prolim::{CtoMap, FinStage, InvSystem};
use crate::rational::{fmt_q, q, qi, Q};

/// How extension counts are obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountMode {
    /// Exhaustive enumeration in the model apartment (all thicknesses 1),
    /// with base embeddings ranging over a box of the given radius.
    Thin { base_window: i64 },
    /// The constant-to-one count formula, compared as polynomials in the
    /// thickness parameters and evaluated at the given thickness.
    Symbolic(Thickness),
}

/// One extension count: its value and, in symbolic mode, its polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Counted {
    value: u64,
    poly: Option<Poly>,
}

fn count(rs: &RootSystem2, z1: &Region, z2: &Region, mode: &CountMode) -> Result<Counted> {
    match mode {
        CountMode::Thin { base_window } => {
            let rep = brute_thin(rs, z1, z2, *base_window)?;
            let value = rep
                .value()
                .ok_or_else(|| Error::Inconsistent("thin enumeration is not constant over base embeddings".into()))?;
            Ok(Counted { value, poly: None })
        }
        CountMode::Symbolic(th) => {
            let c = count_flat(rs, z1, z2, th)?;
            Ok(Counted { value: c.value, poly: Some(c.poly) })
        }
    }
}

/// Whether `a·b = c·d`, compared as values and (if present) as polynomials.
fn cross_equal(a: &Counted, b: &Counted, c: &Counted, d: &Counted) -> bool {
    let values = u128::from(a.value) * u128::from(b.value) == u128::from(c.value) * u128::from(d.value);
    let polys = match (&a.poly, &b.poly, &c.poly, &d.poly) {
        (Some(pa), Some(pb), Some(pc), Some(pd)) => (pa * pb) == (pc * pd),
        _ => true,
    };
    values && polys
}

fn reciprocal(n: u64) -> Result<Q> {
    let n = i64::try_from(n).map_err(|_| Error::Unsupported("count exceeds the rational range".into()))?;
    if n == 0 {
        return Err(Error::Inconsistent("zero extension count".into()));
    }
    Ok(q(1, n))
}

/// Whether every vertex of the region lies in the closed sector `S`.
pub fn in_sector(rs: &RootSystem2, region: &Region, apex: Point) -> bool {
    [[1, 0], [0, 1]].iter().all(|&c| {
        let idx = rs.root_index(c).expect("simple root");
        qi(region.levels[idx].0) >= eval_root(c, apex)
    })
}

/// The box `S_{a,b} = {0 ≤ α₁ ≤ a, 0 ≤ α₂ ≤ b}` of the model sector.
pub fn sector_box(rs: &RootSystem2, a: i64, b: i64, window: i64) -> Result<Region> {
    if a < 0 || b < 0 {
        return Err(Error::Precondition("sector boxes need a, b ≥ 0".into()));
    }
    let mut levels = vec![(-window + 1, window - 1); rs.positive_roots.len()];
    levels[rs.root_index([1, 0]).expect("simple root")] = (0, a);
    levels[rs.root_index([0, 1]).expect("simple root")] = (0, b);
    Region { kind: rs.kind, levels, window }.tighten(rs)
}

/// The type-0 vertex of the open sector closest to the origin (smallest
/// `α₁ + α₂`, then lexicographic).
pub fn sector_vertex(rs: &RootSystem2) -> Point {
    let [c1, c2] = rs.highest_root;
    let d = num_integer::lcm(c1, c2);
    let mut best: Option<(Q, Point)> = None;
    for a in 1..=4 * d {
        for b in 1..=4 * d {
            let p = Point::new(q(a, d), q(b, d));
            if rs.vertex_type(p) == Some(0) {
                let key = p.0[0] + p.0[1];
                if best.is_none_or(|(k, bp)| key < k || (key == k && p < bp)) {
                    best = Some((key, p));
                }
            }
        }
    }
    best.expect("a type-0 vertex in the open sector").1
}

/// Mass of a cylinder at infinity seen from the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaMass {
    /// `1 / count`.
    #[serde(with = "crate::rational::serde_q")]
    pub mass: Q,
    /// Number of extensions of the origin to the pinned hull.
    pub count: u64,
    /// Factorization of the count.
    pub factorization: String,
}

/// Mass of the cylinder pinned on `c` (a region of the sector `S`).
pub fn mu_delta_cylinder(rs: &RootSystem2, c: &Region, th: &Thickness) -> Result<DeltaMass> {
    if !in_sector(rs, c, Point::origin()) {
        return Err(Error::Precondition("cylinder region must lie in the model sector".into()));
    }
    let origin = convex_hull(rs, &[Point::origin()], c.window)?;
    let pinned = c.join(rs, &[Point::origin()])?;
    let cnt = count_flat(rs, &origin, &pinned, th)?;
    Ok(DeltaMass { mass: reciprocal(cnt.value)?, count: cnt.value, factorization: cnt.factorization() })
}

/// Total mass of the space: number of chambers at the origin times the mass
/// of the cylinder of the base chamber.
pub fn delta_total_mass(rs: &RootSystem2, th: &Thickness, window: i64) -> Result<Q> {
    let base = Region::hull_of_alcoves(rs, &[Alcove::fundamental(rs)], window)?;
    let m = mu_delta_cylinder(rs, &base, th)?;
    let chambers = link_value(rs, 0, LinkCount::Chambers, th)?;
    Ok(m.mass * qi(i64::try_from(chambers).map_err(|_| Error::Unsupported("chamber count overflow".into()))?))
}

/// One one-step refinement of a cylinder: pinning one more chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    /// The added chamber: its vertices as `[x₁, x₂]` rational pairs.
    pub chamber: Vec<[String; 2]>,
    /// Number of child cylinders.
    pub children: u64,
    /// Mass of each child.
    #[serde(with = "crate::rational::serde_q")]
    pub child_mass: Q,
    /// `children · child_mass`.
    #[serde(with = "crate::rational::serde_q")]
    pub total: Q,
}

/// One-step refinements of the cylinder pinned on `c`, for every chamber of
/// the sector adjacent to its pinned hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementReport {
    #[serde(with = "crate::rational::serde_q")]
    pub parent: Q,
    pub refinements: Vec<Refinement>,
    /// In symbolic mode: whether every refinement also splits as polynomials.
    pub symbolic: bool,
}

impl RefinementReport {
    pub fn is_consistent(&self) -> bool {
        self.symbolic && self.refinements.iter().all(|r| r.total == self.parent)
    }
}

/// Chambers of the (translated) sector `apex + S` adjacent to `region`.
fn adjacent_sector_chambers(rs: &RootSystem2, region: &Region, apex: Point) -> Vec<Alcove> {
    let inside: BTreeSet<Alcove> = region.alcoves(rs).into_iter().collect();
    let seeds: Vec<Alcove> = if inside.is_empty() {
        crate::coxeter::star(rs, region.vertices(rs)[0]).into_iter().collect()
    } else {
        inside.iter().flat_map(|a| (0..3).map(move |t| a.neighbour(rs, t))).collect()
    };
    let mut out = BTreeSet::new();
    for b in seeds {
        if !inside.contains(&b) && alcove_in_sector(&b, apex) {
            out.insert(b);
        }
    }
    out.into_iter().collect()
}

fn alcove_in_sector(a: &Alcove, apex: Point) -> bool {
    a.vertices.iter().all(|v| v.0[0] >= apex.0[0] && v.0[1] >= apex.0[1])
}

/// Refinement consistency of the cylinder measure at `c`: the children of
/// every one-step refinement carry the parent mass.
pub fn delta_refinement_check(rs: &RootSystem2, c: &Region, th: &Thickness) -> Result<RefinementReport> {
    if !in_sector(rs, c, Point::origin()) {
        return Err(Error::Precondition("cylinder region must lie in the model sector".into()));
    }
    let origin = convex_hull(rs, &[Point::origin()], c.window)?;
    let pinned = c.join(rs, &[Point::origin()])?;
    let parent = count_flat(rs, &origin, &pinned, th)?;
    let mut refinements = Vec::new();
    let mut symbolic = true;
    for d in adjacent_sector_chambers(rs, &pinned, Point::origin()) {
        let child = pinned.join(rs, &d.vertices)?;
        let step = count_flat(rs, &pinned, &child, th)?;
        let whole = count_flat(rs, &origin, &child, th)?;
        symbolic &= whole.poly == &parent.poly * &step.poly;
        let child_mass = reciprocal(whole.value)?;
        let children = step.value;
        refinements.push(Refinement {
            chamber: d.vertices.iter().map(|v| [fmt_q(&v.0[0]), fmt_q(&v.0[1])]).collect(),
            children,
            child_mass,
            total: child_mass * qi(children as i64),
        });
    }
    Ok(RefinementReport { parent: reciprocal(parent.value)?, refinements, symbolic })
}

/// The thin model of the cylinder measure: stages are the boxes
/// `S_{a,b}` (`0 ≤ a, b ≤ depth`), and the elements of a stage are the
/// distinct restrictions of the finite Weyl group to the box. Each element
/// is named by its first Weyl group element (in canonical order).
pub fn thin_delta_system(rs: &RootSystem2, depth: i64, window: i64) -> Result<InvSystem> {
    let weyl = rs.weyl_group();
    let mut stages = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut grid = HashMap::new();
    for a in 0..=depth {
        for b in 0..=depth {
            let region = sector_box(rs, a, b, window)?;
            let verts = region.vertices(rs);
            let mut reps: HashMap<Vec<Point>, usize> = HashMap::new();
            let mut class_of = Vec::with_capacity(weyl.len());
            let mut elements = Vec::new();
            for (k, m) in weyl.iter().enumerate() {
                let image: Vec<Point> = verts.iter().map(|&v| apply_matrix(*m, v)).collect();
                let next = reps.len();
                let id = *reps.entry(image).or_insert(next);
                if id == elements.len() {
                    elements.push(vec![k as u32]);
                }
                class_of.push(id);
            }
            grid.insert((a, b), stages.len());
            stages.push(FinStage::new(format!("S[{a},{b}]"), elements));
            classes.push(class_of);
        }
    }
    let mut maps = Vec::new();
    for a in 0..=depth {
        for b in 0..=depth {
            let src = grid[&(a, b)];
            for (ta, tb) in [(a - 1, b), (a, b - 1)] {
                if ta < 0 || tb < 0 {
                    continue;
                }
                let tgt = grid[&(ta, tb)];
                let mut map = vec![usize::MAX; stages[src].len()];
                for w in 0..weyl.len() {
                    map[classes[src][w]] = classes[tgt][w];
                }
                maps.push(CtoMap::new(src, tgt, map, stages[tgt].len())?);
            }
        }
    }
    InvSystem::build(format!("thin_delta({},{depth})", rs.kind), stages, maps, grid[&(0, 0)])
}

/// Outcome of a cross-ratio or basepoint comparison.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProportionalityReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl ProportionalityReport {
    pub fn holds(&self) -> bool {
        self.checked > 0 && self.violations.is_empty()
    }
}

/// Chambers of `apex + S` within gallery distance `depth` of `start`
/// (moving inside `apex + S`), including `start`.
fn sector_ball(rs: &RootSystem2, start: Alcove, apex: Point, depth: usize) -> Vec<Alcove> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((a, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for t in 0..3 {
            let b = a.neighbour(rs, t);
            if alcove_in_sector(&b, apex) && seen.insert(b) {
                queue.push_back((b, d + 1));
            }
        }
    }
    seen.into_iter().collect()
}

/// Local proportionality between the cylinder measures seen from the
/// origin `o` and from a type-0 vertex `p` of the sector.
///
/// `U` is the cylinder pinned on the chamber `D₀ = p + c₀` (the base chamber
/// translated to `p`); the sub-cylinders `V` are pinned on `conv(D₀ ∪ d)` for
/// every chamber `d` of `p + S` within gallery distance `depth` of `D₀`.
/// Checks `μ^o(V)·μ^p(U) = μ^p(V)·μ^o(U)` for all of them.
pub fn local_proportionality_check(
    rs: &RootSystem2,
    p: Point,
    depth: usize,
    mode: &CountMode,
    window: i64,
) -> Result<ProportionalityReport> {
    if rs.vertex_type(p) != Some(0) {
        return Err(Error::Precondition("the second basepoint must be a type-0 vertex".into()));
    }
    if p.0[0] < Q::zero() || p.0[1] < Q::zero() {
        return Err(Error::Precondition("the second basepoint must lie in the sector".into()));
    }
    let c0 = Alcove::fundamental(rs);
    let d0 = Alcove { vertices: c0.vertices.map(|v| v + p) };
    let origin = convex_hull(rs, &[Point::origin()], window)?;
    let at_p = convex_hull(rs, &[p], window)?;
    let u_region = Region::hull_of_alcoves(rs, &[d0], window)?;
    let u_from_o = count(rs, &origin, &u_region.join(rs, &[Point::origin()])?, mode)?;
    let u_from_p = count(rs, &at_p, &u_region, mode)?;
    let mut report = ProportionalityReport::default();
    for d in sector_ball(rs, d0, p, depth) {
        let v_region = Region::hull_of_alcoves(rs, &[d0, d], window)?;
        let v_from_o = count(rs, &origin, &v_region.join(rs, &[Point::origin()])?, mode)?;
        let v_from_p = count(rs, &at_p, &v_region, mode)?;
        // μ^o(V)·μ^p(U) = μ^p(V)·μ^o(U)  ⇔  #p→V · #o→U = #o→V · #p→U
        report.checked += 1;
        if !cross_equal(&v_from_p, &u_from_o, &v_from_o, &u_from_p) {
            report.violations.push(format!("sub-cylinder through {:?}", d.vertices));
        }
    }
    Ok(report)
}

/// Masses of one overlap cylinder computed from two basepoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasepointReport {
    #[serde(with = "crate::rational::serde_q")]
    pub from_first: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub from_second: Q,
    /// Whether the two masses agree (as polynomials too, in symbolic mode).
    pub equal: bool,
}

/// Basepoint change for opposition measures: the cylinder of apartment
/// embeddings pinned on the convex region `overlap` (which contains both
/// basepoints, type-0 vertices) has the same mass whether the embeddings
/// are normalized at the origin or at `other`.
pub fn basepoint_change_check(
    rs: &RootSystem2,
    other: Point,
    overlap: &Region,
    mode: &CountMode,
) -> Result<BasepointReport> {
    if rs.vertex_type(other) != Some(0) {
        return Err(Error::Precondition("basepoints must be type-0 vertices".into()));
    }
    if !overlap.contains_point(rs, Point::origin()) || !overlap.contains_point(rs, other) {
        return Err(Error::Precondition("the overlap region must contain both basepoints".into()));
    }
    let first = count(rs, &convex_hull(rs, &[Point::origin()], overlap.window)?, overlap, mode)?;
    let second = count(rs, &convex_hull(rs, &[other], overlap.window)?, overlap, mode)?;
    let one = Counted { value: 1, poly: first.poly.as_ref().map(|_| Poly::one()) };
    Ok(BasepointReport {
        from_first: reciprocal(first.value)?,
        from_second: reciprocal(second.value)?,
        equal: cross_equal(&first, &one, &second, &one),
    })
}

/// Translations by the coroots of the positive roots and their negatives:
/// the shortest moves between type-0 vertices along root directions.
pub fn unit_translations(rs: &RootSystem2) -> Vec<Point> {
    let mut out: Vec<Point> = (0..rs.positive_roots.len())
        .flat_map(|k| {
            let c = rs.coroot(k);
            [c, Point::origin() - c]
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{root_data, Kind};

    #[test]
    fn sector_boxes_grow_from_the_origin() {
        let rs = root_data(Kind::A2);
        assert_eq!(sector_box(&rs, 0, 0, 8).unwrap().vertices(&rs), vec![Point::origin()]);
        let b = sector_box(&rs, 1, 1, 8).unwrap();
        assert!(b.contains_alcove(&rs, &Alcove::fundamental(&rs)));
        assert!(in_sector(&rs, &b, Point::origin()));
    }

    #[test]
    fn the_sector_vertex_is_special_of_type_zero() {
        for kind in Kind::ALL {
            let rs = root_data(kind);
            let p = sector_vertex(&rs);
            assert_eq!(rs.vertex_type(p), Some(0));
            assert!(p.0[0] > Q::zero() && p.0[1] > Q::zero());
        }
    }
}
