//! Comparability of morphisms and the catalog checker.
//!
//! A morphism is a type-preserving embedding `source → target` of convex
//! regions, given by an automorphism of the model apartment. Two morphisms
//! are comparable if that follows from the generating rules:
//! conjugation by isomorphisms, composition of comparable pieces, and
//! cancellation of comparable outer pieces. Comparable morphisms have equal
//! extension counts; [`comparability_check`] validates witness trees and
//! compares counts on a thickness grid.

use serde::{Deserialize, Serialize};

use super::flat::count_flat;
use crate::coxeter::{AffineMap, Point, Region, RootSystem2, Thickness, Wall};
use crate::error::{Error, Result};

/// A type-preserving embedding of regions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub source: Region,
    pub target: Region,
    pub map: AffineMap,
}

impl Morphism {
    /// Validates the morphism: type-preserving map, image inside the target.
    pub fn check(&self, rs: &RootSystem2) -> Result<()> {
        if !self.map.is_type_preserving(rs) {
            return Err(Error::Inconsistent("morphism map is not type-preserving".into()));
        }
        if !self.image(rs)?.is_subset(&self.target.tighten(rs)?) {
            return Err(Error::Inconsistent("morphism image leaves its target".into()));
        }
        Ok(())
    }

    /// Image of the source in the target.
    pub fn image(&self, rs: &RootSystem2) -> Result<Region> {
        let m = self.map;
        self.source.map_points(rs, |p| m.apply(p))
    }

    /// Extension count of the morphism.
    pub fn count(&self, rs: &RootSystem2, th: &Thickness) -> Result<u64> {
        Ok(count_flat(rs, &self.image(rs)?, &self.target, th)?.value)
    }
}

/// A derivation of comparability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// The two morphisms coincide.
    Identity,
    /// Isomorphisms `κ: Y → Y'`, `λ: Z → Z'` with `λ∘ι = ι'∘κ`.
    Conjugate { source_iso: AffineMap, target_iso: AffineMap },
    /// `ι = ω∘α`, `ι' = ω'∘α'` with `α ~ α'` and `ω ~ ω'`.
    Compose { alpha: Box<(Morphism, Morphism, Witness)>, omega: Box<(Morphism, Morphism, Witness)> },
    /// `μ = ω∘ι∘α`, `μ' = ω'∘ι'∘α'` with `α ~ α'`, `ω ~ ω'`, `μ ~ μ'`.
    Factor {
        alpha: Box<(Morphism, Morphism, Witness)>,
        omega: Box<(Morphism, Morphism, Witness)>,
        mu: Box<(Morphism, Morphism, Witness)>,
    },
    /// Transitivity through a middle morphism.
    Trans { middle: Box<Morphism>, first: Box<Witness>, second: Box<Witness> },
}

/// A catalog entry: two morphisms claimed comparable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub left: Morphism,
    pub right: Morphism,
    pub witness: Witness,
}

/// Result of checking a catalog.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparabilityReport {
    pub checked: usize,
    /// Names of entries whose counts differ, with the offending thickness.
    pub failures: Vec<String>,
}

fn same_map_on(rs: &RootSystem2, region: &Region, f: &AffineMap, g: &AffineMap) -> Result<bool> {
    Ok(region.tighten(rs)?.vertices(rs).into_iter().all(|p| f.apply(p) == g.apply(p)))
}

fn same_region(rs: &RootSystem2, a: &Region, b: &Region) -> Result<bool> {
    Ok(a.tighten(rs)?.levels == b.tighten(rs)?.levels)
}

fn malformed(msg: &str) -> Error {
    Error::Inconsistent(format!("malformed comparability witness: {msg}"))
}

/// Checks that `outer ∘ inner = whole` (sources, targets and maps).
fn check_composite(rs: &RootSystem2, whole: &Morphism, inner: &Morphism, outer: &Morphism) -> Result<()> {
    if !same_region(rs, &whole.source, &inner.source)?
        || !same_region(rs, &inner.target, &outer.source)?
        || !same_region(rs, &outer.target, &whole.target)?
    {
        return Err(malformed("composite pieces do not fit together"));
    }
    if !same_map_on(rs, &whole.source, &outer.map.compose(&inner.map), &whole.map)? {
        return Err(malformed("composite map differs"));
    }
    Ok(())
}

fn check_pair(rs: &RootSystem2, triple: &(Morphism, Morphism, Witness)) -> Result<()> {
    check_witness(rs, &triple.0, &triple.1, &triple.2)
}

/// Validates a witness for `left ~ right`.
pub fn check_witness(rs: &RootSystem2, left: &Morphism, right: &Morphism, w: &Witness) -> Result<()> {
    left.check(rs)?;
    right.check(rs)?;
    match w {
        Witness::Identity => {
            if !same_region(rs, &left.source, &right.source)?
                || !same_region(rs, &left.target, &right.target)?
                || !same_map_on(rs, &left.source, &left.map, &right.map)?
            {
                return Err(malformed("identity between different morphisms"));
            }
        }
        Witness::Conjugate { source_iso, target_iso } => {
            for (iso, from, to) in
                [(source_iso, &left.source, &right.source), (target_iso, &left.target, &right.target)]
            {
                if !iso.is_type_preserving(rs) {
                    return Err(malformed("isomorphism is not type-preserving"));
                }
                if !same_region(rs, &from.map_points(rs, |p| iso.apply(p))?, to)? {
                    return Err(malformed("isomorphism does not map the regions onto each other"));
                }
            }
            let lhs = target_iso.compose(&left.map);
            let rhs = right.map.compose(source_iso);
            if !same_map_on(rs, &left.source, &lhs, &rhs)? {
                return Err(malformed("conjugation square does not commute"));
            }
        }
        Witness::Compose { alpha, omega } => {
            check_composite(rs, left, &alpha.0, &omega.0)?;
            check_composite(rs, right, &alpha.1, &omega.1)?;
            check_pair(rs, alpha)?;
            check_pair(rs, omega)?;
        }
        Witness::Factor { alpha, omega, mu } => {
            for (mid, a, o, m) in [(left, &alpha.0, &omega.0, &mu.0), (right, &alpha.1, &omega.1, &mu.1)] {
                let inner =
                    Morphism { source: a.source.clone(), target: mid.target.clone(), map: mid.map.compose(&a.map) };
                check_composite(rs, &inner, a, mid)?;
                check_composite(rs, m, &inner, o)?;
            }
            check_pair(rs, alpha)?;
            check_pair(rs, omega)?;
            check_pair(rs, mu)?;
        }
        Witness::Trans { middle, first, second } => {
            check_witness(rs, left, middle, first)?;
            check_witness(rs, middle, right, second)?;
        }
    }
    Ok(())
}

/// Validates every witness and compares counts on every thickness of the grid.
pub fn comparability_check(
    rs: &RootSystem2,
    catalog: &[CatalogEntry],
    grid: &[Thickness],
) -> Result<ComparabilityReport> {
    let mut report = ComparabilityReport::default();
    for entry in catalog {
        check_witness(rs, &entry.left, &entry.right, &entry.witness)?;
        for th in grid {
            let (a, b) = (entry.left.count(rs, th)?, entry.right.count(rs, th)?);
            if a != b {
                report.failures.push(format!("{}: {a} vs {b} at q = {:?}", entry.name, th.q));
            }
        }
        report.checked += 1;
    }
    Ok(report)
}

/// A type-preserving automorphism sending the fundamental vertex of the same
/// type to `x`.
pub fn carry_to(rs: &RootSystem2, x: Point) -> AffineMap {
    let (_, walls) = rs.fold(x);
    walls.iter().fold(AffineMap::identity(), |acc, &w| acc.compose(&AffineMap::reflection(rs, w)))
}

/// The segment complex `E_i`: the hull of two type-`i` vertices at minimal
/// distance, with a reflection exchanging them. Returns the region, the two
/// vertices and the reflection.
pub fn e_segment(rs: &RootSystem2, i: u8, window: i64) -> Result<(Region, [Point; 2], AffineMap)> {
    let p = rs.fundamental_vertices()[i as usize];
    let around = Region { kind: rs.kind, levels: vec![(-3, 3); rs.positive_roots.len()], window: 4 };
    let d2 = |q: Point| {
        let d = q - p;
        rs.inner(d, d)
    };
    let q = around
        .vertices(rs)
        .into_iter()
        .filter(|&q| q != p && rs.vertex_type(q) == Some(i))
        .min_by_key(|&q| (d2(q), q))
        .ok_or_else(|| Error::Inconsistent("no second vertex of the type nearby".into()))?;
    let refl = rs
        .positive_roots
        .iter()
        .find_map(|&c| {
            let mid = (crate::coxeter::eval_root(c, p) + crate::coxeter::eval_root(c, q)) / crate::Q::from_integer(2);
            if !mid.is_integer() {
                return None;
            }
            let w = Wall { root: c, level: mid.to_integer() };
            (rs.reflect(p, w) == q).then(|| AffineMap::reflection(rs, w))
        })
        .ok_or_else(|| Error::Inconsistent("no reflection exchanges the segment ends".into()))?;
    Ok((crate::coxeter::convex_hull(rs, &[p, q], window)?, [p, q], refl))
}

/// The stabilizer of a vertex in the group of type-preserving automorphisms
/// (generated by the reflections in walls through it).
pub fn vertex_stabilizer(rs: &RootSystem2, p: Point) -> Vec<AffineMap> {
    let gens: Vec<AffineMap> = rs.walls_through(p).into_iter().map(|w| AffineMap::reflection(rs, w)).collect();
    let mut group = vec![AffineMap::identity()];
    let mut k = 0;
    while k < group.len() {
        let g = group[k];
        for r in &gens {
            let h = g.compose(r);
            if !group.contains(&h) {
                group.push(h);
            }
        }
        k += 1;
    }
    group
}

/// Vertex inclusions `V_i → Z` at every type-`i` vertex of `Z` reachable
/// from the first one through copies of `E_i` inside `Z`, each paired with
/// the inclusion at that first vertex and justified by the chain of copies.
pub fn e_chain_catalog(rs: &RootSystem2, i: u8, z: &Region) -> Result<Vec<CatalogEntry>> {
    let z = z.tighten(rs)?;
    let (e, [p, q], refl) = e_segment(rs, i, z.window)?;
    let point = crate::coxeter::convex_hull(rs, &[p], z.window)?;
    let stab = vertex_stabilizer(rs, p);
    let verts: Vec<Point> = z.vertices(rs).into_iter().filter(|&v| rs.vertex_type(v) == Some(i)).collect();
    if verts.is_empty() {
        return Ok(Vec::new());
    }
    let incl = |x: Point| Morphism { source: point.clone(), target: z.clone(), map: carry_to(rs, x) };
    // An isomorphism of E_i onto a copy inside Z with p ↦ x and q ↦ y.
    let copy = |x: Point, y: Point| -> Result<Option<AffineMap>> {
        let g0 = carry_to(rs, x);
        for s in &stab {
            let g = g0.compose(s);
            if g.apply(q) == y {
                let img = e.map_points(rs, |pt| g.apply(pt))?;
                return Ok(img.is_subset(&z).then_some(g));
            }
        }
        Ok(None)
    };
    let mut parent: Vec<Option<(usize, AffineMap)>> = vec![None; verts.len()];
    let mut seen = vec![false; verts.len()];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        for b in 0..verts.len() {
            if seen[b] {
                continue;
            }
            if let Some(g) = copy(verts[a], verts[b])? {
                seen[b] = true;
                parent[b] = Some((a, g));
                queue.push_back(b);
            }
        }
    }
    // Inclusions at x = g(p) and y = g(q) both factor through g: E_i → Z,
    // and the two inclusions of the point into E_i differ by the reflection.
    let step = |g: AffineMap| -> Witness {
        let alpha = Morphism { source: point.clone(), target: e.clone(), map: AffineMap::identity() };
        let alpha_swapped = Morphism { source: point.clone(), target: e.clone(), map: refl };
        let omega = Morphism { source: e.clone(), target: z.clone(), map: g };
        Witness::Compose {
            alpha: Box::new((
                alpha,
                alpha_swapped,
                Witness::Conjugate { source_iso: AffineMap::identity(), target_iso: refl },
            )),
            omega: Box::new((omega.clone(), omega, Witness::Identity)),
        }
    };
    let mut entries = Vec::new();
    for k in 1..verts.len() {
        if !seen[k] {
            continue;
        }
        let mut path = vec![k];
        while let Some((pk, _)) = parent[*path.last().expect("nonempty")] {
            path.push(pk);
        }
        path.reverse();
        let mut witness: Option<Witness> = None;
        for w in path.windows(2) {
            let g = parent[w[1]].expect("tree edge").1;
            let s = step(g);
            witness = Some(match witness.take() {
                None => s,
                Some(prev) => {
                    Witness::Trans { middle: Box::new(incl(verts[w[0]])), first: Box::new(prev), second: Box::new(s) }
                }
            });
        }
        entries.push(CatalogEntry {
            name: format!("{}-type{i}-vertex-{k}", rs.kind),
            left: incl(verts[0]),
            right: incl(verts[k]),
            witness: witness.expect("path has a step"),
        });
    }
    Ok(entries)
}

/// Pair `(y ⊆ z)` with its image under a type-preserving automorphism `g`.
pub fn conjugate_entry(rs: &RootSystem2, name: &str, y: &Region, z: &Region, g: AffineMap) -> Result<CatalogEntry> {
    let left = Morphism { source: y.clone(), target: z.clone(), map: AffineMap::identity() };
    let right = Morphism {
        source: y.map_points(rs, |p| g.apply(p))?,
        target: z.map_points(rs, |p| g.apply(p))?,
        map: AffineMap::identity(),
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        left,
        right,
        witness: Witness::Conjugate { source_iso: g, target_iso: g },
    })
}
