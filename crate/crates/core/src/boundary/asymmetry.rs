//! Search for asymmetric extension patterns in spherical buildings of
//! rank 2 (finite generalized polygons).
//!
//! Chambers are flags; a chamber subcomplex is gallery-convex if it contains
//! every minimal gallery between two of its chambers. The search looks for
//! convex subcomplexes `Y ⊆ Z = conv(Y ∪ {c})` (with `Z` proper), a convex
//! `Y'` and a type-preserving isomorphism `φ: Y → Y'` that does not extend
//! to an isomorphism of `Z` onto a convex subcomplex. Such a pattern shows
//! that the category of convex subcomplexes with type-preserving embeddings
//! is not symmetric, even though both `Y ↪ X` and `Y' ↪ X` are embeddings.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::GeneralizedPolygon;

type Mask = u64;

/// The flag complex of a polygon with gallery distances.
struct FlagComplex<'a> {
    poly: &'a GeneralizedPolygon,
    flags: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    /// `interval[a][b]`: chambers on minimal galleries from `a` to `b`.
    interval: Vec<Vec<Mask>>,
    adjacent: Vec<Vec<usize>>,
}

impl<'a> FlagComplex<'a> {
    fn new(poly: &'a GeneralizedPolygon) -> Result<Self> {
        let flags = poly.flags();
        if flags.len() > 64 {
            return Err(Error::Unsupported(format!("flag complex with {} chambers exceeds 64", flags.len())));
        }
        let index: HashMap<(usize, usize), usize> = flags.iter().enumerate().map(|(k, &f)| (f, k)).collect();
        let adjacent: Vec<Vec<usize>> = (0..flags.len())
            .map(|a| {
                (0..flags.len()).filter(|&b| b != a && (flags[a].0 == flags[b].0 || flags[a].1 == flags[b].1)).collect()
            })
            .collect();
        let dist: Vec<Vec<u16>> = (0..flags.len())
            .map(|s| {
                let mut d = vec![u16::MAX; flags.len()];
                d[s] = 0;
                let mut queue = VecDeque::from([s]);
                while let Some(a) = queue.pop_front() {
                    for &b in &adjacent[a] {
                        if d[b] == u16::MAX {
                            d[b] = d[a] + 1;
                            queue.push_back(b);
                        }
                    }
                }
                d
            })
            .collect();
        let n = flags.len();
        let interval = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).filter(|&c| dist[a][c] + dist[c][b] == dist[a][b]).fold(0, |m, c| m | (1 << c)))
                    .collect()
            })
            .collect();
        Ok(FlagComplex { poly, flags, index, interval, adjacent })
    }

    fn all(&self) -> Mask {
        if self.flags.len() == 64 {
            Mask::MAX
        } else {
            (1 << self.flags.len()) - 1
        }
    }

    fn hull(&self, mut set: Mask) -> Mask {
        loop {
            let mut next = set;
            for a in bits(set) {
                for b in bits(set & !((2 << a) - 1)) {
                    next |= self.interval[a][b];
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }

    /// Elements (vertices) of a chamber set, sorted.
    fn vertices(&self, set: Mask) -> Vec<usize> {
        let v: BTreeSet<usize> = bits(set).flat_map(|c| [self.flags[c].0, self.flags[c].1]).collect();
        v.into_iter().collect()
    }

    fn neighbours_of(&self, set: Mask) -> Vec<usize> {
        let v: BTreeSet<usize> =
            bits(set).flat_map(|c| self.adjacent[c].iter().copied()).filter(|&d| set & (1 << d) == 0).collect();
        v.into_iter().collect()
    }

    fn signature(&self, set: Mask) -> Signature {
        let mut sig: Signature = self
            .vertices(set)
            .into_iter()
            .map(|v| {
                (self.poly.element_type(v), bits(set).filter(|&c| self.flags[c].0 == v || self.flags[c].1 == v).count())
            })
            .collect();
        sig.sort_unstable();
        sig
    }

    /// Type-preserving isomorphisms from the complex `set` onto the complex
    /// `target` extending `partial` (vertex map), injective on vertices and
    /// mapping the chamber set exactly onto the target chamber set.
    fn isomorphisms(
        &self,
        set: Mask,
        target: Mask,
        partial: &BTreeMap<usize, usize>,
        limit: usize,
    ) -> Vec<BTreeMap<usize, usize>> {
        let verts = self.vertices(set);
        let tverts = self.vertices(target);
        if verts.len() != tverts.len() || set.count_ones() != target.count_ones() {
            return Vec::new();
        }
        let free: Vec<usize> = verts.iter().copied().filter(|v| !partial.contains_key(v)).collect();
        let mut out = Vec::new();
        let mut map = partial.clone();
        self.extend_iso(set, target, &free, &tverts, &mut map, &mut out, limit);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_iso(
        &self,
        set: Mask,
        target: Mask,
        free: &[usize],
        tverts: &[usize],
        map: &mut BTreeMap<usize, usize>,
        out: &mut Vec<BTreeMap<usize, usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        // Every chamber with both vertices mapped must map to a target chamber.
        for c in bits(set) {
            let (p, l) = self.flags[c];
            if let (Some(&a), Some(&b)) = (map.get(&p), map.get(&l)) {
                match self.index.get(&(a, b)) {
                    Some(&d) if target & (1 << d) != 0 => {}
                    _ => return,
                }
            }
        }
        let Some((&v, rest)) = free.split_first() else {
            out.push(map.clone());
            return;
        };
        let used: BTreeSet<usize> = map.values().copied().collect();
        for &w in tverts {
            if used.contains(&w) || self.poly.element_type(w) != self.poly.element_type(v) {
                continue;
            }
            map.insert(v, w);
            self.extend_iso(set, target, rest, tverts, map, out, limit);
            map.remove(&v);
        }
    }

    fn flag_list(&self, set: Mask) -> Vec<(usize, usize)> {
        bits(set).map(|c| self.flags[c]).collect()
    }
}

/// Type-preserving automorphisms of a polygon (permutations of elements
/// preserving incidence), by backtracking along a breadth-first order.
pub fn polygon_automorphisms(poly: &GeneralizedPolygon) -> Vec<Vec<usize>> {
    let n = poly.len();
    let adj: Vec<Vec<usize>> = (0..n).map(|x| poly.neighbours(x)).collect();
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut k = 0;
    while k < order.len() {
        for &y in &adj[order[k]] {
            if !seen[y] {
                seen[y] = true;
                order.push(y);
            }
        }
        k += 1;
    }
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        poly: &GeneralizedPolygon,
        adj: &[Vec<usize>],
        order: &[usize],
        k: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == order.len() {
            out.push(image.clone());
            return;
        }
        let x = order[k];
        for y in 0..poly.len() {
            if used[y] || poly.element_type(y) != poly.element_type(x) {
                continue;
            }
            let ok = order[..k].iter().all(|&z| adj[x].contains(&z) == adj[y].contains(&image[z]));
            if !ok {
                continue;
            }
            image[x] = y;
            used[y] = true;
            go(poly, adj, order, k + 1, image, used, out);
            used[y] = false;
            image[x] = usize::MAX;
        }
    }
    go(poly, &adj, &order, 0, &mut image, &mut used, &mut out);
    out
}

fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let k = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(k)
        }
    })
}

/// All convex chamber sets with at most `max_chambers` chambers.
fn convex_sets(fc: &FlagComplex, max_chambers: usize) -> Vec<Mask> {
    let mut seen: BTreeSet<Mask> = BTreeSet::new();
    let mut queue: VecDeque<Mask> = VecDeque::new();
    for c in 0..fc.flags.len() {
        let m = 1 << c;
        if seen.insert(m) {
            queue.push_back(m);
        }
    }
    while let Some(s) = queue.pop_front() {
        for d in fc.neighbours_of(s) {
            let h = fc.hull(s | (1 << d));
            if h.count_ones() as usize <= max_chambers && seen.insert(h) {
                queue.push_back(h);
            }
        }
    }
    seen.into_iter().collect()
}

/// A pattern `Y ⊆ Z`, `φ: Y ≅ Y'` where `φ` does not extend to `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymmetryWitness {
    /// Chambers (flags) of `Y`.
    pub y: Vec<(usize, usize)>,
    /// The chamber added to `Y`.
    pub added: (usize, usize),
    /// Chambers of `Z = conv(Y ∪ {added})`.
    pub z: Vec<(usize, usize)>,
    /// Chambers of `Y'`.
    pub y_prime: Vec<(usize, usize)>,
    /// The isomorphism `φ` on vertices.
    pub iso: Vec<(usize, usize)>,
    /// For each candidate image of the added chamber: the number of chambers
    /// of `conv(Y' ∪ {candidate})`.
    pub candidate_hulls: Vec<((usize, usize), usize)>,
    /// Number of chambers of the whole complex.
    pub total: usize,
}

/// Outcome of [`asymmetry_search`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AsymmetryOutcome {
    Witness(Box<AsymmetryWitness>),
    /// No witness with `|Y| ≤ max_chambers`; `examined` patterns were checked.
    Exhausted {
        examined: usize,
    },
}

/// A candidate chamber `(point, line)` with the size of its hull.
type CandidateHull = ((usize, usize), usize);

/// Incidence-type profile of a chamber set, invariant under automorphisms.
type Signature = Vec<(u8, usize)>;

/// Whether the isomorphism `phi: y → y'` extends to an isomorphism of
/// `z = conv(y ∪ {c})` onto a convex subcomplex. Returns the candidate hull
/// sizes when it does not.
fn extension_exists(
    fc: &FlagComplex,
    y: Mask,
    c: usize,
    z: Mask,
    y2: Mask,
    phi: &BTreeMap<usize, usize>,
) -> std::result::Result<(), Vec<CandidateHull>> {
    let (p, l) = fc.flags[c];
    let mut hulls = Vec::new();
    for d in 0..fc.flags.len() {
        if y2 & (1 << d) != 0 {
            continue;
        }
        let (p2, l2) = fc.flags[d];
        if phi.get(&p).is_some_and(|&x| x != p2) || phi.get(&l).is_some_and(|&x| x != l2) {
            continue;
        }
        if !phi.contains_key(&p) && !phi.contains_key(&l) {
            continue;
        }
        if (!phi.contains_key(&p) && phi.values().any(|&x| x == p2))
            || (!phi.contains_key(&l) && phi.values().any(|&x| x == l2))
        {
            continue;
        }
        let image_hull = fc.hull(y2 | (1 << d));
        hulls.push((fc.flags[d], image_hull.count_ones() as usize));
        if image_hull.count_ones() > z.count_ones() {
            continue;
        }
        let mut partial = phi.clone();
        partial.insert(p, p2);
        partial.insert(l, l2);
        // The image of z is convex and contains conv(Y' ∪ {d}); search over
        // convex chamber sets of the right size containing that hull.
        if image_hull.count_ones() == z.count_ones() {
            if !fc.isomorphisms(z, image_hull, &partial, 1).is_empty() {
                return Ok(());
            }
        } else if convex_supersets(fc, image_hull, z.count_ones() as usize)
            .into_iter()
            .any(|t| !fc.isomorphisms(z, t, &partial, 1).is_empty())
        {
            return Ok(());
        }
    }
    let _ = y;
    Err(hulls)
}

/// Convex chamber sets of exactly `size` chambers containing `base`.
fn convex_supersets(fc: &FlagComplex, base: Mask, size: usize) -> Vec<Mask> {
    let mut seen = BTreeSet::from([base]);
    let mut queue = VecDeque::from([base]);
    let mut out = Vec::new();
    while let Some(s) = queue.pop_front() {
        if s.count_ones() as usize == size {
            out.push(s);
            continue;
        }
        for d in fc.neighbours_of(s) {
            let h = fc.hull(s | (1 << d));
            if h.count_ones() as usize <= size && seen.insert(h) {
                queue.push_back(h);
            }
        }
    }
    out
}

/// Searches for an asymmetric extension pattern with `|Y| ≤ max_chambers`.
///
/// Candidates are examined in order of increasing `|Y|`; the first witness
/// is returned.
pub fn asymmetry_search(poly: &GeneralizedPolygon, max_chambers: usize) -> Result<AsymmetryOutcome> {
    let fc = FlagComplex::new(poly)?;
    let all = fc.all();
    let sets = convex_sets(&fc, max_chambers);
    // Witnesses are transported by automorphisms, so `Y` ranges over orbit
    // representatives (the smallest mask in each orbit).
    let flag_perms: Vec<Vec<usize>> = polygon_automorphisms(poly)
        .into_iter()
        .map(|g| fc.flags.iter().map(|&(p, l)| fc.index[&(g[p], g[l])]).collect())
        .collect();
    let is_representative =
        |m: Mask| flag_perms.iter().all(|g| bits(m).fold(0 as Mask, |acc, c| acc | (1 << g[c])) >= m);
    let mut by_signature: BTreeMap<(u32, Signature), Vec<Mask>> = BTreeMap::new();
    for &s in &sets {
        by_signature.entry((s.count_ones(), fc.signature(s))).or_default().push(s);
    }
    let mut keys: Vec<&(u32, Vec<(u8, usize)>)> = by_signature.keys().collect();
    keys.sort_by_key(|k| k.0);
    let mut examined = 0usize;
    for key in keys {
        let class = &by_signature[key];
        for &y in class.iter().filter(|&&y| is_representative(y)) {
            let extensions: Vec<(usize, Mask)> = fc
                .neighbours_of(y)
                .into_iter()
                .map(|c| (c, fc.hull(y | (1 << c))))
                .filter(|&(_, z)| z != all)
                .collect();
            if extensions.is_empty() {
                continue;
            }
            for &y2 in class {
                for phi in fc.isomorphisms(y, y2, &BTreeMap::new(), usize::MAX) {
                    for &(c, z) in &extensions {
                        examined += 1;
                        if let Err(candidate_hulls) = extension_exists(&fc, y, c, z, y2, &phi) {
                            return Ok(AsymmetryOutcome::Witness(Box::new(AsymmetryWitness {
                                y: fc.flag_list(y),
                                added: fc.flags[c],
                                z: fc.flag_list(z),
                                y_prime: fc.flag_list(y2),
                                iso: phi.into_iter().collect(),
                                candidate_hulls,
                                total: fc.flags.len(),
                            })));
                        }
                    }
                }
            }
        }
    }
    Ok(AsymmetryOutcome::Exhausted { examined })
}

/// Independent re-check of a witness by brute force over all vertex maps of
/// `Z`: no injective type-preserving map extending `φ` sends the chambers of
/// `Z` onto a convex chamber set of the same size. Also checks that `Y`,
/// `Y'` and `Z` are convex, `Z` is proper and `φ` is an isomorphism.
pub fn verify_witness(poly: &GeneralizedPolygon, w: &AsymmetryWitness) -> Result<bool> {
    let fc = FlagComplex::new(poly)?;
    let mask = |fl: &[(usize, usize)]| -> Result<Mask> {
        fl.iter().try_fold(0, |m, f| {
            fc.index.get(f).map(|&k| m | (1 << k)).ok_or_else(|| Error::Precondition(format!("{f:?} is not a flag")))
        })
    };
    let (y, z, y2) = (mask(&w.y)?, mask(&w.z)?, mask(&w.y_prime)?);
    let c = fc.index.get(&w.added).copied().ok_or_else(|| Error::Precondition("added chamber is not a flag".into()))?;
    let convex = |m: Mask| fc.hull(m) == m;
    if !(convex(y) && convex(y2) && convex(z) && z != fc.all() && fc.hull(y | (1 << c)) == z) {
        return Ok(false);
    }
    let phi: BTreeMap<usize, usize> = w.iso.iter().copied().collect();
    if fc.isomorphisms(y, y2, &phi, 1).is_empty() || phi.len() != fc.vertices(y).len() {
        return Ok(false);
    }
    // Brute force over the vertices of z outside y.
    let extra: Vec<usize> = fc.vertices(z).into_iter().filter(|v| !phi.contains_key(v)).collect();
    let mut map = phi.clone();
    fn search(fc: &FlagComplex, z: Mask, extra: &[usize], map: &mut BTreeMap<usize, usize>) -> bool {
        let Some((&v, rest)) = extra.split_first() else {
            let mut image: Mask = 0;
            for c in bits(z) {
                let (p, l) = fc.flags[c];
                match fc.index.get(&(map[&p], map[&l])) {
                    Some(&d) => image |= 1 << d,
                    None => return false,
                }
            }
            return image.count_ones() == z.count_ones() && fc.hull(image) == image;
        };
        for w in 0..fc.poly.len() {
            if fc.poly.element_type(w) != fc.poly.element_type(v) || map.values().any(|&x| x == w) {
                continue;
            }
            map.insert(v, w);
            if search(fc, z, rest, map) {
                return true;
            }
            map.remove(&v);
        }
        false
    }
    Ok(!search(&fc, z, &extra, &mut map))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphism_groups_have_the_classical_orders() {
        assert_eq!(polygon_automorphisms(&GeneralizedPolygon::fano()).len(), 168);
        assert_eq!(polygon_automorphisms(&GeneralizedPolygon::w2()).len(), 720);
        assert_eq!(polygon_automorphisms(&GeneralizedPolygon::thin(4).unwrap()).len(), 8);
    }

    #[test]
    fn opposite_chambers_span_an_apartment() {
        let w2 = GeneralizedPolygon::w2();
        let fc = FlagComplex::new(&w2).unwrap();
        let far = (1..fc.flags.len()).find(|&b| fc.interval[0][b].count_ones() == 8).unwrap();
        assert_eq!(fc.hull((1 << 0) | (1 << far)).count_ones(), 8);
    }
}
