//! Perspectivities and projectivity groups of finite generalized polygons.
//!
//! For opposite elements `x`, `y` every element incident with `x` has a
//! unique neighbour of `y` on a shortest path towards it; this bijection
//! between the two residues is the perspectivity `x → y`. Compositions
//! along closed chains of pairwise opposite elements returning to `x` form
//! the projectivity group of `x`, acting on the residue of `x`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::GeneralizedPolygon;

/// The perspectivity between the residues of two opposite elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perspectivity {
    pub source: usize,
    pub target: usize,
    /// Residue of the source, sorted.
    pub domain: Vec<usize>,
    /// `image[k]` is the image of `domain[k]`.
    pub image: Vec<usize>,
}

impl Perspectivity {
    pub fn apply(&self, z: usize) -> Option<usize> {
        self.domain.iter().position(|&d| d == z).map(|k| self.image[k])
    }

    /// The inverse map, `target → source`.
    pub fn inverse(&self) -> Perspectivity {
        let mut pairs: Vec<(usize, usize)> = self.image.iter().copied().zip(self.domain.iter().copied()).collect();
        pairs.sort_unstable();
        Perspectivity {
            source: self.target,
            target: self.source,
            domain: pairs.iter().map(|p| p.0).collect(),
            image: pairs.iter().map(|p| p.1).collect(),
        }
    }
}

/// Maps each element incident with `x` to the unique element incident with
/// `y` on the shortest path towards it. Requires `x` and `y` opposite.
pub fn perspectivity(poly: &GeneralizedPolygon, x: usize, y: usize) -> Result<Perspectivity> {
    if x >= poly.len() || y >= poly.len() {
        return Err(Error::Precondition("element out of range".into()));
    }
    if !poly.opposite(x, y) {
        return Err(Error::Precondition(format!("elements {x} and {y} are not opposite")));
    }
    let domain = poly.neighbours(x);
    let image = domain
        .iter()
        .map(|&z| poly.projection(y, z).ok_or_else(|| Error::Inconsistent("projection undefined".into())))
        .collect::<Result<Vec<usize>>>()?;
    Ok(Perspectivity { source: x, target: y, domain, image })
}

/// The projectivity group of an element, as permutations of its residue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectivityGroup {
    pub element: usize,
    /// Residue of the element, sorted; permutations act on positions in it.
    pub residue: Vec<usize>,
    /// All projectivities from the element to itself, sorted.
    pub permutations: Vec<Vec<usize>>,
    /// Order of the subgroup of projectivities along chains of even length.
    pub even_order: usize,
    /// Number of distinct single perspectivities out of the element.
    pub generators: usize,
    pub two_transitive: bool,
}

impl ProjectivityGroup {
    pub fn order(&self) -> usize {
        self.permutations.len()
    }
}

/// Whether a set of permutations of `0..n` acts 2-transitively.
pub fn is_two_transitive(perms: &[Vec<usize>], n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let pairs: BTreeSet<(usize, usize)> = perms.iter().map(|p| (p[0], p[1])).collect();
    pairs.len() == n * (n - 1)
}

/// Computes the projectivity group of `x` by closing the groupoid of
/// projectivities out of `x` under composition with perspectivities.
pub fn projectivity_group(poly: &GeneralizedPolygon, x: usize) -> Result<ProjectivityGroup> {
    if x >= poly.len() {
        return Err(Error::Precondition(format!("element {x} is out of range")));
    }
    let residue = poly.neighbours(x);
    let n = poly.len();
    let opposites: Vec<Vec<usize>> = (0..n).map(|y| (0..n).filter(|&z| poly.opposite(y, z)).collect()).collect();
    // Perspectivities as maps on element ids, cached per ordered pair.
    let mut persp: BTreeMap<(usize, usize), Perspectivity> = BTreeMap::new();
    // A state: current element, images of the residue of x (in residue order), parity.
    let start = (x, residue.clone(), false);
    let mut seen: BTreeSet<(usize, Vec<usize>, bool)> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((y, images, odd)) = queue.pop_front() {
        for &z in &opposites[y] {
            if let std::collections::btree_map::Entry::Vacant(e) = persp.entry((y, z)) {
                e.insert(perspectivity(poly, y, z)?);
            }
            let p = &persp[&(y, z)];
            let next: Vec<usize> = images.iter().map(|&e| p.apply(e).expect("residue element")).collect();
            let state = (z, next, !odd);
            if seen.insert(state.clone()) {
                queue.push_back(state);
            }
        }
    }
    let position = |e: usize| residue.iter().position(|&r| r == e).expect("residue element");
    let mut all = BTreeSet::new();
    let mut even = BTreeSet::new();
    for (y, images, odd) in &seen {
        if *y == x {
            let perm: Vec<usize> = images.iter().map(|&e| position(e)).collect();
            if !odd {
                even.insert(perm.clone());
            }
            all.insert(perm);
        }
    }
    let permutations: Vec<Vec<usize>> = all.into_iter().collect();
    let generators: BTreeSet<Vec<usize>> = opposites[x].iter().map(|&z| persp[&(x, z)].image.clone()).collect();
    Ok(ProjectivityGroup {
        element: x,
        two_transitive: is_two_transitive(&permutations, residue.len()),
        residue,
        even_order: even.len(),
        generators: generators.len(),
        permutations,
    })
}

/// Checks that opposition in the polygon realizes the given map on types
/// at infinity: an element of type `t` (`0` points, `1` lines, matching
/// vertex types `1`, `2`) is opposite only elements of type `opposite(t)`.
pub fn opposition_types(poly: &GeneralizedPolygon) -> [Option<u8>; 2] {
    let mut out = [None, None];
    for (t, slot) in out.iter_mut().enumerate() {
        let Some(x) = (0..poly.len()).find(|&x| poly.element_type(x) as usize == t) else { continue };
        let types: BTreeSet<u8> =
            (0..poly.len()).filter(|&y| poly.opposite(x, y)).map(|y| poly.element_type(y)).collect();
        if types.len() == 1 {
            *slot = types.into_iter().next().map(|s| s + 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_on_three_points_is_two_transitive() {
        let s3: Vec<Vec<usize>> =
            vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]];
        assert!(is_two_transitive(&s3, 3));
        let a3: Vec<Vec<usize>> = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        assert!(!is_two_transitive(&a3, 3));
    }

    #[test]
    fn fano_perspectivity_maps_lines_to_points() {
        let fano = GeneralizedPolygon::fano();
        let y = (0..fano.len()).find(|&y| fano.opposite(0, y)).unwrap();
        let p = perspectivity(&fano, 0, y).unwrap();
        assert!(p.domain.iter().all(|&z| fano.element_type(z) == 1));
        assert!(p.image.iter().all(|&z| fano.element_type(z) == 0));
    }
}
