//! Finite inverse systems of constant-to-one maps and their measures.

use std::collections::VecDeque;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{qi, serde_q, Q};

/// A finite stage. Every element carries the same mass (a rescaled counting
/// measure); `mass` is that per-element mass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinStage {
    pub name: String,
    /// Opaque element ids (for instance vertex sequences of an embedding).
    pub elements: Vec<Vec<u32>>,
    #[serde(with = "serde_q")]
    pub mass: Q,
}

impl FinStage {
    pub fn new(name: impl Into<String>, elements: Vec<Vec<u32>>) -> Self {
        FinStage { name: name.into(), elements, mass: Q::zero() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Total mass of the stage.
    pub fn total_mass(&self) -> Q {
        self.mass * qi(self.len() as i64)
    }
}

/// A constant-to-one map from stage `source` onto stage `target`
/// (so `target ≤ source` in the index order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtoMap {
    pub source: usize,
    pub target: usize,
    pub map: Vec<usize>,
    pub fiber_size: u64,
}

impl CtoMap {
    /// Builds the map and computes its fiber size, failing unless every
    /// fiber has the same positive size.
    pub fn new(source: usize, target: usize, map: Vec<usize>, target_len: usize) -> Result<CtoMap> {
        let n = fiber_size(&map, target_len)?;
        Ok(CtoMap { source, target, map, fiber_size: n })
    }
}

/// Common fiber size of `map: source → 0..target_len`, or an error if the
/// fibers differ (which includes non-surjective maps).
pub fn fiber_size(map: &[usize], target_len: usize) -> Result<u64> {
    if target_len == 0 {
        return Err(Error::Inconsistent("constant-to-one map onto an empty stage".into()));
    }
    let mut counts = vec![0u64; target_len];
    for &y in map {
        *counts.get_mut(y).ok_or_else(|| Error::Inconsistent(format!("map value {y} out of range")))? += 1;
    }
    let n = counts[0];
    if n == 0 || counts.iter().any(|&c| c != n) {
        return Err(Error::Inconsistent(format!(
            "map is not constant-to-one (fiber sizes range over {}..={})",
            counts.iter().min().expect("nonempty"),
            counts.iter().max().expect("nonempty")
        )));
    }
    Ok(n)
}

/// The uniform measure relative to a rescaled counting measure of
/// per-element mass `target_mass` along an `n`-to-one map: mass `ν/n` per element.
pub fn relatively_uniform(target_mass: Q, map: &[usize], target_len: usize) -> Result<Q> {
    let n = fiber_size(map, target_len)?;
    Ok(target_mass / qi(n as i64))
}

/// Pushforward of an arbitrary per-element mass vector along a map.
pub fn pushforward(masses: &[Q], map: &[usize], target_len: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); target_len];
    for (x, &y) in map.iter().enumerate() {
        out[y] += masses[x];
    }
    out
}

/// A finite inverse system indexed by a finite directed poset. Only the
/// covering maps are stored; maps between other comparable pairs are their
/// composites, which are checked to be path-independent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvSystem {
    pub name: String,
    pub stages: Vec<FinStage>,
    pub maps: Vec<CtoMap>,
    /// Base index: its stage carries the counting measure.
    pub base: usize,
    #[serde(skip)]
    composite: Vec<Vec<Option<Vec<usize>>>>,
}

/// A cylinder: the preimage in the limit of a subset of one stage.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cylinder {
    pub index: usize,
    /// Sorted, deduplicated element positions in the stage.
    pub subset: Vec<usize>,
}

impl Cylinder {
    pub fn new(index: usize, mut subset: Vec<usize>) -> Cylinder {
        subset.sort_unstable();
        subset.dedup();
        Cylinder { index, subset }
    }
}

/// A finite linear combination of cylinder indicators.
pub type CylinderFunction = Vec<(Q, Cylinder)>;

impl InvSystem {
    /// Validates the diagram (constant-to-one maps, acyclic and directed
    /// index order, commuting composites) and assigns the unique measures
    /// making every map uniformly measure-preserving with counting measure
    /// on the base stage.
    pub fn build(name: impl Into<String>, stages: Vec<FinStage>, maps: Vec<CtoMap>, base: usize) -> Result<InvSystem> {
        let mut sys = InvSystem { name: name.into(), stages, maps, base, composite: Vec::new() };
        sys.validate()?;
        sys.assign_masses(base)?;
        Ok(sys)
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Index of the stage with the given name.
    pub fn index(&self, name: &str) -> Result<usize> {
        self.stages
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::Precondition(format!("{}: no index named {name:?}", self.name)))
    }

    /// `i ≤ j` in the index order (there is a map from stage `j` to stage `i`).
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.composite[j][i].is_some()
    }

    /// The composite map from stage `j` to stage `i` for `i ≤ j`.
    pub fn composite(&self, i: usize, j: usize) -> Result<&[usize]> {
        self.composite
            .get(j)
            .and_then(|row| row.get(i))
            .and_then(|m| m.as_deref())
            .ok_or_else(|| Error::Precondition(format!("{}: index {i} is not below {j}", self.name)))
    }

    /// A common upper bound of the given indices (the first one found in
    /// index order).
    pub fn upper_bound(&self, indices: &[usize]) -> Result<usize> {
        (0..self.len())
            .find(|&k| indices.iter().all(|&i| self.leq(i, k)))
            .ok_or_else(|| Error::Inconsistent(format!("{}: indices have no common upper bound", self.name)))
    }

    fn validate(&mut self) -> Result<()> {
        let n = self.stages.len();
        if self.base >= n {
            return Err(Error::Inconsistent("base index out of range".into()));
        }
        for m in &self.maps {
            if m.source >= n || m.target >= n || m.source == m.target {
                return Err(Error::Inconsistent(format!(
                    "{}: map {}→{} has bad endpoints",
                    self.name, m.source, m.target
                )));
            }
            if m.map.len() != self.stages[m.source].len() {
                return Err(Error::Inconsistent(format!(
                    "{}: map {}→{} has wrong length",
                    self.name, m.source, m.target
                )));
            }
            let k = fiber_size(&m.map, self.stages[m.target].len())
                .map_err(|e| Error::Inconsistent(format!("{}: map {}→{}: {e}", self.name, m.source, m.target)))?;
            if k != m.fiber_size {
                return Err(Error::Inconsistent(format!(
                    "{}: declared fiber size {} but found {k}",
                    self.name, m.fiber_size
                )));
            }
        }
        // Topological order of the index DAG (sources after targets).
        let mut indeg = vec![0usize; n];
        for m in &self.maps {
            indeg[m.source] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for m in self.maps.iter().filter(|m| m.target == i) {
                indeg[m.source] -= 1;
                if indeg[m.source] == 0 {
                    queue.push_back(m.source);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Inconsistent(format!("{}: index diagram has a cycle", self.name)));
        }
        // Composites along every path; disagreement means the diagram does
        // not commute.
        let mut comp: Vec<Vec<Option<Vec<usize>>>> = vec![vec![None; n]; n];
        for &j in &order {
            comp[j][j] = Some((0..self.stages[j].len()).collect());
            for m in self.maps.iter().filter(|m| m.source == j) {
                for i in 0..n {
                    let Some(below) = comp[m.target][i].as_ref() else { continue };
                    let cand: Vec<usize> = m.map.iter().map(|&y| below[y]).collect();
                    match &comp[j][i] {
                        Some(existing) if *existing != cand => {
                            return Err(Error::Inconsistent(format!(
                                "{}: maps from {} to {} depend on the path",
                                self.name, self.stages[j].name, self.stages[i].name
                            )));
                        }
                        Some(_) => {}
                        None => comp[j][i] = Some(cand),
                    }
                }
            }
        }
        self.composite = comp;
        for i in 0..n {
            for j in i + 1..n {
                if !(0..n).any(|k| self.leq(i, k) && self.leq(j, k)) {
                    return Err(Error::Inconsistent(format!(
                        "{}: indices {} and {} have no common upper bound",
                        self.name, self.stages[i].name, self.stages[j].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Propagates counting measure from `base` along the covering maps:
    /// pushforward downwards, relatively uniform measure upwards.
    fn assign_masses(&mut self, base: usize) -> Result<()> {
        let masses = self.propagate(base, None)?;
        self.base = base;
        for (s, m) in self.stages.iter_mut().zip(masses) {
            s.mass = m;
        }
        Ok(())
    }

    /// Per-stage masses obtained by propagating from `base`, visiting the
    /// covering maps in the given order (BFS in map order by default). All
    /// covering maps are then checked for uniform measure preservation.
    pub fn propagate(&self, base: usize, map_order: Option<&[usize]>) -> Result<Vec<Q>> {
        let n = self.len();
        let default: Vec<usize> = (0..self.maps.len()).collect();
        let order = map_order.unwrap_or(&default);
        let mut mass: Vec<Option<Q>> = vec![None; n];
        mass[base] = Some(qi(1));
        let mut queue = VecDeque::from([base]);
        while let Some(i) = queue.pop_front() {
            let mi = mass[i].expect("queued stages have mass");
            for &k in order {
                let m = &self.maps[k];
                let (other, value) = if m.target == i {
                    (m.source, mi / qi(m.fiber_size as i64))
                } else if m.source == i {
                    (m.target, mi * qi(m.fiber_size as i64))
                } else {
                    continue;
                };
                if mass[other].is_none() {
                    mass[other] = Some(value);
                    queue.push_back(other);
                }
            }
        }
        let mass: Vec<Q> = mass
            .into_iter()
            .map(|m| m.ok_or_else(|| Error::Inconsistent(format!("{}: index diagram is disconnected", self.name))))
            .collect::<Result<_>>()?;
        for m in &self.maps {
            if mass[m.source] * qi(m.fiber_size as i64) != mass[m.target] {
                return Err(Error::Inconsistent(format!("{}: measures depend on the propagation path", self.name)));
            }
        }
        Ok(mass)
    }

    /// The same diagram with counting measure moved to another base index.
    pub fn rebased(&self, base: usize) -> Result<InvSystem> {
        if base >= self.len() {
            return Err(Error::Precondition("base index out of range".into()));
        }
        let mut out = self.clone();
        out.assign_masses(base)?;
        Ok(out)
    }

    /// Mass of a cylinder: the mass of its defining subset.
    pub fn cylinder_mass(&self, c: &Cylinder) -> Result<Q> {
        let stage =
            self.stages.get(c.index).ok_or_else(|| Error::Precondition("cylinder index out of range".into()))?;
        if c.subset.iter().any(|&x| x >= stage.len()) {
            return Err(Error::Precondition("cylinder subset out of range".into()));
        }
        Ok(stage.mass * qi(c.subset.len() as i64))
    }

    /// The same cylinder presented at a later index `j ≥ c.index`.
    pub fn pull_back(&self, c: &Cylinder, j: usize) -> Result<Cylinder> {
        let f = self.composite(c.index, j)?;
        let mut member = vec![false; self.stages[c.index].len()];
        for &x in &c.subset {
            member[x] = true;
        }
        Ok(Cylinder { index: j, subset: (0..f.len()).filter(|&x| member[f[x]]).collect() })
    }

    /// The image of a cylinder at an earlier index `i ≤ c.index`.
    pub fn push_down(&self, c: &Cylinder, i: usize) -> Result<Cylinder> {
        let f = self.composite(i, c.index)?;
        Ok(Cylinder::new(i, c.subset.iter().map(|&x| f[x]).collect()))
    }

    /// Checks the pushforward identity `f_*(μ_source) = μ_target` on every
    /// covering map, for the stored masses.
    pub fn pushforward_identity(&self) -> bool {
        self.maps.iter().all(|m| {
            let src = vec![self.stages[m.source].mass; self.stages[m.source].len()];
            pushforward(&src, &m.map, self.stages[m.target].len()).iter().all(|&x| x == self.stages[m.target].mass)
        })
    }

    /// Integral of a cylinder function, evaluated at a common upper bound.
    pub fn integrate(&self, g: &CylinderFunction) -> Result<Q> {
        g.iter().try_fold(Q::zero(), |acc, (c, cyl)| Ok(acc + *c * self.cylinder_mass(cyl)?))
    }

    /// The subsystem on a set of indices, with covering maps given by the
    /// composites between indices that are adjacent in the induced order.
    pub fn restrict(&self, name: &str, indices: &[usize], base: usize) -> Result<InvSystem> {
        let pos = |i: usize| indices.iter().position(|&k| k == i);
        let stages: Vec<FinStage> = indices
            .iter()
            .map(|&i| FinStage::new(self.stages[i].name.clone(), self.stages[i].elements.clone()))
            .collect();
        let mut maps = Vec::new();
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                if i == j || !self.leq(i, j) {
                    continue;
                }
                let covered = indices.iter().any(|&k| k != i && k != j && self.leq(i, k) && self.leq(k, j));
                if !covered {
                    let f = self.composite(i, j)?.to_vec();
                    maps.push(CtoMap::new(b, a, f, self.stages[i].len())?);
                }
            }
        }
        let base = pos(base).ok_or_else(|| Error::Precondition("base not among the restricted indices".into()))?;
        InvSystem::build(name, stages, maps, base)
    }
}

/// Checks that the cylinders `parts` partition `whole` and compares the mass
/// of `whole` with the sum of the masses of the parts. Errors if the family
/// overlaps or does not exhaust `whole`.
pub fn additivity_check(sys: &InvSystem, whole: &Cylinder, parts: &[Cylinder]) -> Result<bool> {
    let mut idx: Vec<usize> = parts.iter().map(|c| c.index).collect();
    idx.push(whole.index);
    let k = sys.upper_bound(&idx)?;
    let w = sys.pull_back(whole, k)?;
    let mut seen = vec![false; sys.stages[k].len()];
    for p in parts {
        for x in sys.pull_back(p, k)?.subset {
            if seen[x] {
                return Err(Error::Precondition("cylinders of the family overlap".into()));
            }
            seen[x] = true;
        }
    }
    let union: Vec<usize> = (0..seen.len()).filter(|&x| seen[x]).collect();
    if union != w.subset {
        return Err(Error::Precondition("family does not partition the cylinder".into()));
    }
    let sum = parts.iter().try_fold(Q::zero(), |acc, p| Ok::<_, Error>(acc + sys.cylinder_mass(p)?))?;
    Ok(sum == sys.cylinder_mass(whole)?)
}

/// For a descending sequence of cylinders, the first position at which the
/// set is already empty at its finite stage, if any. (Cylinders of finite
/// mass are compact, so a descending sequence with empty intersection is
/// eventually empty.)
pub fn first_empty(sys: &InvSystem, chain: &[Cylinder]) -> Result<Option<usize>> {
    for w in chain.windows(2) {
        let k = sys.upper_bound(&[w[0].index, w[1].index])?;
        let (a, b) = (sys.pull_back(&w[0], k)?, sys.pull_back(&w[1], k)?);
        if !b.subset.iter().all(|x| a.subset.binary_search(x).is_ok()) {
            return Err(Error::Precondition("sequence is not descending".into()));
        }
    }
    Ok(chain.iter().position(|c| c.subset.is_empty()))
}

/// An automorphism of a system: an index relabeling together with optional
/// stage bijections `bijections[k]: stage(pairs[k].0) → stage(pairs[k].1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemAutomorphism {
    pub pairs: Vec<(usize, usize)>,
    pub bijections: Option<Vec<Vec<usize>>>,
}

/// Outcome of an invariance check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// Ratio of transported per-element mass to original per-element mass.
    #[serde(with = "serde_q")]
    pub factor: Q,
    pub checked: usize,
}

impl InvarianceReport {
    pub fn is_invariant(&self) -> bool {
        self.factor == qi(1)
    }
}

/// Computes the global factor by which an automorphism scales masses.
/// Errors unless the relabeling respects the order and the fiber sizes (and,
/// if given, the bijections commute with the maps).
pub fn invariance_check(sys: &InvSystem, auto: &SystemAutomorphism) -> Result<InvarianceReport> {
    if auto.pairs.is_empty() {
        return Err(Error::Precondition("empty relabeling".into()));
    }
    for (a, &(i, pi)) in auto.pairs.iter().enumerate() {
        for (b, &(j, pj)) in auto.pairs.iter().enumerate() {
            if sys.leq(i, j) != sys.leq(pi, pj) {
                return Err(Error::Inconsistent("relabeling does not preserve the index order".into()));
            }
            if i != j && sys.leq(i, j) {
                let (n, m) = (
                    fiber_size(sys.composite(i, j)?, sys.stages[i].len())?,
                    fiber_size(sys.composite(pi, pj)?, sys.stages[pi].len())?,
                );
                if n != m {
                    return Err(Error::Inconsistent("relabeling changes a fiber size".into()));
                }
                if let Some(bij) = &auto.bijections {
                    let (f, g) = (sys.composite(i, j)?, sys.composite(pi, pj)?);
                    if (0..f.len()).any(|x| bij[a][f[x]] != g[bij[b][x]]) {
                        return Err(Error::Inconsistent("stage bijections do not commute with the maps".into()));
                    }
                }
            }
        }
        if let Some(bij) = &auto.bijections {
            let mut hit = vec![false; sys.stages[pi].len()];
            if bij[a].len() != sys.stages[i].len()
                || bij[a].iter().any(|&y| y >= hit.len() || std::mem::replace(&mut hit[y], true))
                || hit.iter().any(|h| !h)
            {
                return Err(Error::Inconsistent("stage map is not a bijection".into()));
            }
        }
    }
    let (i0, p0) = auto.pairs[0];
    let factor = sys.stages[p0].mass / sys.stages[i0].mass;
    if auto.pairs.iter().any(|&(i, pi)| sys.stages[pi].mass / sys.stages[i].mass != factor) {
        return Err(Error::Inconsistent("transported masses are not globally proportional".into()));
    }
    Ok(InvarianceReport { factor, checked: auto.pairs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn two_to_one() -> InvSystem {
        let base = FinStage::new("base", vec![vec![0]]);
        let top = FinStage::new("top", vec![vec![0], vec![1]]);
        let m = CtoMap::new(1, 0, vec![0, 0], 1).unwrap();
        InvSystem::build("pair", vec![base, top], vec![m], 0).unwrap()
    }

    #[test]
    fn masses_split_along_fibers() {
        let s = two_to_one();
        assert_eq!(s.stages[1].mass, q(1, 2));
        assert!(s.pushforward_identity());
        // Rebasing at the 2-to-one source scales everything by 2.
        let r = s.rebased(1).unwrap();
        assert_eq!(r.stages[0].mass, qi(2));
    }

    #[test]
    fn relatively_uniform_examples() {
        assert_eq!(relatively_uniform(qi(5), &[0, 1, 2], 3).unwrap(), qi(5));
        assert_eq!(relatively_uniform(qi(1), &[0, 0, 0], 1).unwrap(), q(1, 3));
        assert!(relatively_uniform(qi(1), &[0, 0, 1], 2).is_err());
        let pushed = pushforward(&[q(1, 3); 3], &[0, 0, 0], 1);
        assert_eq!(pushed, vec![qi(1)]);
    }

    #[test]
    fn non_commuting_diagrams_are_rejected() {
        // Two different maps from a 2-element stage to a 2-element stage via
        // different intermediate stages.
        let st = |n: &str| FinStage::new(n, vec![vec![0], vec![1]]);
        let maps = vec![
            CtoMap::new(1, 0, vec![0, 1], 2).unwrap(),
            CtoMap::new(2, 0, vec![1, 0], 2).unwrap(),
            CtoMap::new(3, 1, vec![0, 1], 2).unwrap(),
            CtoMap::new(3, 2, vec![0, 1], 2).unwrap(),
        ];
        let r = InvSystem::build("square", vec![st("a"), st("b"), st("c"), st("d")], maps, 0);
        assert!(matches!(r, Err(Error::Inconsistent(_))));
    }

    #[test]
    fn additivity_rejects_overlaps() {
        let s = two_to_one();
        let whole = Cylinder::new(0, vec![0]);
        assert!(additivity_check(&s, &whole, &[Cylinder::new(1, vec![0]), Cylinder::new(1, vec![1])]).unwrap());
        assert!(additivity_check(&s, &whole, &[Cylinder::new(1, vec![0, 1]), Cylinder::new(1, vec![1])]).is_err());
        assert!(additivity_check(&s, &whole, &[Cylinder::new(1, vec![0])]).is_err());
    }
}
