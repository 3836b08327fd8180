//! Catalog of finite inverse systems.
//!
//! Infinite trees have no boundary-free finite windows, so the models use
//! finite quotients where possible: type-preserving embeddings of segments
//! into a biregular tree correspond to non-backtracking walks in any finite
//! graph with the same local degrees, and restriction maps keep their fiber
//! sizes. Walk stages therefore carry exactly the masses of the tree stages.

use std::collections::HashMap;

use super::system::{CtoMap, FinStage, InvSystem, SystemAutomorphism};
use crate::error::{Error, Result};

/// Largest number of elements a catalog stage may have.
pub const STAGE_CAPACITY: usize = 200_000;

fn lookup(stage: &FinStage) -> HashMap<&[u32], usize> {
    stage.elements.iter().enumerate().map(|(k, e)| (e.as_slice(), k)).collect()
}

/// Builds the map `source → target` induced by `project` on element ids.
pub(crate) fn induced(
    stages: &[FinStage],
    source: usize,
    target: usize,
    project: impl Fn(&[u32]) -> Vec<u32>,
) -> Result<CtoMap> {
    let table = lookup(&stages[target]);
    let map = stages[source]
        .elements
        .iter()
        .map(|e| {
            table
                .get(project(e).as_slice())
                .copied()
                .ok_or_else(|| Error::Inconsistent("restriction leaves the target stage".into()))
        })
        .collect::<Result<Vec<usize>>>()?;
    CtoMap::new(source, target, map, stages[target].len())
}

pub(crate) fn check_capacity(name: &str, size: usize) -> Result<()> {
    if size > STAGE_CAPACITY {
        return Err(Error::WindowOverflow(format!(
            "{name}: a stage would have {size} elements (capacity {STAGE_CAPACITY})"
        )));
    }
    Ok(())
}

/// Non-backtracking walks with `steps` steps in a graph, where the vertex at
/// position `k` must satisfy `allowed(k, v)`.
fn walks(adj: &[Vec<u32>], steps: usize, allowed: &dyn Fn(usize, u32) -> bool) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = (0..adj.len() as u32).filter(|&v| allowed(0, v)).map(|v| vec![v]).collect();
    for k in 1..=steps {
        let mut next = Vec::new();
        for w in &out {
            let last = w[k - 1];
            for &v in &adj[last as usize] {
                if (k < 2 || v != w[k - 2]) && allowed(k, v) {
                    let mut e = w.clone();
                    e.push(v);
                    next.push(e);
                }
            }
        }
        out = next;
    }
    out
}

/// Interval index names of the line model.
pub fn segment_name(a: i64, b: i64) -> String {
    match (a, b) {
        (0, 0) => "v1-singleton".into(),
        (1, 1) => "v2-singleton".into(),
        _ => format!("seg[{a},{b}]"),
    }
}

fn intervals(length: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in -length..=length {
        for b in a..=length {
            out.push((a, b));
        }
    }
    out
}

fn interval_maps(stages: &[FinStage], ivs: &[(i64, i64)]) -> Result<Vec<CtoMap>> {
    let pos = |iv: (i64, i64)| ivs.iter().position(|&x| x == iv).expect("interval present");
    let mut maps = Vec::new();
    for (s, &(a, b)) in ivs.iter().enumerate() {
        if a < b {
            maps.push(induced(stages, s, pos((a + 1, b)), |e| e[1..].to_vec())?);
            maps.push(induced(stages, s, pos((a, b - 1)), |e| e[..e.len() - 1].to_vec())?);
        }
    }
    Ok(maps)
}

/// Type-preserving embeddings of segments `[a, b] ⊆ [-length, length]` of a
/// line with alternating vertex types (even positions type 1) into the
/// `(q1+1, q2+1)`-biregular tree: type-1 vertices have `q1+1` neighbours.
/// Counting measure sits on embeddings of the type-1 vertex `0`.
pub fn line_model(q1: u32, q2: u32, length: u32) -> Result<InvSystem> {
    if q1 == 0 || q2 == 0 || length == 0 {
        return Err(Error::Precondition("line model needs q1, q2, length ≥ 1".into()));
    }
    let name = format!("line_model({q1},{q2},{length})");
    let longest = (q2 as usize + 1) * (q1 as usize + 1) * (q1.max(q2) as usize).pow(2 * length - 1);
    check_capacity(&name, longest)?;
    // Complete bipartite quotient: q2+1 type-1 vertices, q1+1 type-2 vertices.
    let (n1, n2) = (q2 + 1, q1 + 1);
    let adj: Vec<Vec<u32>> =
        (0..n1 + n2).map(|v| if v < n1 { (n1..n1 + n2).collect() } else { (0..n1).collect() }).collect();
    let l = length as i64;
    let ivs = intervals(l);
    let stages: Vec<FinStage> = ivs
        .iter()
        .map(|&(a, b)| {
            let ok = move |k: usize, v: u32| ((a + k as i64).rem_euclid(2) == 0) == (v < n1);
            FinStage::new(segment_name(a, b), walks(&adj, (b - a) as usize, &ok))
        })
        .collect();
    let maps = interval_maps(&stages, &ivs)?;
    let base = ivs.iter().position(|&x| x == (0, 0)).expect("origin");
    InvSystem::build(name, stages, maps, base)
}

/// The shift of the line model by `by` positions (`by` even preserves types),
/// restricted to the segments whose image stays inside the window.
pub fn segment_shift(sys: &InvSystem, length: u32, by: i64, with_bijections: bool) -> Result<SystemAutomorphism> {
    let l = length as i64;
    let ivs = intervals(l);
    let mut pairs = Vec::new();
    let mut bijections = Vec::new();
    for &(a, b) in &ivs {
        if a + by < -l || b + by > l {
            continue;
        }
        let (i, j) = (sys.index(&segment_name(a, b))?, sys.index(&segment_name(a + by, b + by))?);
        pairs.push((i, j));
        if with_bijections {
            let table = lookup(&sys.stages[j]);
            let bij = sys.stages[i]
                .elements
                .iter()
                .map(|e| {
                    table
                        .get(e.as_slice())
                        .copied()
                        .ok_or_else(|| Error::Inconsistent("shift does not preserve types".into()))
                })
                .collect::<Result<Vec<usize>>>()?;
            bijections.push(bij);
        }
    }
    Ok(SystemAutomorphism { pairs, bijections: with_bijections.then_some(bijections) })
}

/// Embeddings of segments `[a, b] ⊆ [-length, length]` of the directed line
/// into the directed tree with one outgoing and `q` incoming edges at every
/// vertex. The tree is truncated to a horoball window: position `k` maps to
/// a descendant of a fixed vertex at depth `length - k`, a condition that is
/// stable under restriction and extension, so all maps stay constant-to-one.
pub fn directed_shift(q: u32, length: u32) -> Result<InvSystem> {
    if q < 2 || length == 0 {
        return Err(Error::Precondition("directed shift model needs q ≥ 2 and length ≥ 1".into()));
    }
    let name = format!("directed_shift({q},{length})");
    check_capacity(&name, (q as usize).checked_pow(2 * length).unwrap_or(usize::MAX))?;
    let l = length as i64;
    let ivs = intervals(l);
    let stages: Vec<FinStage> = ivs
        .iter()
        .map(|&(a, b)| {
            let depth = (l - a) as u32;
            let elements = (0..q.pow(depth))
                .map(|start| {
                    let mut e = vec![start];
                    for _ in a..b {
                        e.push(e.last().expect("nonempty") / q);
                    }
                    e
                })
                .collect();
            FinStage::new(format!("seg[{a},{b}]"), elements)
        })
        .collect();
    let maps = interval_maps(&stages, &ivs)?;
    let base = ivs.iter().position(|&x| x == (0, 0)).expect("origin");
    InvSystem::build(name, stages, maps, base)
}

/// The forward shift `n ↦ n + 1` of the directed line as an index relabeling.
pub fn directed_forward_shift(sys: &InvSystem, length: u32) -> Result<SystemAutomorphism> {
    let l = length as i64;
    let mut pairs = Vec::new();
    for (a, b) in intervals(l) {
        if b < l {
            pairs.push((sys.index(&format!("seg[{a},{b}]"))?, sys.index(&format!("seg[{},{}]", a + 1, b + 1))?));
        }
    }
    Ok(SystemAutomorphism { pairs, bijections: None })
}

/// All automorphisms of the rooted `arity`-ary tree of the given depth, as
/// vertex permutations in heap layout (children of `v` are `arity·v + 1 ..`).
pub fn rooted_tree_automorphisms(arity: u32, depth: u32) -> Result<Vec<Vec<u32>>> {
    let a = arity as usize;
    let n: usize = (0..=depth).map(|d| a.pow(d)).sum();
    let internal: usize = (0..depth).map(|d| a.pow(d)).sum();
    let fact: usize = (1..=a).product();
    let order = fact.checked_pow(internal as u32).unwrap_or(usize::MAX);
    check_capacity("rooted tree automorphisms", order)?;
    let perms = permutations(a);
    let mut out = Vec::with_capacity(order);
    for mut code in 0..order {
        let mut g = vec![0u32; n];
        for v in 0..internal {
            let sigma = &perms[code % fact];
            code /= fact;
            let gv = g[v] as usize;
            for c in 0..a {
                g[a * v + 1 + c] = (a * gv + 1 + sigma[c]) as u32;
            }
        }
        out.push(g);
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Name of the haar-model index for a set of levels.
pub fn coset_index_name(levels: &[u32]) -> String {
    let inner: Vec<String> = levels.iter().map(u32::to_string).collect();
    format!("cosets{{{}}}", inner.join(","))
}

/// The truncated profinite example: `G = Aut(T)` for the rooted
/// `arity`-ary tree `T` of the given depth acts on `X = ⊔_k G/N_k`, where
/// `N_k` fixes the ball of radius `k`. Indices are the nonempty sets of
/// levels `F`; the stage of `F` consists of the maps `o_k ↦ g·o_k (k ∈ F)`
/// on the trivial cosets `o_k`. Counting measure sits on the deepest level,
/// whose trivial coset has trivial stabilizer, so the limit is `G` with
/// Haar measure giving mass 1 to the identity and `|N_k|` to `N_k`.
pub fn haar_model(arity: u32, depth: u32) -> Result<InvSystem> {
    if arity < 2 || depth == 0 {
        return Err(Error::Precondition("haar model needs arity ≥ 2 and depth ≥ 1".into()));
    }
    let a = arity as usize;
    let group = rooted_tree_automorphisms(arity, depth)?;
    let ball = |k: u32| -> usize { (0..=k).map(|d| a.pow(d)).sum() };
    let subsets: Vec<Vec<u32>> =
        (1u32..1 << (depth + 1)).map(|m| (0..=depth).filter(|k| m >> k & 1 == 1).collect()).collect();
    let stages: Vec<FinStage> = subsets
        .iter()
        .map(|f| {
            let top = ball(*f.last().expect("nonempty"));
            let mut elements: Vec<Vec<u32>> = group.iter().map(|g| g[..top].to_vec()).collect();
            elements.sort();
            elements.dedup();
            FinStage::new(coset_index_name(f), elements)
        })
        .collect();
    let mut maps = Vec::new();
    for (s, f) in subsets.iter().enumerate() {
        if f.len() < 2 {
            continue;
        }
        for drop in f {
            let g: Vec<u32> = f.iter().copied().filter(|x| x != drop).collect();
            let t = subsets.iter().position(|x| *x == g).expect("subset present");
            let top = ball(*g.last().expect("nonempty"));
            maps.push(induced(&stages, s, t, |e| e[..top].to_vec())?);
        }
    }
    let base = subsets.iter().position(|f| *f == vec![depth]).expect("deepest level");
    InvSystem::build(format!("haar_model({arity},{depth})"), stages, maps, base)
}

/// An inverse system indexed by a product of two chains `0..=imax` and
/// `0..=jmax`, with base at `(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSystem {
    pub system: InvSystem,
    /// `grid[i][j]`: the system index of position `(i, j)`.
    pub grid: Vec<Vec<usize>>,
}

impl BiSystem {
    /// Assembles a bisystem, checking that the grid order matches the
    /// product order and that the base is at `(0, 0)`.
    pub fn new(system: InvSystem, grid: Vec<Vec<usize>>) -> Result<BiSystem> {
        if grid.is_empty() || grid[0].is_empty() || grid.iter().any(|r| r.len() != grid[0].len()) {
            return Err(Error::Inconsistent("bisystem grid must be a nonempty rectangle".into()));
        }
        if system.base != grid[0][0] {
            return Err(Error::Inconsistent("bisystem base must sit at (0, 0)".into()));
        }
        for (i, row) in grid.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                for (k, row2) in grid.iter().enumerate() {
                    for (l, &y) in row2.iter().enumerate() {
                        if system.leq(x, y) != (i <= k && j <= l) {
                            return Err(Error::Inconsistent("bisystem grid does not carry the product order".into()));
                        }
                    }
                }
            }
        }
        Ok(BiSystem { system, grid })
    }

    pub fn top(&self) -> usize {
        *self.grid.last().and_then(|r| r.last()).expect("nonempty grid")
    }
}

/// Name of a rectangle index of the tree-product model.
pub fn rect_name(i: usize, j: usize) -> String {
    format!("rect[{i},{j}]")
}

/// Axis-respecting embeddings of rectangles `[0, i] × [0, j]` into the
/// product of a `(p+1)`-regular and a `(q+1)`-regular tree, presented by
/// non-backtracking walk pairs in complete graphs on `p+2` and `q+2`
/// vertices. Counting measure sits on the vertex pairs `(0, 0)`.
pub fn tree_product(p: u32, q: u32, imax: usize, jmax: usize) -> Result<BiSystem> {
    if p == 0 || q == 0 {
        return Err(Error::Precondition("tree product needs p, q ≥ 1".into()));
    }
    let name = format!("tree_product({p},{q},{imax},{jmax})");
    let complete = |n: u32| -> Vec<Vec<u32>> { (0..n).map(|v| (0..n).filter(|&w| w != v).collect()).collect() };
    let (g1, g2) = (complete(p + 2), complete(q + 2));
    let any = |_: usize, _: u32| true;
    let w1: Vec<Vec<Vec<u32>>> = (0..=imax).map(|i| walks(&g1, i, &any)).collect();
    let w2: Vec<Vec<Vec<u32>>> = (0..=jmax).map(|j| walks(&g2, j, &any)).collect();
    check_capacity(&name, w1[imax].len() * w2[jmax].len())?;
    let mut stages = Vec::new();
    let mut grid = vec![vec![0usize; jmax + 1]; imax + 1];
    for i in 0..=imax {
        for j in 0..=jmax {
            let mut elements = Vec::with_capacity(w1[i].len() * w2[j].len());
            for a in &w1[i] {
                for b in &w2[j] {
                    let mut e = a.clone();
                    e.extend_from_slice(b);
                    elements.push(e);
                }
            }
            grid[i][j] = stages.len();
            stages.push(FinStage::new(rect_name(i, j), elements));
        }
    }
    let mut maps = Vec::new();
    for i in 0..=imax {
        for j in 0..=jmax {
            if i > 0 {
                maps.push(induced(&stages, grid[i][j], grid[i - 1][j], |e| [&e[..i], &e[i + 1..]].concat())?);
            }
            if j > 0 {
                maps.push(induced(&stages, grid[i][j], grid[i][j - 1], |e| e[..e.len() - 1].to_vec())?);
            }
        }
    }
    let system = InvSystem::build(name, stages, maps, grid[0][0])?;
    BiSystem::new(system, grid)
}

/// Names accepted by [`catalog_system`].
pub const CATALOG: [&str; 4] = ["line_model", "haar_model", "tree_product", "directed_shift"];

/// Builds a catalog system by name. Parameters: `line_model(q1, q2, length)`,
/// `haar_model(arity, depth)`, `tree_product(p, q, imax, jmax)`,
/// `directed_shift(q, length)`.
pub fn catalog_system(name: &str, params: &[u32]) -> Result<InvSystem> {
    let need = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{name} takes {n} parameters, got {}", params.len())))
        }
    };
    match name {
        "line_model" => {
            need(3)?;
            line_model(params[0], params[1], params[2])
        }
        "haar_model" => {
            need(2)?;
            haar_model(params[0], params[1])
        }
        "tree_product" => {
            need(4)?;
            Ok(tree_product(params[0], params[1], params[2] as usize, params[3] as usize)?.system)
        }
        "directed_shift" => {
            need(2)?;
            directed_shift(params[0], params[1])
        }
        _ => Err(Error::Parse(format!("unknown system {name:?}; expected one of {CATALOG:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prolim::{invariance_check, Cylinder};
    use crate::rational::{q, qi};

    #[test]
    fn line_model_type_two_mass() {
        for (q1, q2) in [(2, 3), (3, 2), (2, 2)] {
            let s = line_model(q1, q2, 2).unwrap();
            let v2 = s.index("v2-singleton").unwrap();
            assert_eq!(s.stages[v2].mass, q(q2 as i64 + 1, q1 as i64 + 1));
            assert!(s.pushforward_identity());
        }
    }

    #[test]
    fn shifts_scale_as_expected() {
        let s = line_model(2, 3, 2).unwrap();
        let r = invariance_check(&s, &segment_shift(&s, 2, 2, true).unwrap()).unwrap();
        assert_eq!(r.factor, qi(1));
        for q in [2, 3] {
            let d = directed_shift(q, 2).unwrap();
            let r = invariance_check(&d, &directed_forward_shift(&d, 2).unwrap()).unwrap();
            assert_eq!(r.factor, qi(q as i64));
        }
    }

    #[test]
    fn haar_masses() {
        let h = haar_model(2, 3).unwrap();
        let top = h.index(&coset_index_name(&[3])).unwrap();
        let id =
            h.stages[top].elements.iter().position(|e| e.iter().enumerate().all(|(k, &x)| x as usize == k)).unwrap();
        assert_eq!(h.cylinder_mass(&Cylinder::new(top, vec![id])).unwrap(), qi(1));
        let trivial = h.index(&coset_index_name(&[0])).unwrap();
        assert_eq!(h.cylinder_mass(&Cylinder::new(trivial, vec![0])).unwrap(), qi(128));
        assert_eq!(h.stages[top].len(), 128);
    }

    #[test]
    fn tree_product_is_a_bisystem() {
        let b = tree_product(2, 2, 3, 3).unwrap();
        assert_eq!(b.system.stages[b.grid[0][0]].len(), 16);
        assert_eq!(b.system.stages[b.top()].len(), 48 * 48);
    }

    #[test]
    fn oversized_models_overflow() {
        assert!(matches!(line_model(50, 50, 4), Err(Error::WindowOverflow(_))));
    }
}
