//! Exhaustive extension counts on finite desk models.
//!
//! Each oracle enumerates every base embedding of the smaller complex into
//! the model and, for each of them, every extension to the larger complex.
//! The per-base counts are reported so that constancy can be checked.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::link::{link_gonality, link_types};
use crate::coxeter::{star, vertex_neighbours, Point, Region, RootSystem2};
use crate::error::{Error, Result};
use crate::polygon::GeneralizedPolygon;
use crate::rational::Q;
use crate::treeconv::WallComplex;

/// Extension counts, one per base embedding (in enumeration order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteReport {
    pub counts: Vec<u64>,
}

impl BruteReport {
    /// Whether every base embedding has the same number of extensions.
    pub fn is_constant(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }

    /// The common count, if constant and at least one base embedding exists.
    pub fn value(&self) -> Option<u64> {
        (self.is_constant()).then(|| self.counts.first().copied()).flatten()
    }

    pub fn bases(&self) -> usize {
        self.counts.len()
    }
}

const BUDGET: u64 = 20_000_000;

/// Breadth-first order of `targets` starting from `seeds`, with the position
/// of an adjacent earlier element (if any) for each element.
fn bfs_order<T: Ord + Copy>(
    seeds: &[T],
    targets: &[T],
    adjacent: impl Fn(T, T) -> bool,
) -> Result<Vec<(T, Option<usize>)>> {
    let mut out: Vec<(T, Option<usize>)> = Vec::new();
    let mut placed: Vec<T> = seeds.to_vec();
    let mut rest: BTreeSet<T> = targets.iter().copied().filter(|t| !seeds.contains(t)).collect();
    let mut queue: VecDeque<usize> = (0..placed.len()).collect();
    if placed.is_empty() {
        if let Some(&first) = rest.iter().next() {
            rest.remove(&first);
            out.push((first, None));
            placed.push(first);
            queue.push_back(0);
        }
    }
    while let Some(k) = queue.pop_front() {
        let src = placed[k];
        let next: Vec<T> = rest.iter().copied().filter(|&t| adjacent(src, t)).collect();
        for t in next {
            rest.remove(&t);
            placed.push(t);
            queue.push_back(placed.len() - 1);
            out.push((t, Some(k)));
        }
    }
    if !rest.is_empty() {
        return Err(Error::Precondition("complex is not connected through edges".into()));
    }
    Ok(out)
}

fn dist2(rs: &RootSystem2, a: Point, b: Point) -> Q {
    let d = a - b;
    rs.inner(d, d)
}

/// Thin model: the model apartment itself. Base embeddings send the first
/// vertex of `z1` to any vertex of the same type in the box
/// `|α| ≤ base_window`; embeddings preserve vertex types and distances.
pub fn brute_thin(rs: &RootSystem2, z1: &Region, z2: &Region, base_window: i64) -> Result<BruteReport> {
    let v1 = z1.tighten(rs)?.vertices(rs);
    let v2 = z2.tighten(rs)?.vertices(rs);
    if !v1.iter().all(|p| v2.contains(p)) {
        return Err(Error::Precondition("source region is not contained in the target region".into()));
    }
    let adjacent = |a: Point, b: Point| vertex_neighbours(rs, a).contains(&b);
    let order1 = bfs_order(&[], &v1, adjacent)?;
    let seeds: Vec<Point> = order1.iter().map(|x| x.0).collect();
    let order2 = bfs_order(&seeds, &v2, adjacent)?;
    let all: Vec<(Point, Option<usize>)> = order1.iter().chain(order2.iter()).copied().collect();
    let box_region = Region {
        kind: rs.kind,
        levels: vec![(-base_window, base_window); rs.positive_roots.len()],
        window: base_window + 1,
    };
    let t0 = rs.vertex_type(all[0].0);
    let firsts: Vec<Point> = box_region.vertices(rs).into_iter().filter(|&p| rs.vertex_type(p) == t0).collect();
    let mut cache: HashMap<Point, Vec<Point>> = HashMap::new();
    let mut candidates = |k: usize, imgs: &[Point]| -> Result<Vec<Point>> {
        let (src, parent) = all[k];
        let pool = match parent {
            None => firsts.clone(),
            Some(p) => cache.entry(imgs[p]).or_insert_with(|| vertex_neighbours(rs, imgs[p])).clone(),
        };
        let ts = rs.vertex_type(src);
        Ok(pool
            .into_iter()
            .filter(|&c| rs.vertex_type(c) == ts)
            .filter(|&c| (0..k).all(|j| dist2(rs, c, imgs[j]) == dist2(rs, src, all[j].0)))
            .collect())
    };
    run_oracle(order1.len(), order2.len(), &mut candidates)
}

/// Enumerates base embeddings (the first `n1` positions) and counts the
/// completions of each over the next `n2` positions.
/// Candidate images for a position, given the images chosen so far.
type Candidates<'a, I> = dyn FnMut(usize, &[I]) -> Result<Vec<I>> + 'a;

fn run_oracle<I: Clone>(n1: usize, n2: usize, candidates: &mut Candidates<I>) -> Result<BruteReport> {
    let mut budget = BUDGET;
    let mut bases: Vec<Vec<I>> = Vec::new();
    enumerate_from(
        0,
        n1,
        &mut Vec::new(),
        candidates,
        &mut |imgs| {
            bases.push(imgs.to_vec());
            Ok(())
        },
        &mut budget,
    )?;
    let mut counts = Vec::new();
    for base in bases {
        let offset = base.len();
        let mut prefix = base;
        let mut n = 0u64;
        enumerate_from(
            offset,
            n2,
            &mut prefix,
            &mut |k, imgs| candidates(offset + k, imgs),
            &mut |_| {
                n += 1;
                Ok(())
            },
            &mut budget,
        )?;
        counts.push(n);
    }
    Ok(BruteReport { counts })
}

/// Enumeration where positions are numbered relative to `offset` fixed entries.
fn enumerate_from<I: Clone>(
    offset: usize,
    len: usize,
    prefix: &mut Vec<I>,
    candidates: &mut Candidates<I>,
    visit: &mut dyn FnMut(&[I]) -> Result<()>,
    budget: &mut u64,
) -> Result<()> {
    let k = prefix.len() - offset;
    if k == len {
        return visit(prefix);
    }
    if *budget == 0 {
        return Err(Error::Budget("exhaustive embedding search".into()));
    }
    *budget -= 1;
    for c in candidates(k, prefix)? {
        prefix.push(c);
        enumerate_from(offset, len, prefix, candidates, visit, budget)?;
        prefix.pop();
    }
    Ok(())
}

/// Star model: the cone over a finite generalized polygon, standing in for
/// the star of the vertex `center`. Both regions must contain `center` and
/// lie in its star; link vertices of the smaller type map to points.
pub fn brute_star(
    rs: &RootSystem2,
    center: Point,
    z1: &Region,
    z2: &Region,
    polygon: &GeneralizedPolygon,
) -> Result<BruteReport> {
    let tc = rs.vertex_type(center).ok_or_else(|| Error::Precondition("center is not a vertex".into()))?;
    if polygon.gonality != link_gonality(rs, tc) {
        return Err(Error::Precondition(format!(
            "polygon {} has gonality {}, the link needs {}",
            polygon.name,
            polygon.gonality,
            link_gonality(rs, tc)
        )));
    }
    let link: Vec<Point> = vertex_neighbours(rs, center);
    let v1 = z1.tighten(rs)?.vertices(rs);
    let v2 = z2.tighten(rs)?.vertices(rs);
    for (name, vs) in [("source", &v1), ("target", &v2)] {
        if !vs.contains(&center) {
            return Err(Error::Precondition(format!("{name} region does not contain the center")));
        }
        if vs.iter().any(|p| *p != center && !link.contains(p)) {
            return Err(Error::ModelTooSmall(format!("{name} region leaves the star of the center")));
        }
    }
    if !v1.iter().all(|p| v2.contains(p)) {
        return Err(Error::Precondition("source region is not contained in the target region".into()));
    }
    // Distances in the thin link.
    let n = link.len();
    let alcoves = star(rs, center);
    let adjacent = |a: Point, b: Point| alcoves.iter().any(|al| al.vertices.contains(&a) && al.vertices.contains(&b));
    let mut dist = vec![vec![usize::MAX; n]; n];
    for s in 0..n {
        dist[s][s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(a) = q.pop_front() {
            for b in 0..n {
                if dist[s][b] == usize::MAX && adjacent(link[a], link[b]) {
                    dist[s][b] = dist[s][a] + 1;
                    q.push_back(b);
                }
            }
        }
    }
    let idx = |p: &Point| link.iter().position(|x| x == p).expect("link vertex");
    let lt = link_types(tc);
    let w1: Vec<usize> = v1.iter().filter(|p| **p != center).map(idx).collect();
    let w2: Vec<usize> = v2.iter().filter(|p| **p != center).map(idx).filter(|i| !w1.contains(i)).collect();
    let mut all = w1.clone();
    all.extend(&w2);
    let elem_type = |i: usize| -> u8 { u8::from(rs.vertex_type(link[i]) != Some(lt[0])) };
    let mut candidates = |k: usize, imgs: &[usize]| -> Result<Vec<usize>> {
        let src = all[k];
        Ok((0..polygon.len())
            .filter(|&c| polygon.element_type(c) == elem_type(src))
            .filter(|&c| (0..k).all(|j| polygon.distance(c, imgs[j]) == dist[src][all[j]]))
            .collect())
    };
    run_oracle(w1.len(), w2.len(), &mut candidates)
}

/// A wall space over a tree in which every coarse vertex of parity `p` has
/// `degrees[p]` branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeModel {
    pub degrees: [u64; 2],
}

/// Coarse skeleton of a complex: coarse vertices and touched coarse edges.
fn skeleton(c: &WallComplex) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let tree = &c.tree;
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for (e, edge) in tree.edges.iter().enumerate() {
        let sup: Vec<usize> = edge.points.iter().copied().filter(|&v| c.in_support(v)).collect();
        if sup.len() >= 2 || sup.iter().any(|&v| !tree.is_coarse(v)) {
            edges.insert(e);
            verts.extend(edge.ends);
        }
    }
    verts.extend(c.support().into_iter().filter(|&v| tree.is_coarse(v)));
    (verts, edges)
}

/// Tree model oracle: embeddings are injective, parity-preserving maps of
/// coarse skeletons into the regular tree of the model (heights are carried
/// along by a common translation). The first skeleton vertex is pinned to
/// the root; all other base placements are enumerated.
pub fn brute_tree(z1: &WallComplex, z2: &WallComplex, model: &TreeModel) -> Result<BruteReport> {
    if z1.tree != z2.tree || !z1.is_subset(z2) || z1.is_empty() {
        return Err(Error::Precondition("need nonempty nested complexes on one tree".into()));
    }
    let tree = &z1.tree;
    let (k1, e1) = skeleton(z1);
    let (k2, e2) = skeleton(z2);
    let edge_set = |es: &BTreeSet<usize>| -> Vec<(usize, usize)> {
        es.iter().map(|&e| (tree.edges[e].ends[0], tree.edges[e].ends[1])).collect()
    };
    let (ed1, ed2) = (edge_set(&e1), edge_set(&e2));
    let adj = |edges: &[(usize, usize)], a: usize, b: usize| edges.contains(&(a, b)) || edges.contains(&(b, a));
    let k1v: Vec<usize> = k1.iter().copied().collect();
    let k2v: Vec<usize> = k2.iter().copied().collect();
    let order1 = bfs_order(&[], &k1v, |a, b| adj(&ed1, a, b))?;
    let seeds: Vec<usize> = order1.iter().map(|x| x.0).collect();
    let order2 = bfs_order(&seeds, &k2v, |a, b| adj(&ed2, a, b))?;
    let parity = |v: usize| tree.coarse[tree.vertices[v].coarse.expect("coarse")].parity;

    // Ball of the model tree around the root, deep enough for every extension.
    let root = order1[0].0;
    let depth = {
        let mut d: HashMap<usize, usize> = HashMap::from([(root, 0)]);
        let mut q = VecDeque::from([root]);
        while let Some(a) = q.pop_front() {
            for &b in &k2v {
                if !d.contains_key(&b) && adj(&ed2, a, b) {
                    d.insert(b, d[&a] + 1);
                    q.push_back(b);
                }
            }
        }
        d.values().copied().max().unwrap_or(0)
    };
    let mut m_parity = vec![parity(root)];
    let mut m_adj: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &x in &frontier {
            let deg = model.degrees[m_parity[x] as usize] as usize;
            let have = m_adj[x].len();
            for _ in have..deg {
                let y = m_parity.len();
                if y > 2_000_000 {
                    return Err(Error::Budget("tree model ball too large".into()));
                }
                m_parity.push(1 - m_parity[x]);
                m_adj.push(vec![x]);
                m_adj[x].push(y);
                next.push(y);
            }
        }
        frontier = next;
    }
    let all: Vec<(usize, Option<usize>)> = order1.iter().chain(order2.iter()).copied().collect();
    let mut candidates = |k: usize, imgs: &[usize]| -> Result<Vec<usize>> {
        let (src, parent) = all[k];
        let pool: Vec<usize> = match parent {
            None if k == 0 => vec![0],
            None => return Err(Error::Precondition("skeleton is disconnected".into())),
            Some(p) => m_adj[imgs[p]].clone(),
        };
        Ok(pool.into_iter().filter(|&c| m_parity[c] == parity(src) && !imgs.contains(&c)).collect())
    };
    run_oracle(order1.len(), order2.len(), &mut candidates)
}
