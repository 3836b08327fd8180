//! Finite windows of the tree factor of a wall space.
//!
//! The tree has a coarse structure (branch points, which carry vertical walls)
//! and a fine structure (all projections of apartment vertices). Every coarse
//! vertex has a parity: its vertical wall is `s ≡ parity (mod 2)` in any
//! apartment through it. Every coarse edge is modelled on the canonical strip
//! `0 ≤ s ≤ 1`, with offset 0 at its parity-0 end.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;

use crate::coxeter::{root_data, slope_system, Kind, SlopeSystem};
use crate::error::{Error, Result};
use crate::rational::Q;

/// A vertex of the fine structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeVertex {
    /// Index into [`WallTree::coarse`] for branch points.
    pub coarse: Option<usize>,
    /// The coarse edge containing a non-coarse vertex.
    pub edge: Option<usize>,
    /// Offset inside the coarse edge, measured from its parity-0 end
    /// (for coarse vertices: their parity).
    pub offset: Q,
}

/// A coarse vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseVertex {
    pub parity: u8,
    pub vertex: usize,
}

/// A coarse edge: its endpoints (parity-0 end first) and the fine vertices on
/// it ordered by offset, including both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseEdge {
    pub ends: [usize; 2],
    pub points: Vec<usize>,
}

/// A leaf-to-leaf path of the window unfolded onto the line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineView {
    pub path: Vec<usize>,
    /// Transverse coordinate of every path vertex.
    pub s: Vec<Q>,
    /// Coarse edges on the path with their embedding: the transverse position
    /// of the parity-0 end and the orientation (`+1` if offsets increase with `s`).
    pub embed: BTreeMap<usize, (Q, i8)>,
}

impl LineView {
    /// Transverse coordinate of the point at `offset` on a coarse edge of the line.
    pub fn s_of(&self, edge: usize, offset: Q) -> Option<Q> {
        self.embed.get(&edge).map(|&(s0, sg)| if sg > 0 { s0 + offset } else { s0 - offset })
    }

    /// Position of a vertex on the path.
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.path.iter().position(|&x| x == v)
    }
}

/// A finite subtree (window) of the tree factor of a wall space of type `i`.
#[derive(Clone, Debug)]
pub struct WallTree {
    pub kind: Kind,
    pub i: u8,
    pub slopes: Arc<SlopeSystem>,
    pub coarse: Vec<CoarseVertex>,
    pub edges: Vec<CoarseEdge>,
    pub vertices: Vec<TreeVertex>,
    /// Fine adjacency: `(neighbour, coarse edge)`.
    pub adj: Vec<Vec<(usize, usize)>>,
    pub lines: Vec<LineView>,
}

impl PartialEq for WallTree {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind && self.i == o.i && self.coarse == o.coarse && self.edges == o.edges
    }
}

impl WallTree {
    /// Builds a window from coarse parities and coarse edges `(a, b)`.
    pub fn new(kind: Kind, i: u8, parities: &[u8], coarse_edges: &[(usize, usize)]) -> Result<WallTree> {
        let rs = root_data(kind);
        let slopes = Arc::new(slope_system(&rs, i)?);
        Self::with_slopes(slopes, parities, coarse_edges)
    }

    /// Builds a window sharing an existing slope system.
    pub fn with_slopes(slopes: Arc<SlopeSystem>, parities: &[u8], coarse_edges: &[(usize, usize)]) -> Result<WallTree> {
        let n = parities.len();
        if n == 0 {
            return Err(Error::Precondition("empty tree".into()));
        }
        if coarse_edges.len() + 1 != n {
            return Err(Error::Precondition("coarse graph is not a tree (edge count)".into()));
        }
        let mut vertices = Vec::new();
        let mut coarse = Vec::new();
        for (c, &p) in parities.iter().enumerate() {
            if p > 1 {
                return Err(Error::Precondition("parity must be 0 or 1".into()));
            }
            vertices.push(TreeVertex { coarse: Some(c), edge: None, offset: Q::from_integer(p as i64) });
            coarse.push(CoarseVertex { parity: p, vertex: c });
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for (ei, &(a, b)) in coarse_edges.iter().enumerate() {
            if a >= n || b >= n || parities[a] == parities[b] {
                return Err(Error::Precondition("coarse edges must join vertices of different parity".into()));
            }
            let (e0, e1) = if parities[a] == 0 { (a, b) } else { (b, a) };
            let mut points = vec![e0];
            for &o in &slopes.fine_offsets {
                if o > Q::zero() && o < Q::one() {
                    let id = vertices.len();
                    vertices.push(TreeVertex { coarse: None, edge: Some(ei), offset: o });
                    adj.push(Vec::new());
                    points.push(id);
                }
            }
            points.push(e1);
            for w in points.windows(2) {
                adj[w[0]].push((w[1], ei));
                adj[w[1]].push((w[0], ei));
            }
            edges.push(CoarseEdge { ends: [e0, e1], points });
        }
        // Connectivity.
        let mut seen = vec![false; vertices.len()];
        let mut q = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = q.pop_front() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Precondition("coarse graph is not connected".into()));
        }
        let kind = slopes.kind;
        let i = slopes.frame.i;
        let mut t = WallTree { kind, i, slopes, coarse, edges, vertices, adj, lines: Vec::new() };
        t.lines = t.compute_lines();
        Ok(t)
    }

    /// A random window with `n` coarse vertices whose degrees respect
    /// `max_degree[parity]`.
    pub fn random<R: Rng>(slopes: Arc<SlopeSystem>, n: usize, max_degree: [usize; 2], rng: &mut R) -> Result<WallTree> {
        let mut parities = vec![rng.gen_range(0..2u8)];
        let mut deg = vec![0usize];
        let mut edges = Vec::new();
        while parities.len() < n {
            let open: Vec<usize> = (0..parities.len()).filter(|&v| deg[v] < max_degree[parities[v] as usize]).collect();
            if open.is_empty() {
                break;
            }
            let a = open[rng.gen_range(0..open.len())];
            let b = parities.len();
            parities.push(1 - parities[a]);
            deg.push(1);
            deg[a] += 1;
            edges.push((a, b));
        }
        Self::with_slopes(slopes, &parities, &edges)
    }

    /// A path of `n` coarse vertices starting with parity `p0`.
    pub fn path(kind: Kind, i: u8, n: usize, p0: u8) -> Result<WallTree> {
        let parities: Vec<u8> = (0..n).map(|k| ((k as u8) + p0) % 2).collect();
        let edges: Vec<(usize, usize)> = (1..n).map(|k| (k - 1, k)).collect();
        Self::new(kind, i, &parities, &edges)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_coarse(&self, v: usize) -> bool {
        self.vertices[v].coarse.is_some()
    }

    /// Window leaves (always coarse).
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.adj[v].len() <= 1).collect()
    }

    /// Offset of vertex `v` on coarse edge `e` (which must contain `v`).
    pub fn offset_on(&self, v: usize, e: usize) -> Q {
        match self.vertices[v].coarse {
            Some(c) => Q::from_integer(self.coarse[c].parity as i64),
            None => {
                debug_assert_eq!(self.vertices[v].edge, Some(e));
                self.vertices[v].offset
            }
        }
    }

    /// The fine vertex at `offset` on coarse edge `e`, if there is one.
    pub fn vertex_at(&self, e: usize, offset: Q) -> Option<usize> {
        self.edges[e].points.iter().copied().find(|&v| self.offset_on(v, e) == offset)
    }

    /// Coarse edge joining adjacent fine vertices.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].iter().find(|(w, _)| *w == v).map(|&(_, e)| e)
    }

    /// Length of the fine edge `(u, v)`.
    pub fn length(&self, u: usize, v: usize) -> Q {
        let e = self.edge_between(u, v).expect("adjacent vertices");
        let d = self.offset_on(u, e) - self.offset_on(v, e);
        if d < Q::zero() {
            -d
        } else {
            d
        }
    }

    /// Vertex path between two vertices.
    pub fn path_between(&self, a: usize, b: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.len()];
        parent[a] = a;
        let mut q = VecDeque::from([a]);
        while let Some(v) = q.pop_front() {
            if v == b {
                break;
            }
            for &(w, _) in &self.adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    q.push_back(w);
                }
            }
        }
        let mut out = vec![b];
        let mut x = b;
        while x != a {
            x = parent[x];
            out.push(x);
        }
        out.reverse();
        out
    }

    /// Unfolds a vertex path that starts at a coarse vertex.
    pub fn unfold(&self, path: &[usize]) -> LineView {
        let start = path[0];
        let s0 = match self.vertices[start].coarse {
            Some(c) => Q::from_integer(self.coarse[c].parity as i64),
            None => {
                // Start inside an edge: place that edge so offsets increase along the path.
                let e = self.vertices[start].edge.expect("fine vertex lies on an edge");
                let o = self.vertices[start].offset;
                let next_o = path.get(1).map(|&v| self.offset_on(v, e)).unwrap_or(Q::one());
                if next_o > o {
                    o
                } else {
                    Q::from_integer(2) - o
                }
            }
        };
        let mut s = vec![s0];
        let mut embed = BTreeMap::new();
        for w in path.windows(2) {
            let (u, v) = (w[0], w[1]);
            let e = self.edge_between(u, v).expect("path uses tree edges");
            let (ou, ov) = (self.offset_on(u, e), self.offset_on(v, e));
            let su = *s.last().expect("nonempty");
            let len = if ov > ou { ov - ou } else { ou - ov };
            embed.entry(e).or_insert(if ov > ou { (su - ou, 1i8) } else { (su + ou, -1i8) });
            s.push(su + len);
        }
        LineView { path: path.to_vec(), s, embed }
    }

    fn compute_lines(&self) -> Vec<LineView> {
        let leaves = self.leaves();
        let mut out = Vec::new();
        if leaves.len() == 1 {
            out.push(self.unfold(&[leaves[0]]));
        }
        for (k, &a) in leaves.iter().enumerate() {
            for &b in &leaves[k + 1..] {
                out.push(self.unfold(&self.path_between(a, b)));
            }
        }
        out
    }

    /// Lines containing the fine edge `(u, v)`.
    pub fn lines_through_edge(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.lines.len())
            .filter(|&l| self.lines[l].path.windows(2).any(|w| (w[0] == u && w[1] == v) || (w[0] == v && w[1] == u)))
            .collect()
    }

    /// Map from vertex to the lines containing it.
    pub fn lines_by_vertex(&self) -> HashMap<usize, Vec<usize>> {
        let mut m: HashMap<usize, Vec<usize>> = HashMap::new();
        for (l, view) in self.lines.iter().enumerate() {
            for &v in &view.path {
                m.entry(v).or_default().push(l);
            }
        }
        m
    }

    /// Degree of a coarse vertex of the given parity in a building of the
    /// given thickness: `q_t + 1` for the cotype `t` of its vertical panels.
    pub fn building_degree(&self, parity: u8, q: [u64; 3]) -> u64 {
        q[self.slopes.vertical_cotype[parity as usize] as usize] + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn path_unfolding_respects_parity() {
        for k in Kind::ALL {
            for i in 1..=2 {
                let t = WallTree::path(k, i, 5, 1).unwrap();
                for view in &t.lines {
                    for (idx, &v) in view.path.iter().enumerate() {
                        if let Some(c) = t.vertices[v].coarse {
                            let s = view.s[idx];
                            assert!(s.is_integer());
                            assert_eq!(s.to_integer().rem_euclid(2) as u8, t.coarse[c].parity);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn random_trees_are_trees_with_bounded_degree() {
        let rs = root_data(Kind::G2);
        let ss = Arc::new(slope_system(&rs, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let t = WallTree::random(ss.clone(), 12, [3, 3], &mut rng).unwrap();
            for c in &t.coarse {
                assert!(t.adj[c.vertex].len() <= 3);
            }
            for v in 0..t.len() {
                if !t.is_coarse(v) {
                    assert_eq!(t.adj[v].len(), 2, "branching only at coarse vertices");
                }
            }
            for l in t.leaves() {
                assert!(t.is_coarse(l));
            }
        }
    }
}
