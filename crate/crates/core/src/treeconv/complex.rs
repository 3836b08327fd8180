//! Convex subcomplexes `{(x, h) : x ∈ S, f(x) ≤ h ≤ −g(x)}` of a wall space,
//! their chambers and the exact per-apartment convex hull.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;

use super::tree::{LineView, WallTree};
use crate::coxeter::SlopeSystem;
use crate::error::{Error, Result};
use crate::rational::{ceil_to, floor, floor_to, qi, Bound, Q};

/// Fiber over a tree vertex: lower bound `f` and negated upper bound `g`.
pub type Fiber = (Bound, Bound);

/// A chamber of the wall space: a coarse edge and an alcove of the canonical
/// strip `0 ≤ s ≤ 1`, given as `(offset, height)` per vertex type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YChamber {
    pub edge: usize,
    pub tri: [(Q, Q); 3],
}

/// A subcomplex described by a subtree `S` and two bound functions.
#[derive(Clone, Debug)]
pub struct WallComplex {
    pub tree: Arc<WallTree>,
    /// `Some((f, g))` exactly on `S`.
    pub fibers: Vec<Option<Fiber>>,
}

impl PartialEq for WallComplex {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.tree, &o.tree) || self.tree == o.tree) && self.fibers == o.fibers
    }
}

/// Lower value `f` as an extended rational (`None` = −∞).
pub fn lower_value(f: Bound) -> Option<Q> {
    f.finite()
}

/// Upper value `−g` as an extended rational (`None` = +∞).
pub fn upper_value(g: Bound) -> Option<Q> {
    g.finite().map(|x| -x)
}

impl WallComplex {
    /// The empty complex on a tree.
    pub fn empty(tree: Arc<WallTree>) -> WallComplex {
        let n = tree.len();
        WallComplex { tree, fibers: vec![None; n] }
    }

    /// Builds a complex from explicit fibers, validating `f + g ≤ 0`.
    pub fn from_fibers(tree: Arc<WallTree>, fibers: Vec<Option<Fiber>>) -> Result<WallComplex> {
        if fibers.len() != tree.len() {
            return Err(Error::Precondition("fiber vector has wrong length".into()));
        }
        for fib in fibers.iter().flatten() {
            if let (Some(lo), Some(hi)) = (lower_value(fib.0), upper_value(fib.1)) {
                if lo > hi {
                    return Err(Error::Precondition("empty fiber: f + g > 0".into()));
                }
            }
        }
        let c = WallComplex { tree, fibers };
        if !c.support_is_subtree() {
            return Err(Error::Precondition("support is not a subtree".into()));
        }
        Ok(c)
    }

    pub fn slopes(&self) -> &SlopeSystem {
        &self.tree.slopes
    }

    /// Vertices of `S`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.fibers.len()).filter(|&v| self.fibers[v].is_some()).collect()
    }

    pub fn in_support(&self, v: usize) -> bool {
        self.fibers[v].is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.iter().all(|f| f.is_none())
    }

    /// Whether `S` is connected (and nonempty or empty).
    pub fn support_is_subtree(&self) -> bool {
        let sup = self.support();
        let Some(&start) = sup.first() else { return true };
        let mut seen = vec![false; self.fibers.len()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.tree.adj[v] {
                if self.in_support(w) && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == sup.len()
    }

    /// Lower-bound slope `f_vw` along the fine edge `v → w` (both in `S`, `f` finite).
    pub fn lower_slope(&self, v: usize, w: usize) -> Option<Q> {
        let fv = self.fibers[v]?.0.finite()?;
        let fw = self.fibers[w]?.0.finite()?;
        Some((fw - fv) / self.tree.length(v, w))
    }

    /// Upper-bound slope `g_vw`.
    pub fn upper_slope(&self, v: usize, w: usize) -> Option<Q> {
        let gv = self.fibers[v]?.1.finite()?;
        let gw = self.fibers[w]?.1.finite()?;
        Some((gw - gv) / self.tree.length(v, w))
    }

    /// The mirror image `h ↦ −h`, exchanging the roles of `f` and `g`.
    pub fn flipped(&self) -> WallComplex {
        WallComplex { tree: self.tree.clone(), fibers: self.fibers.iter().map(|f| f.map(|(a, b)| (b, a))).collect() }
    }

    /// Whether the point at `offset` on coarse edge `e` and height `h` lies in the complex.
    pub fn contains_point(&self, e: usize, offset: Q, h: Q) -> bool {
        let Some(v) = self.tree.vertex_at(e, offset) else { return false };
        match self.fibers[v] {
            None => false,
            Some((f, g)) => lower_value(f).is_none_or(|lo| lo <= h) && upper_value(g).is_none_or(|hi| h <= hi),
        }
    }

    pub fn contains_chamber(&self, c: &YChamber) -> bool {
        c.tri.iter().all(|&(o, h)| self.contains_point(c.edge, o, h))
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset(&self, other: &WallComplex) -> bool {
        self.fibers.iter().zip(&other.fibers).all(|(a, b)| match (a, b) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((fa, ga)), Some((fb, gb))) => fb.weaker(*fa) == *fb && gb.weaker(*ga) == *gb,
        })
    }

    /// Height range of a bounded complex.
    fn height_range(&self) -> Option<(Q, Q)> {
        let mut lo: Option<Q> = None;
        let mut hi: Option<Q> = None;
        for &(f, g) in self.fibers.iter().flatten() {
            let a = lower_value(f)?;
            let b = upper_value(g)?;
            lo = Some(lo.map_or(a, |x| x.min(a)));
            hi = Some(hi.map_or(b, |x| x.max(b)));
        }
        Some((lo?, hi?))
    }

    /// All chambers of a bounded complex (sorted).
    pub fn chambers(&self) -> Result<Vec<YChamber>> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let (lo, hi) = self
            .height_range()
            .ok_or_else(|| Error::Unsupported("chamber enumeration of an unbounded complex".into()))?;
        let ss = self.slopes();
        let mut out = Vec::new();
        for (e, ce) in self.tree.edges.iter().enumerate() {
            if ce.points.iter().filter(|&&v| self.in_support(v)).count() < 2 {
                continue;
            }
            for tri in ss.strip_alcoves(lo - ss.period, hi + ss.period) {
                let c = YChamber { edge: e, tri };
                if self.contains_chamber(&c) {
                    out.push(c);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Whether the complex contains a chamber.
    pub fn has_chamber(&self) -> bool {
        let ss = self.slopes();
        for (e, ce) in self.tree.edges.iter().enumerate() {
            let sup: Vec<usize> = ce.points.iter().copied().filter(|&v| self.in_support(v)).collect();
            if sup.len() < 2 {
                continue;
            }
            // Probe around the fiber of a supported vertex of the edge.
            let (f, g) = self.fibers[sup[0]].expect("in support");
            let base = match (lower_value(f), upper_value(g)) {
                (Some(a), _) => a,
                (None, Some(b)) => b - ss.period * qi(2),
                (None, None) => Q::zero(),
            };
            let top = match upper_value(g) {
                Some(b) => b,
                None => base + ss.period * qi(4),
            };
            let mut lo = base - ss.period;
            let hi = top + ss.period;
            while lo < hi {
                for tri in ss.strip_alcoves(lo, lo + ss.period) {
                    if self.contains_chamber(&YChamber { edge: e, tri }) {
                        return true;
                    }
                }
                lo += ss.period;
            }
        }
        false
    }

    /// Trace of the complex on a line: fibers at the path vertices.
    pub fn trace(&self, view: &LineView) -> Vec<Option<Fiber>> {
        view.path.iter().map(|&v| self.fibers[v]).collect()
    }

    /// Merges new fibers on a line into the complex (fiberwise hull of the union).
    /// Returns whether anything changed.
    pub fn merge_line(&mut self, view: &LineView, fibers: &[Option<Fiber>]) -> bool {
        let mut changed = false;
        for (k, &v) in view.path.iter().enumerate() {
            if let Some(new) = fibers[k] {
                let merged = match self.fibers[v] {
                    None => new,
                    Some(old) => (old.0.weaker(new.0), old.1.weaker(new.1)),
                };
                if self.fibers[v] != Some(merged) {
                    self.fibers[v] = Some(merged);
                    changed = true;
                }
            }
        }
        changed
    }

    /// Points of a chamber in line coordinates, if its edge lies on the line.
    pub fn chamber_points(view: &LineView, c: &YChamber) -> Option<[(Q, Q); 3]> {
        let mut out = [(Q::zero(), Q::zero()); 3];
        for (k, &(o, h)) in c.tri.iter().enumerate() {
            out[k] = (view.s_of(c.edge, o)?, h);
        }
        Some(out)
    }

    /// Whether every apartment trace is already convex and `S` is a subtree
    /// (the definitional convexity test).
    pub fn is_convex(&self) -> bool {
        if !self.support_is_subtree() {
            return false;
        }
        for view in &self.tree.lines {
            let tr = self.trace(view);
            if tr.iter().all(|x| x.is_none()) {
                continue;
            }
            let h = line_hull(self.slopes(), view, &tr, &[]);
            if h != tr {
                return false;
            }
        }
        true
    }

    /// Local convexity of one bound function: `f_vw + f_vw' ≥ 0` at every
    /// vertex of `S` for every pair of neighbours in `S`.
    pub fn bound_is_locally_convex(&self, upper: bool) -> bool {
        for v in self.support() {
            let nbrs: Vec<usize> = self.tree.adj[v].iter().map(|&(w, _)| w).filter(|&w| self.in_support(w)).collect();
            for a in 0..nbrs.len() {
                for b in a + 1..nbrs.len() {
                    let (sa, sb) = if upper {
                        (self.upper_slope(v, nbrs[a]), self.upper_slope(v, nbrs[b]))
                    } else {
                        (self.lower_slope(v, nbrs[a]), self.lower_slope(v, nbrs[b]))
                    };
                    if let (Some(x), Some(y)) = (sa, sb) {
                        if x + y < Q::zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Whether all fine-edge slopes of both bounds are wall slopes through
    /// the corresponding boundary points.
    pub fn slopes_are_legal(&self) -> bool {
        let ss = self.slopes();
        for view in &self.tree.lines {
            for k in 0..view.path.len().saturating_sub(1) {
                let (u, w) = (view.path[k], view.path[k + 1]);
                let (Some((fu, gu)), Some((fw, gw))) = (self.fibers[u], self.fibers[w]) else { continue };
                let ds = view.s[k + 1] - view.s[k];
                for (a, b) in [(lower_value(fu), lower_value(fw)), (upper_value(gu), upper_value(gw))] {
                    if let (Some(a), Some(b)) = (a, b) {
                        let lam = (b - a) / ds;
                        let on_wall = ss
                            .classes
                            .iter()
                            .any(|c| c.slope == lam && ((a - c.slope * view.s[k]) / c.spacing).is_integer());
                        if !on_wall {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Convex hull, inside one apartment, of a trace plus extra points.
///
/// `trace[k]` is the fiber at the `k`-th vertex of the line; `extra` are
/// additional points in line coordinates. Returns the fibers of the hull at
/// every path vertex.
pub fn line_hull(ss: &SlopeSystem, view: &LineView, trace: &[Option<Fiber>], extra: &[(Q, Q)]) -> Vec<Option<Fiber>> {
    let mut pts: Vec<(Q, Q)> = extra.to_vec();
    let mut lower_open = false;
    let mut upper_open = false;
    let mut s_vals: Vec<Q> = extra.iter().map(|p| p.0).collect();
    for (k, fib) in trace.iter().enumerate() {
        if let Some((f, g)) = fib {
            let s = view.s[k];
            s_vals.push(s);
            match lower_value(*f) {
                Some(h) => pts.push((s, h)),
                None => lower_open = true,
            }
            match upper_value(*g) {
                Some(h) => pts.push((s, h)),
                None => upper_open = true,
            }
        }
    }
    let n = view.path.len();
    if s_vals.is_empty() {
        return vec![None; n];
    }
    let smin = qi(floor(*s_vals.iter().min().expect("nonempty")));
    let smax = -qi(floor(-*s_vals.iter().max().expect("nonempty")));
    // Per class: [L, U] on h − λ s (None = unbounded).
    let mut bounds: Vec<(Q, Option<Q>, Option<Q>)> = Vec::with_capacity(ss.classes.len());
    for c in &ss.classes {
        let (lo, hi) = if pts.is_empty() {
            (None, None)
        } else {
            let ts = pts.iter().map(|&(s, h)| h - c.slope * s);
            let mn = ts.clone().min().expect("nonempty");
            let mx = ts.max().expect("nonempty");
            (Some(floor_to(mn, c.spacing)), Some(ceil_to(mx, c.spacing)))
        };
        bounds.push((c.slope, if lower_open { None } else { lo }, if upper_open { None } else { hi }));
    }
    let mut out = vec![None; n];
    for k in 0..n {
        let s = view.s[k];
        if s < smin || s > smax {
            continue;
        }
        let lo = bounds
            .iter()
            .map(|&(l, a, _)| a.map(|a| l * s + a))
            .try_fold(None::<Q>, |acc, x| x.map(|x| Some(acc.map_or(x, |a: Q| a.max(x)))));
        let hi = bounds
            .iter()
            .map(|&(l, _, b)| b.map(|b| l * s + b))
            .try_fold(None::<Q>, |acc, x| x.map(|x| Some(acc.map_or(x, |a: Q| a.min(x)))));
        // `lo`/`hi` are `None` when unbounded on that side.
        let lo = lo.flatten();
        let hi = hi.flatten();
        if let (Some(a), Some(b)) = (lo, hi) {
            if a > b {
                continue;
            }
        }
        let f = lo.map_or(Bound::Unbounded, Bound::Finite);
        let g = hi.map_or(Bound::Unbounded, |b| Bound::Finite(-b));
        out[k] = Some((f, g));
    }
    out
}

/// Least convex subcomplex containing `c` and the `extra` chambers, computed
/// by repeatedly replacing every apartment trace by its convex hull.
pub fn hull_oracle(c: &WallComplex, extra: &[YChamber]) -> WallComplex {
    let ss = c.tree.slopes.clone();
    let mut cur = c.clone();
    loop {
        let mut changed = false;
        let mut seen: BTreeSet<(Vec<Option<Fiber>>, Vec<usize>)> = BTreeSet::new();
        for view in &c.tree.lines {
            let pts: Vec<(Q, Q)> = extra
                .iter()
                .filter_map(|ch| WallComplex::chamber_points(view, ch))
                .flat_map(|p| p.into_iter())
                .collect();
            let tr = cur.trace(view);
            if pts.is_empty() && tr.iter().all(|x| x.is_none()) {
                continue;
            }
            let hull = line_hull(&ss, view, &tr, &pts);
            // Skip lines whose contribution was already merged this round.
            let key: Vec<usize> = view.path.iter().zip(&hull).filter(|(_, h)| h.is_some()).map(|(&v, _)| v).collect();
            let sig: Vec<Option<Fiber>> = hull.iter().filter(|h| h.is_some()).copied().collect();
            if !seen.insert((sig, key)) {
                continue;
            }
            if cur.merge_line(view, &hull) {
                changed = true;
            }
        }
        if !changed {
            return cur;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Kind;

    fn single_chamber(kind: Kind, i: u8) -> (Arc<WallTree>, YChamber) {
        let t = Arc::new(WallTree::path(kind, i, 4, 0).unwrap());
        let tri = t.slopes.pattern[0];
        (t, YChamber { edge: 1, tri })
    }

    #[test]
    fn hull_of_one_chamber_contains_exactly_it() {
        for k in Kind::ALL {
            for i in 1..=2 {
                let (t, ch) = single_chamber(k, i);
                let c = hull_oracle(&WallComplex::empty(t), &[ch]);
                assert!(c.is_convex());
                assert_eq!(c.chambers().unwrap(), vec![ch], "{k} {i}");
                assert!(c.has_chamber());
            }
        }
    }

    #[test]
    fn oracle_is_idempotent() {
        for k in Kind::ALL {
            let (t, ch) = single_chamber(k, 1);
            let mut other = ch;
            other.edge = 2;
            let c = hull_oracle(&WallComplex::empty(t), &[ch, other]);
            assert_eq!(hull_oracle(&c, &[]), c);
            assert!(c.bound_is_locally_convex(false) && c.bound_is_locally_convex(true));
            assert!(c.slopes_are_legal());
        }
    }

    #[test]
    fn flip_is_an_involution() {
        let (t, ch) = single_chamber(Kind::B2, 2);
        let c = hull_oracle(&WallComplex::empty(t), &[ch]);
        assert_eq!(c.flipped().flipped(), c);
        assert!(c.flipped().is_convex());
    }
}
