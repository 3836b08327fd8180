//! Components of constant slope and elementary extensions.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::Rng;

use super::complex::{line_hull, lower_value, upper_value, WallComplex, YChamber};
use crate::error::{Error, Result};
use crate::rational::{qi, Q};

/// Which bound function a component belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// The lower bound `f`; extensions go downward.
    Lower,
    /// The upper bound `g`; extensions go upward.
    Upper,
}

/// A component of constant slope: a set of fine edges of `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub side: Side,
    /// Fine edges `(u, v)` with `u < v`.
    pub edges: BTreeSet<(usize, usize)>,
    pub admissible: bool,
}

impl Component {
    pub fn vertices(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}

/// How the defining edge of an extension is picked inside each maximal segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeChoice {
    First,
    Last,
    Middle,
    Seeded(u64),
}

/// The kind of an elementary extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionKind {
    /// Along a component of the lower or upper bound.
    Along { side: Side, component: usize },
    /// Across the vertical panel over coarse vertex `vertex` into neighbour `towards`.
    Vertical { vertex: usize, towards: usize },
}

/// An elementary extension together with its defining chamber.
#[derive(Clone, Debug, PartialEq)]
pub struct Extension {
    pub kind: ExtensionKind,
    pub chamber: YChamber,
    pub result: WallComplex,
}

fn slope_on(c: &WallComplex, side: Side, v: usize, w: usize) -> Option<Q> {
    match side {
        Side::Lower => c.lower_slope(v, w),
        Side::Upper => c.upper_slope(v, w),
    }
}

fn s_neighbours(c: &WallComplex, v: usize) -> Vec<usize> {
    c.tree.adj[v].iter().map(|&(w, _)| w).filter(|&w| c.in_support(w)).collect()
}

/// Components of constant slope of one bound (which must be finite on `S`).
pub fn components(c: &WallComplex, side: Side) -> Vec<Component> {
    let sup = c.support();
    let finite = sup.iter().all(|&v| {
        let (f, g) = c.fibers[v].expect("support");
        match side {
            Side::Lower => !f.is_unbounded(),
            Side::Upper => !g.is_unbounded(),
        }
    });
    if !finite {
        return Vec::new();
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &v in &sup {
        for w in s_neighbours(c, v) {
            if v < w {
                edges.push((v, w));
            }
        }
    }
    let index: BTreeMap<(usize, usize), usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    let key = |a: usize, b: usize| index[&(a.min(b), a.max(b))];
    for &v in &sup {
        let nb = s_neighbours(c, v);
        for a in 0..nb.len() {
            for b in a + 1..nb.len() {
                let sa = slope_on(c, side, v, nb[a]).expect("finite");
                let sb = slope_on(c, side, v, nb[b]).expect("finite");
                if (sa + sb).is_zero() {
                    let (x, y) = (find(&mut parent, key(v, nb[a])), find(&mut parent, key(v, nb[b])));
                    parent[x] = y;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for (k, &e) in edges.iter().enumerate() {
        groups.entry(find(&mut parent, k)).or_default().insert(e);
    }
    let mut out: Vec<Component> = groups
        .into_values()
        .map(|es| {
            let mut comp = Component { side, edges: es, admissible: true };
            comp.admissible = is_admissible(c, &comp);
            comp
        })
        .collect();
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    out
}

/// Admissibility: every interior vertex of the component has all its
/// neighbours in `S` inside the component.
pub fn is_admissible(c: &WallComplex, comp: &Component) -> bool {
    for v in comp.vertices() {
        let nb = s_neighbours(c, v);
        let in_r = nb.iter().filter(|&&w| comp.contains_edge(v, w)).count();
        // Interior vertex: two component edges meeting with zero slope sum.
        let mut interior = false;
        for a in 0..nb.len() {
            for b in a + 1..nb.len() {
                if comp.contains_edge(v, nb[a]) && comp.contains_edge(v, nb[b]) {
                    let sa = slope_on(c, comp.side, v, nb[a]).expect("finite");
                    let sb = slope_on(c, comp.side, v, nb[b]).expect("finite");
                    if (sa + sb).is_zero() {
                        interior = true;
                    }
                }
            }
        }
        if interior && in_r != nb.len() {
            return false;
        }
    }
    true
}

/// A maximal segment of constant slope found on a line: path indices `a..=b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentOnLine {
    pub line: usize,
    pub start: usize,
    pub end: usize,
}

/// Maximal constant-slope segments of a lower-bound component, per line.
pub fn maximal_segments(c: &WallComplex, comp: &Component) -> Vec<SegmentOnLine> {
    let mut out = Vec::new();
    for (li, view) in c.tree.lines.iter().enumerate() {
        let p = &view.path;
        let n = p.len();
        let mut k = 0;
        while k + 1 < n {
            if !comp.contains_edge(p[k], p[k + 1]) {
                k += 1;
                continue;
            }
            let start = k;
            let mut end = k + 1;
            while end + 1 < n && comp.contains_edge(p[end], p[end + 1]) {
                let s_in = slope_on(c, comp.side, p[end], p[end - 1]).expect("finite");
                let s_out = slope_on(c, comp.side, p[end], p[end + 1]).expect("finite");
                if !(s_in + s_out).is_zero() {
                    break;
                }
                end += 1;
            }
            // Maximality inside S at both ends.
            let maximal_at = |v: usize, inner: usize| {
                let si = slope_on(c, comp.side, v, inner).expect("finite");
                s_neighbours(c, v)
                    .into_iter()
                    .filter(|&w| w != inner)
                    .all(|w| slope_on(c, comp.side, v, w).expect("finite") + si > Q::zero())
            };
            if maximal_at(p[start], p[start + 1]) && maximal_at(p[end], p[end - 1]) {
                out.push(SegmentOnLine { line: li, start, end });
            }
            k = end;
        }
    }
    out
}

/// The chamber just below the lower boundary edge over the fine edge
/// `path[k] → path[k+1]` of a line.
pub fn chamber_below(c: &WallComplex, line: usize, k: usize) -> Result<YChamber> {
    let view = &c.tree.lines[line];
    let (u, w) = (view.path[k], view.path[k + 1]);
    let e = c.tree.edge_between(u, w).expect("adjacent");
    let (fu, fw) = match (c.fibers[u], c.fibers[w]) {
        (Some(a), Some(b)) => (
            lower_value(a.0).ok_or_else(|| Error::Precondition("unbounded lower bound".into()))?,
            lower_value(b.0).ok_or_else(|| Error::Precondition("unbounded lower bound".into()))?,
        ),
        _ => return Err(Error::Precondition("edge not in support".into())),
    };
    let (ou, ow) = (c.tree.offset_on(u, e), c.tree.offset_on(w, e));
    let mid = ((ou + ow) / qi(2), (fu + fw) / qi(2));
    let tri = c.slopes().strip_alcove_at(mid, (Q::zero(), -Q::one()), (Q::one(), Q::zero()))?;
    Ok(YChamber { edge: e, tri })
}

fn pick_edge<R: Rng>(seg: &SegmentOnLine, choice: EdgeChoice, rng: &mut R) -> usize {
    match choice {
        EdgeChoice::First => seg.start,
        EdgeChoice::Last => seg.end - 1,
        EdgeChoice::Middle => (seg.start + seg.end - 1) / 2,
        EdgeChoice::Seeded(_) => rng.gen_range(seg.start..seg.end),
    }
}

/// Downward (lower side) or upward (upper side) extension along an admissible
/// component, computed apartment by apartment: on every line containing a
/// maximal segment of the component, the new trace is the convex hull of the
/// old trace and the chamber below a chosen edge of that segment.
pub fn extend_along(c: &WallComplex, comp: &Component, choice: EdgeChoice) -> Result<Extension> {
    if !comp.admissible {
        return Err(Error::Precondition("component is not admissible".into()));
    }
    match comp.side {
        Side::Lower => extend_lower(c, comp, choice),
        Side::Upper => {
            let flipped = c.flipped();
            let mut fc = comp.clone();
            fc.side = Side::Lower;
            let mut ext = extend_lower(&flipped, &fc, choice)?;
            ext.result = ext.result.flipped();
            ext.chamber.tri = ext.chamber.tri.map(|(o, h)| (o, -h));
            ext.kind = ExtensionKind::Along { side: Side::Upper, component: 0 };
            Ok(ext)
        }
    }
}

fn extend_lower(c: &WallComplex, comp: &Component, choice: EdgeChoice) -> Result<Extension> {
    let seed = match choice {
        EdgeChoice::Seeded(s) => s,
        _ => 0,
    };
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let segs = maximal_segments(c, comp);
    if segs.is_empty() {
        return Err(Error::Inconsistent("component has no maximal segment on any line".into()));
    }
    let mut d = c.clone();
    let mut first: Option<YChamber> = None;
    for seg in &segs {
        let k = pick_edge(seg, choice, &mut rng);
        let ch = chamber_below(c, seg.line, k)?;
        first.get_or_insert(ch);
        let view = &c.tree.lines[seg.line];
        let pts = WallComplex::chamber_points(view, &ch).expect("chamber on line");
        let hull = line_hull(c.slopes(), view, &c.trace(view), &pts);
        d.merge_line(view, &hull);
    }
    close_shared_lines(c, &mut d);
    Ok(Extension {
        kind: ExtensionKind::Along { side: Side::Lower, component: 0 },
        chamber: first.expect("nonempty"),
        result: d,
    })
}

/// Restores convexity on lines that share vertices with the updated lines.
///
/// Two apartments through a common segment can raise it by different
/// amounts: each per-line hull depends on the whole line. Every line through
/// a vertex whose fiber grew is re-hulled until no fiber changes.
fn close_shared_lines(old: &WallComplex, d: &mut WallComplex) {
    let tree = d.tree.clone();
    let ss = &tree.slopes;
    let mut grown: BTreeSet<usize> = (0..d.tree.len()).filter(|&v| d.fibers[v] != old.fibers[v]).collect();
    while !grown.is_empty() {
        let mut next = BTreeSet::new();
        for view in tree.lines.iter().filter(|l| l.path.iter().any(|v| grown.contains(v))) {
            let before = d.trace(view);
            let hull = line_hull(ss, view, &before, &[]);
            if d.merge_line(view, &hull) {
                next.extend(view.path.iter().zip(&before).filter(|&(&v, b)| d.fibers[v] != *b).map(|(&v, _)| v));
            }
        }
        grown = next;
    }
}

/// Coarse vertices of `S` with a non-degenerate fiber and a window neighbour
/// outside `S`, with that neighbour.
pub fn vertical_sites(c: &WallComplex) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for v in c.support() {
        if !c.tree.is_coarse(v) {
            continue;
        }
        let (f, g) = c.fibers[v].expect("support");
        let degenerate = matches!((lower_value(f), upper_value(g)), (Some(a), Some(b)) if a == b);
        if degenerate {
            continue;
        }
        for &(w, _) in &c.tree.adj[v] {
            if !c.in_support(w) {
                out.push((v, w));
            }
        }
    }
    out
}

/// The chamber across the lowest vertical panel of the fiber over `v`,
/// on the coarse edge towards `w`.
pub fn vertical_chamber(c: &WallComplex, v: usize, w: usize) -> Result<YChamber> {
    let e = c.tree.edge_between(v, w).ok_or_else(|| Error::Precondition("not adjacent".into()))?;
    let ov = c.tree.offset_on(v, e);
    let (f, g) = c.fibers[v].ok_or_else(|| Error::Precondition("vertex not in support".into()))?;
    let ss = c.slopes();
    let (lo, hi) = (lower_value(f), upper_value(g));
    let base = match (lo, hi) {
        (Some(a), _) => a,
        (None, Some(b)) => b - ss.period * qi(2),
        (None, None) => Q::zero(),
    };
    let mut best: Option<([(Q, Q); 3], Q)> = None;
    for tri in ss.strip_alcoves(base - ss.period * qi(2), base + ss.period * qi(3)) {
        let on: Vec<Q> = tri.iter().filter(|p| p.0 == ov).map(|p| p.1).collect();
        if on.len() != 2 {
            continue;
        }
        let (a, b) = (on[0].min(on[1]), on[0].max(on[1]));
        if lo.is_none_or(|x| a >= x) && hi.is_none_or(|x| b <= x) {
            let better = match (lo, best) {
                (_, None) => true,
                (Some(_), Some((_, cur))) => a < cur,
                (None, Some((_, cur))) => a > cur,
            };
            if better {
                best = Some((tri, a));
            }
        }
    }
    let (tri, _) = best.ok_or_else(|| Error::Precondition("fiber contains no vertical panel".into()))?;
    Ok(YChamber { edge: e, tri })
}

/// Extension across a vertical panel over coarse vertex `v` into the branch
/// towards `w`: on every line through the new edge, the hull of the old trace
/// and the chamber.
pub fn extend_vertical(c: &WallComplex, v: usize, w: usize) -> Result<Extension> {
    let ch = vertical_chamber(c, v, w)?;
    let mut d = c.clone();
    for li in c.tree.lines_through_edge(v, w) {
        let view = &c.tree.lines[li];
        let pts = WallComplex::chamber_points(view, &ch).expect("chamber on line");
        let hull = line_hull(c.slopes(), view, &c.trace(view), &pts);
        d.merge_line(view, &hull);
    }
    close_shared_lines(c, &mut d);
    Ok(Extension { kind: ExtensionKind::Vertical { vertex: v, towards: w }, chamber: ch, result: d })
}

/// All elementary extensions inside the window: along admissible lower and
/// upper components, and across vertical panels.
pub fn elementary_extensions(c: &WallComplex) -> Result<Vec<Extension>> {
    let mut out = Vec::new();
    for side in [Side::Lower, Side::Upper] {
        for (idx, comp) in components(c, side).iter().enumerate() {
            if comp.admissible {
                let mut ext = extend_along(c, comp, EdgeChoice::First)?;
                ext.kind = ExtensionKind::Along { side, component: idx };
                out.push(ext);
            }
        }
    }
    for (v, w) in vertical_sites(c) {
        out.push(extend_vertical(c, v, w)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Kind;
    use crate::treeconv::{hull_oracle, WallTree};
    use std::sync::Arc;

    #[test]
    fn single_edge_component_is_admissible() {
        let t = Arc::new(WallTree::path(Kind::A2, 1, 3, 0).unwrap());
        let ch = YChamber { edge: 0, tri: t.slopes.pattern[0] };
        let c = hull_oracle(&crate::treeconv::WallComplex::empty(t), &[ch]);
        for side in [Side::Lower, Side::Upper] {
            let comps = components(&c, side);
            assert_eq!(comps.len(), 1);
            assert!(comps[0].admissible);
        }
    }

    #[test]
    fn extensions_of_a_chamber_match_the_oracle() {
        for k in Kind::ALL {
            for i in 1..=2 {
                let t = Arc::new(WallTree::new(k, i, &[0, 1, 1, 1], &[(0, 1), (0, 2), (0, 3)]).unwrap());
                let ch = YChamber { edge: 0, tri: t.slopes.pattern[0] };
                let c = hull_oracle(&crate::treeconv::WallComplex::empty(t), &[ch]);
                let exts = elementary_extensions(&c).unwrap();
                assert!(!exts.is_empty());
                for e in exts {
                    assert_eq!(e.result, hull_oracle(&c, &[e.chamber]), "{k} {i} {:?}", e.kind);
                    assert!(e.result.is_convex());
                    assert!(c.is_subset(&e.result) && e.result != c);
                }
            }
        }
    }
}

/// Evidence that a non-admissible component does not give a minimal extension:
/// the hull of `C` and a chamber below the component strictly contains an
/// elementary extension of `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonAdmissibleWitness {
    pub component: Component,
    pub chamber: YChamber,
    pub hull: WallComplex,
    pub smaller: Extension,
}

/// Searches the non-admissible components of `c` for a witness.
pub fn non_admissible_witness(c: &WallComplex) -> Result<Option<NonAdmissibleWitness>> {
    let exts = elementary_extensions(c)?;
    for side in [Side::Lower, Side::Upper] {
        let base = if side == Side::Lower { c.clone() } else { c.flipped() };
        for comp in components(c, side) {
            if comp.admissible {
                continue;
            }
            let mut lc = comp.clone();
            lc.side = Side::Lower;
            for (li, view) in base.tree.lines.iter().enumerate() {
                for k in 0..view.path.len().saturating_sub(1) {
                    if !lc.contains_edge(view.path[k], view.path[k + 1]) {
                        continue;
                    }
                    let mut ch = chamber_below(&base, li, k)?;
                    if side == Side::Upper {
                        ch.tri = ch.tri.map(|(o, h)| (o, -h));
                    }
                    let hull = super::complex::hull_oracle(c, &[ch]);
                    if let Some(smaller) = exts.iter().find(|e| e.result.is_subset(&hull) && e.result != hull) {
                        return Ok(Some(NonAdmissibleWitness {
                            component: comp.clone(),
                            chamber: ch,
                            hull,
                            smaller: smaller.clone(),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// How an endpoint of a maximal segment enters the envelope bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndpointCase {
    /// The endpoint is interior to the trace: a ray of the largest wall slope
    /// below the segment slope bounds the extension.
    Interior,
    /// The endpoint is a boundary point of the trace over a vertical wall.
    CoarseBoundary,
    /// The endpoint is a boundary point of the trace at a non-branching vertex.
    FineBoundary,
}

/// Lower envelope of a downward extension on one maximal segment:
/// the maximum of the endpoint rays and the parallel wall one spacing below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub line: usize,
    pub start: usize,
    pub end: usize,
    pub cases: [EndpointCase; 2],
    /// Envelope value at the path vertices `start..=end`.
    pub values: Vec<Q>,
    /// Vertical spacing to the next parallel wall.
    pub drop: Q,
}

/// Envelope of a maximal segment of a lower-side component (diagnostic).
pub fn envelope(c: &WallComplex, seg: &SegmentOnLine) -> Result<Envelope> {
    let view = &c.tree.lines[seg.line];
    let ss = c.slopes();
    let fval = |k: usize| -> Result<Q> {
        c.fibers[view.path[k]]
            .and_then(|x| lower_value(x.0))
            .ok_or_else(|| Error::Precondition("segment outside the finite lower bound".into()))
    };
    let (a, b) = (seg.start, seg.end);
    let lam_m = (fval(b)? - fval(a)?) / (view.s[b] - view.s[a]);
    let class = ss
        .classes
        .iter()
        .find(|cl| cl.slope == lam_m)
        .ok_or_else(|| Error::Inconsistent("segment slope is not a wall slope".into()))?;
    let drop = class.spacing;
    let mut rays: Vec<(usize, Q)> = Vec::new();
    let mut cases = [EndpointCase::Interior; 2];
    for (slot, (end, inner, outer)) in [(a, a + 1, a.checked_sub(1)), (b, b - 1, Some(b + 1))].into_iter().enumerate() {
        let v = view.path[end];
        let outside_in_trace = outer.filter(|&o| o < view.path.len()).is_some_and(|o| c.in_support(view.path[o]));
        if outside_in_trace {
            // Slope measured from the endpoint into the segment.
            let dir = if inner > end { Q::one() } else { -Q::one() };
            let into = (fval(inner)? - fval(end)?) / (view.s[inner] - view.s[end]) * dir;
            let fv = fval(end)?;
            let lam = ss
                .slopes_at(view.s[end], fv)
                .into_iter()
                .map(|l| l * dir)
                .filter(|&l| l < into)
                .max()
                .ok_or_else(|| Error::Inconsistent("no wall slope below the segment slope".into()))?;
            rays.push((end, lam));
        } else {
            cases[slot] = if c.tree.is_coarse(v) { EndpointCase::CoarseBoundary } else { EndpointCase::FineBoundary };
        }
    }
    let mut values = Vec::with_capacity(b - a + 1);
    for k in a..=b {
        let mut h = fval(k)? - drop;
        for &(end, lam) in &rays {
            let t = if k >= end { view.s[k] - view.s[end] } else { view.s[end] - view.s[k] };
            h = h.max(fval(end)? + lam * t);
        }
        values.push(h);
    }
    Ok(Envelope { line: seg.line, start: a, end: b, cases, values, drop })
}
