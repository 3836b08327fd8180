//! Slope systems of wall spaces.
//!
//! A wall space of type `i` is modelled on the apartment with coordinates
//! `s = α_j(x)` (transverse, along the tree; `j` the other index) and
//! `h = κ·(ω_i, x)` (height, along `ω_i`). The constant `κ` is chosen per kind
//! so that every non-vertical wall has the rational form
//! `h = λ·s + μ·n` (`n ∈ ℤ`) with `λ` an integer slope and `μ > 0` the spacing
//! of its parallel class. Vertical walls are the lines `s ∈ ℤ`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::alcove::Alcove;
use super::thickness::panel_classes;
use super::{eval_root, Kind, Point, RootCoeffs, RootSystem2};
use crate::error::{Error, Result};
use crate::rational::{floor, qi, Q};

/// A parallel class of non-vertical walls: `h − slope·s ∈ spacing·ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopeClass {
    pub slope: Q,
    pub spacing: Q,
    pub root: RootCoeffs,
}

/// Coordinate frame `(s, h)` of a wall space of type `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripFrame {
    pub i: u8,
    pub j: u8,
    pub kappa: Q,
    gram: [[Q; 2]; 2],
}

impl StripFrame {
    fn idx(t: u8) -> usize {
        (t - 1) as usize
    }

    /// `(s, h)` coordinates of a point.
    pub fn to_strip(&self, p: Point) -> (Q, Q) {
        let (i, j) = (Self::idx(self.i), Self::idx(self.j));
        let s = p.0[j];
        let h = self.kappa * (self.gram[i][i] * p.0[i] + self.gram[i][j] * p.0[j]);
        (s, h)
    }

    /// The point with strip coordinates `(s, h)`.
    pub fn from_strip(&self, s: Q, h: Q) -> Point {
        let (i, j) = (Self::idx(self.i), Self::idx(self.j));
        let xi = (h / self.kappa - self.gram[i][j] * s) / self.gram[i][i];
        let mut c = [Q::zero(); 2];
        c[i] = xi;
        c[j] = s;
        Point(c)
    }
}

/// Slope data of the wall space of a given kind and type.
#[derive(Clone, Debug)]
pub struct SlopeSystem {
    pub kind: Kind,
    pub frame: StripFrame,
    /// Non-vertical wall classes sorted by slope.
    pub classes: Vec<SlopeClass>,
    /// The root whose walls are vertical (`s ∈ ℤ`).
    pub vertical_root: RootCoeffs,
    /// `s`-coordinates in `[0, 1]` of apartment vertices (the fine subdivision).
    pub fine_offsets: Vec<Q>,
    /// Height period of the chamber pattern in the strip `0 ≤ s ≤ 1`.
    pub period: Q,
    /// Alcoves of the strip `0 ≤ s ≤ 1` with centroid height in `[0, period)`,
    /// given as `(s, h)` vertex triples indexed by vertex type.
    pub pattern: Vec<[(Q, Q); 3]>,
    /// Cotype of the panels on the vertical walls `s ≡ 0` and `s ≡ 1 (mod 2)`;
    /// all panels on such a wall are conjugate, hence equally thick.
    pub vertical_cotype: [u8; 2],
    rs: RootSystem2,
}

/// Slope system of the wall space of type `i ∈ {1,2}`.
pub fn slope_system(rs: &RootSystem2, i: u8) -> Result<SlopeSystem> {
    if i != 1 && i != 2 {
        return Err(Error::Precondition("wall-space type must be 1 or 2".into()));
    }
    let j = 3 - i;
    let (ii, jj) = ((i - 1) as usize, (j - 1) as usize);
    let g = rs.gram;
    // Raw slopes with κ = 1, then rescale so that all slopes are coprime integers.
    let raw: Vec<(RootCoeffs, Q)> = rs
        .positive_roots
        .iter()
        .filter(|c| c[ii] != 0)
        .map(|&c| (c, g[ii][jj] - g[ii][ii] * qi(c[jj]) / qi(c[ii])))
        .collect();
    let mut kappa = Q::one();
    let nonzero: Vec<Q> = raw.iter().map(|r| r.1).filter(|x| !x.is_zero()).collect();
    if !nonzero.is_empty() {
        let den_lcm = nonzero.iter().fold(1i64, |a, x| num_integer::lcm(a, *x.denom()));
        let num_gcd = nonzero.iter().fold(0i64, |a, x| num_integer::gcd(a, (*x * qi(den_lcm)).to_integer()));
        kappa = qi(den_lcm) / qi(num_gcd);
    }
    let mut classes: Vec<SlopeClass> = raw
        .iter()
        .map(|&(c, l)| SlopeClass { slope: kappa * l, spacing: (kappa * g[ii][ii] / qi(c[ii])).abs(), root: c })
        .collect();
    classes.sort();
    let vertical_root = *rs.positive_roots.iter().find(|c| c[ii] == 0).expect("a root vanishes on ω_i");
    let frame = StripFrame { i, j, kappa, gram: g };

    // Fundamental translation preserving the strip: coroot-lattice vectors with α_j = 0.
    let coroots = [rs.coroot_of([1, 0]), rs.coroot_of([0, 1])];
    let mut period: Option<Q> = None;
    for a in -6i64..=6 {
        for b in -6i64..=6 {
            let t = coroots[0].scale(qi(a)) + coroots[1].scale(qi(b));
            if t.0[jj].is_zero() {
                let (_, h) = frame.to_strip(t);
                if h > Q::zero() && period.is_none_or(|p| h < p) {
                    period = Some(h);
                }
            }
        }
    }
    let period = period.ok_or_else(|| Error::Inconsistent("no strip period found".into()))?;

    // Enumerate strip alcoves by walking from an alcove at the origin.
    let mut pattern: Vec<[(Q, Q); 3]> = Vec::new();
    let mut seen: BTreeSet<Alcove> = BTreeSet::new();
    let start = {
        // Alcove just inside the strip above the origin.
        let d1 = frame.from_strip(qi(1), Q::zero());
        let d2 = frame.from_strip(Q::zero(), qi(1));
        Alcove::containing_perturbed(rs, Point::origin(), d1, d2)?
    };
    let in_strip = |a: &Alcove| {
        a.vertices.iter().all(|&v| {
            let (s, _) = frame.to_strip(v);
            s >= Q::zero() && s <= Q::one()
        })
    };
    let lo_h = -qi(2) * period;
    let hi_h = qi(3) * period;
    let mut stack = vec![start];
    seen.insert(start);
    while let Some(a) = stack.pop() {
        let (_, ch) = frame.to_strip(a.centroid());
        if ch >= Q::zero() && ch < period {
            pattern.push(a.vertices.map(|v| frame.to_strip(v)));
        }
        for t in 0..3 {
            let n = a.neighbour(rs, t);
            let (_, nh) = frame.to_strip(n.centroid());
            if in_strip(&n) && nh > lo_h && nh < hi_h && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    pattern.sort();

    let mut offsets: BTreeSet<Q> = BTreeSet::new();
    for tri in &pattern {
        for &(s, _) in tri {
            offsets.insert(s);
        }
    }
    let fine_offsets: Vec<Q> = offsets.into_iter().collect();

    // Cotype of vertical panels at s = 0 and s = 1 (up to conjugacy; the
    // first one met, which is the one containing the origin for s = 0).
    let panel_cls = panel_classes(rs);
    let same_class = |a: usize, b: usize| panel_cls.iter().any(|c| c.contains(&a) && c.contains(&b));
    let mut vertical_cotype = [u8::MAX; 2];
    for tri in &pattern {
        for t in 0..3usize {
            let others: Vec<&(Q, Q)> = (0..3).filter(|&u| u != t).map(|u| &tri[u]).collect();
            if others[0].0 == others[1].0 && others[0].0.is_integer() {
                let parity = others[0].0.to_integer().rem_euclid(2) as usize;
                if vertical_cotype[parity] == u8::MAX {
                    vertical_cotype[parity] = t as u8;
                } else if !same_class(vertical_cotype[parity] as usize, t) {
                    return Err(Error::Inconsistent("vertical wall with non-conjugate panel cotypes".into()));
                }
            }
        }
    }
    if vertical_cotype.contains(&u8::MAX) {
        return Err(Error::Inconsistent("strip pattern misses a vertical wall".into()));
    }
    Ok(SlopeSystem {
        kind: rs.kind,
        frame,
        classes,
        vertical_root,
        fine_offsets,
        period,
        pattern,
        vertical_cotype,
        rs: rs.clone(),
    })
}

impl SlopeSystem {
    pub fn root_system(&self) -> &RootSystem2 {
        &self.rs
    }

    /// All wall slopes (symmetric under negation once both signs are added).
    pub fn slopes(&self) -> Vec<Q> {
        self.classes.iter().map(|c| c.slope).collect()
    }

    /// Minimal spacing of parallel walls over all classes.
    pub fn mu_drop(&self) -> Q {
        self.classes.iter().map(|c| c.spacing).min().expect("nonempty")
    }

    /// Slopes of walls passing through the strip point `(s, h)`.
    pub fn slopes_at(&self, s: Q, h: Q) -> Vec<Q> {
        self.classes.iter().filter(|c| ((h - c.slope * s) / c.spacing).is_integer()).map(|c| c.slope).collect()
    }

    /// Whether `(s, h)` is a vertex of the apartment.
    pub fn is_vertex(&self, s: Q, h: Q) -> bool {
        self.rs.vertex_type(self.frame.from_strip(s, h)).is_some()
    }

    /// Heights of vertices on the vertical line at `s` inside `[lo, hi]`.
    pub fn vertex_heights(&self, s: Q, lo: Q, hi: Q) -> Vec<Q> {
        // Vertices over s are intersections with wall classes; collect candidates.
        let mut out: BTreeSet<Q> = BTreeSet::new();
        for c in &self.classes {
            let base = c.slope * s;
            let n0 = floor((lo - base) / c.spacing);
            let n1 = floor((hi - base) / c.spacing) + 1;
            for n in n0..=n1 {
                let h = base + c.spacing * qi(n);
                if h >= lo && h <= hi && self.is_vertex(s, h) {
                    out.insert(h);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Strip alcoves (in `(s,h)` coordinates of the canonical strip `[0,1]`)
    /// whose centroid height lies in `[lo, hi)`.
    pub fn strip_alcoves(&self, lo: Q, hi: Q) -> Vec<[(Q, Q); 3]> {
        let n0 = floor(lo / self.period) - 1;
        let n1 = floor(hi / self.period) + 1;
        let mut out = Vec::new();
        for n in n0..=n1 {
            let shift = self.period * qi(n);
            for tri in &self.pattern {
                let moved = tri.map(|(s, h)| (s, h + shift));
                let ch = (moved[0].1 + moved[1].1 + moved[2].1) / qi(3);
                if ch >= lo && ch < hi {
                    out.push(moved);
                }
            }
        }
        out.sort();
        out
    }

    /// The strip alcove containing `(s, h) + ε·d1 + ε²·d2`.
    pub fn strip_alcove_at(&self, p: (Q, Q), d1: (Q, Q), d2: (Q, Q)) -> Result<[(Q, Q); 3]> {
        let f = &self.frame;
        let origin = f.from_strip(Q::zero(), Q::zero());
        let to_vec = |d: (Q, Q)| f.from_strip(d.0, d.1) - origin;
        let a = Alcove::containing_perturbed(&self.rs, f.from_strip(p.0, p.1), to_vec(d1), to_vec(d2))?;
        Ok(a.vertices.map(|v| f.to_strip(v)))
    }

    /// Slope of the vertical root's partner used for symmetry checks.
    pub fn eval_vertical(&self, p: Point) -> Q {
        eval_root(self.vertical_root, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::root_data;

    #[test]
    fn a2_slopes_are_plus_minus_one() {
        let rs = root_data(Kind::A2);
        for i in 1..=2 {
            let ss = slope_system(&rs, i).unwrap();
            assert_eq!(ss.slopes(), vec![qi(-1), qi(1)]);
            assert!(ss.mu_drop() > Q::zero());
        }
    }

    #[test]
    fn g2_has_two_nonzero_magnitudes_and_zero() {
        let rs = root_data(Kind::G2);
        for i in 1..=2 {
            let ss = slope_system(&rs, i).unwrap();
            assert_eq!(ss.slopes(), vec![qi(-3), qi(-1), qi(0), qi(1), qi(3)]);
        }
    }

    #[test]
    fn slope_sets_symmetric_and_frames_invert() {
        for k in Kind::ALL {
            let rs = root_data(k);
            for i in 1..=2 {
                let ss = slope_system(&rs, i).unwrap();
                let sl = ss.slopes();
                for x in &sl {
                    assert!(sl.contains(&-*x), "{k} {i}");
                }
                let p = Point::new(Q::new(3, 7), Q::new(-5, 4));
                let (s, h) = ss.frame.to_strip(p);
                assert_eq!(ss.frame.from_strip(s, h), p);
                assert_eq!(ss.fine_offsets.first(), Some(&Q::zero()));
                assert_eq!(ss.fine_offsets.last(), Some(&Q::one()));
            }
        }
    }

    #[test]
    fn vertical_cotypes_follow_panel_classes() {
        // Walls α_j = k: cotype at even k is the cotype of the panel {α_j = 0}.
        for k in Kind::ALL {
            let rs = root_data(k);
            for i in 1..=2u8 {
                let ss = slope_system(&rs, i).unwrap();
                let expected_even = if i == 1 { 1 } else { 2 };
                assert_eq!(ss.vertical_cotype[0], expected_even, "{k} {i}");
            }
        }
    }
}
