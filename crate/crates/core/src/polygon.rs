//! Finite generalized polygons: the spherical rank-2 buildings used as
//! vertex links and as residues at infinity.
//!
//! A polygon is stored as a bipartite incidence graph. Elements
//! `0..points` are points (element type 0); elements
//! `points..points + lines` are lines (element type 1).

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite generalized `m`-gon given by its incidence relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedPolygon {
    pub name: String,
    /// Gonality: half the girth of the incidence graph.
    pub gonality: usize,
    pub points: usize,
    pub lines: usize,
    /// `lines_of[p]`: lines through point `p` (as line indices `0..lines`).
    pub lines_of: Vec<Vec<usize>>,
    #[serde(skip)]
    dist: Vec<u8>,
}

impl GeneralizedPolygon {
    /// Builds a polygon from point–line incidences and checks the axioms:
    /// the incidence graph is connected, has diameter `m` and girth `2m`.
    pub fn new(name: &str, gonality: usize, points: usize, lines: usize, lines_of: Vec<Vec<usize>>) -> Result<Self> {
        if lines_of.len() != points || lines_of.iter().flatten().any(|&l| l >= lines) {
            return Err(Error::Inconsistent(format!("{name}: incidence list out of range")));
        }
        let mut poly =
            GeneralizedPolygon { name: name.to_string(), gonality, points, lines, lines_of, dist: Vec::new() };
        poly.dist = poly.all_distances();
        poly.check_axioms()?;
        Ok(poly)
    }

    /// The ordinary `m`-gon (every element on exactly two others).
    pub fn thin(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Precondition("gonality must be at least 2".into()));
        }
        let lines_of = (0..m).map(|p| vec![p, (p + m - 1) % m]).collect();
        GeneralizedPolygon::new(&format!("thin{m}"), m, m, m, lines_of)
    }

    /// The Fano plane PG(2,2): lines `{k, k+1, k+3} mod 7`.
    pub fn fano() -> Self {
        let mut lines_of = vec![Vec::new(); 7];
        for l in 0..7 {
            for d in [0, 1, 3] {
                lines_of[(l + d) % 7].push(l);
            }
        }
        GeneralizedPolygon::new("fano", 3, 7, 7, lines_of).expect("the Fano plane is a projective plane")
    }

    /// The symplectic quadrangle W(2): points of PG(3,2), lines the totally
    /// isotropic lines of the form `x0y1 + x1y0 + x2y3 + x3y2`.
    pub fn w2() -> Self {
        let form = |u: usize, v: usize| {
            let b = |x: usize, k: usize| (x >> k) & 1;
            (b(u, 0) * b(v, 1) + b(u, 1) * b(v, 0) + b(u, 2) * b(v, 3) + b(u, 3) * b(v, 2)) % 2
        };
        let mut lines: BTreeSet<[usize; 3]> = BTreeSet::new();
        for u in 1..16usize {
            for v in u + 1..16 {
                if form(u, v) == 0 {
                    let mut l = [u, v, u ^ v];
                    l.sort_unstable();
                    lines.insert(l);
                }
            }
        }
        let mut lines_of = vec![Vec::new(); 15];
        for (k, l) in lines.iter().enumerate() {
            for &p in l {
                lines_of[p - 1].push(k);
            }
        }
        GeneralizedPolygon::new("w2", 4, 15, lines.len(), lines_of).expect("W(2) is a generalized quadrangle")
    }

    /// Looks up a named model: `thinM`, `fano`, `w2`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "fano" => Ok(Self::fano()),
            "w2" => Ok(Self::w2()),
            _ => match name.strip_prefix("thin").and_then(|m| m.parse().ok()) {
                Some(m) => Self::thin(m),
                None => Err(Error::Parse(format!("unknown polygon model {name:?}"))),
            },
        }
    }

    /// Number of elements (points and lines).
    pub fn len(&self) -> usize {
        self.points + self.lines
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Element type: 0 for points, 1 for lines.
    pub fn element_type(&self, x: usize) -> u8 {
        u8::from(x >= self.points)
    }

    /// Element id of line `l`.
    pub fn line(&self, l: usize) -> usize {
        self.points + l
    }

    /// Elements incident with `x`, sorted.
    pub fn neighbours(&self, x: usize) -> Vec<usize> {
        if x < self.points {
            let mut v: Vec<usize> = self.lines_of[x].iter().map(|&l| self.points + l).collect();
            v.sort_unstable();
            v
        } else {
            let l = x - self.points;
            (0..self.points).filter(|&p| self.lines_of[p].contains(&l)).collect()
        }
    }

    /// Distance in the incidence graph.
    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.len() + y] as usize
    }

    /// Whether `x` and `y` are opposite (at distance `m`).
    pub fn opposite(&self, x: usize, y: usize) -> bool {
        self.distance(x, y) == self.gonality
    }

    /// Orders `(s, t)`: `s + 1` points per line, `t + 1` lines per point.
    pub fn order(&self) -> (usize, usize) {
        (self.neighbours(self.line(0)).len() - 1, self.lines_of[0].len() - 1)
    }

    /// Flags (incident point–line pairs), i.e. the chambers.
    pub fn flags(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..self.points {
            for &l in &self.lines_of[p] {
                out.push((p, self.points + l));
            }
        }
        out.sort_unstable();
        out
    }

    /// The unique element incident with `x` on a shortest path from `x` to
    /// `y`, for `1 ≤ d(x, y) < m` (the projection of `y` to the residue of `x`).
    pub fn projection(&self, x: usize, y: usize) -> Option<usize> {
        let d = self.distance(x, y);
        if d == 0 || d >= self.gonality {
            return None;
        }
        self.neighbours(x).into_iter().find(|&z| self.distance(z, y) + 1 == d)
    }

    fn all_distances(&self) -> Vec<u8> {
        let n = self.len();
        let adj: Vec<Vec<usize>> = (0..n).map(|x| self.neighbours(x)).collect();
        let mut dist = vec![u8::MAX; n * n];
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(a) = q.pop_front() {
                for &b in &adj[a] {
                    if row[b] == u8::MAX {
                        row[b] = row[a] + 1;
                        q.push_back(b);
                    }
                }
            }
        }
        dist
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        let m = self.gonality;
        if self.dist.contains(&u8::MAX) {
            return Err(Error::Inconsistent(format!("{}: incidence graph is disconnected", self.name)));
        }
        if (0..n * n).map(|k| self.dist[k] as usize).max() != Some(m) {
            return Err(Error::Inconsistent(format!("{}: diameter differs from {m}", self.name)));
        }
        // Girth 2m: two elements at distance d < m are joined by a unique path,
        // i.e. have a unique neighbour one step closer.
        for x in 0..n {
            for y in 0..n {
                let d = self.distance(x, y);
                if d >= 1 && d < m {
                    let closer = self.neighbours(x).into_iter().filter(|&z| self.distance(z, y) + 1 == d).count();
                    if closer != 1 {
                        return Err(Error::Inconsistent(format!("{}: girth below {}", self.name, 2 * m)));
                    }
                }
            }
        }
        if (0..n).any(|x| self.neighbours(x).len() < 2) {
            return Err(Error::Inconsistent(format!("{}: element of degree below 2", self.name)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_counts() {
        let f = GeneralizedPolygon::fano();
        assert_eq!(f.order(), (2, 2));
        assert_eq!(f.points, 7);
        assert_eq!((f.points..f.len()).filter(|&l| f.opposite(0, l)).count(), 4);
    }

    #[test]
    fn w2_counts() {
        let w = GeneralizedPolygon::w2();
        assert_eq!((w.points, w.lines), (15, 15));
        assert_eq!(w.order(), (2, 2));
        assert_eq!((0..w.points).filter(|&p| w.opposite(0, p)).count(), 8);
    }

    #[test]
    fn thin_polygons() {
        for m in 2..=6 {
            let t = GeneralizedPolygon::thin(m).unwrap();
            assert_eq!(t.order(), (1, 1));
            assert_eq!((0..t.len()).filter(|&y| t.opposite(0, y)).count(), 1);
        }
    }

    #[test]
    fn broken_incidence_is_rejected() {
        // Two points on two common lines: a digon inside a would-be triangle.
        let r = GeneralizedPolygon::new("bad", 3, 2, 2, vec![vec![0, 1], vec![0, 1]]);
        assert!(r.is_err());
    }
}
