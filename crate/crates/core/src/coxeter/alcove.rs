//! Alcoves (chambers of the model apartment), finite windows of alcoves and
//! gallery distances inside them.

use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{apply_matrix, eval_root, Point, RootSystem2, Wall};
use crate::error::{Error, Result};
use crate::rational::{qi, Q};

/// An alcove, given by its three vertices indexed by vertex type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alcove {
    pub vertices: [Point; 3],
}

/// Stable identifier of an alcove: its type-0 vertex and the index of the
/// Weyl chamber (at that vertex) containing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlcoveId {
    #[serde(with = "point_serde")]
    pub base: Point,
    pub weyl: usize,
}

pub(crate) mod point_serde {
    use super::Point;
    use crate::rational::{fmt_q, parse_q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
        [fmt_q(&p.0[0]), fmt_q(&p.0[1])].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        let x = parse_q(&a).map_err(serde::de::Error::custom)?;
        let y = parse_q(&b).map_err(serde::de::Error::custom)?;
        Ok(Point([x, y]))
    }
}

impl Alcove {
    /// The fundamental alcove.
    pub fn fundamental(rs: &RootSystem2) -> Alcove {
        Alcove { vertices: rs.fundamental_vertices() }
    }

    /// Barycentre of the alcove (an interior point).
    pub fn centroid(&self) -> Point {
        let [a, b, c] = self.vertices;
        (a + b + c).scale(Q::new(1, 3))
    }

    /// The alcove containing the interior point `p`.
    ///
    /// Fails if `p` lies on a wall.
    pub fn containing(rs: &RootSystem2, p: Point) -> Result<Alcove> {
        if rs.positive_roots.iter().any(|&c| eval_root(c, p).is_integer()) {
            return Err(Error::Precondition("point lies on a wall".into()));
        }
        let (_, walls) = rs.fold(p);
        let mut verts = rs.fundamental_vertices();
        for w in walls.iter().rev() {
            for v in verts.iter_mut() {
                *v = rs.reflect(*v, *w);
            }
        }
        Ok(Alcove { vertices: verts })
    }

    /// The alcove containing `p + ε·d1 + ε²·d2` for infinitesimal `ε > 0`.
    ///
    /// `d1` and `d2` must be linearly independent.
    pub fn containing_perturbed(rs: &RootSystem2, p: Point, d1: Point, d2: Point) -> Result<Alcove> {
        // Per-root level of the perturbed point, decided lexicographically.
        let mut levels = Vec::with_capacity(rs.positive_roots.len());
        for &c in &rs.positive_roots {
            let v = eval_root(c, p);
            let lvl = if !v.is_integer() {
                crate::rational::floor(v)
            } else {
                let a = eval_root(c, d1);
                let b = eval_root(c, d2);
                let up = if !a.is_zero() {
                    a > Q::zero()
                } else if !b.is_zero() {
                    b > Q::zero()
                } else {
                    return Err(Error::Precondition("degenerate perturbation".into()));
                };
                if up {
                    v.to_integer()
                } else {
                    v.to_integer() - 1
                }
            };
            levels.push(lvl);
        }
        Alcove::from_levels(rs, &levels)
    }

    /// The alcove whose interior has the given root levels
    /// (`level < α < level + 1` per positive root).
    pub fn from_levels(rs: &RootSystem2, levels: &[i64]) -> Result<Alcove> {
        let roots = &rs.positive_roots;
        let within = |x: Point| {
            roots.iter().zip(levels).all(|(&c, &l)| {
                let v = eval_root(c, x);
                v >= qi(l) && v <= qi(l + 1)
            })
        };
        let mut corners: Vec<Point> = Vec::new();
        for a in 0..roots.len() {
            for b in a + 1..roots.len() {
                let (ca, cb) = (roots[a], roots[b]);
                let det = ca[0] * cb[1] - ca[1] * cb[0];
                if det == 0 {
                    continue;
                }
                for da in 0..2 {
                    for db in 0..2 {
                        let ra = qi(levels[a] + da);
                        let rb = qi(levels[b] + db);
                        let d = qi(det);
                        let x =
                            Point::new((ra * qi(cb[1]) - rb * qi(ca[1])) / d, (rb * qi(ca[0]) - ra * qi(cb[0])) / d);
                        if within(x) && !corners.contains(&x) {
                            corners.push(x);
                        }
                    }
                }
            }
        }
        if corners.len() != 3 {
            return Err(Error::Inconsistent("root levels do not describe an alcove".into()));
        }
        let mut verts = [Point::origin(); 3];
        let mut seen = [false; 3];
        for x in corners {
            let t =
                rs.vertex_type(x).ok_or_else(|| Error::Inconsistent("alcove corner is not a vertex".into()))? as usize;
            if seen[t] {
                return Err(Error::Inconsistent("alcove corners repeat a type".into()));
            }
            seen[t] = true;
            verts[t] = x;
        }
        Ok(Alcove { vertices: verts })
    }

    /// Interior root levels: `floor(α(x))` for interior `x`, per positive root.
    pub fn levels(&self, rs: &RootSystem2) -> Vec<i64> {
        let c = self.centroid();
        rs.positive_roots.iter().map(|&r| crate::rational::floor(eval_root(r, c))).collect()
    }

    /// The wall containing the panel opposite the vertex of type `t`.
    pub fn panel_wall(&self, rs: &RootSystem2, t: usize) -> Wall {
        let (a, b) = match t {
            0 => (self.vertices[1], self.vertices[2]),
            1 => (self.vertices[0], self.vertices[2]),
            _ => (self.vertices[0], self.vertices[1]),
        };
        for &c in &rs.positive_roots {
            let va = eval_root(c, a);
            if va == eval_root(c, b) && va.is_integer() {
                return Wall { root: c, level: va.to_integer() };
            }
        }
        unreachable!("every panel of an alcove lies in a wall")
    }

    /// The alcove adjacent across the panel of cotype `t` (opposite vertex `t`).
    pub fn neighbour(&self, rs: &RootSystem2, t: usize) -> Alcove {
        let w = self.panel_wall(rs, t);
        let mut v = self.vertices;
        v[t] = rs.reflect(v[t], w);
        Alcove { vertices: v }
    }

    /// Stable identifier of the alcove.
    pub fn id(&self, rs: &RootSystem2) -> AlcoveId {
        let base = self.vertices[0];
        let dir = self.centroid() - base;
        let weyl = rs
            .weyl_group()
            .iter()
            .position(|&m| {
                // dir lies in w(C) iff w^{-1}(dir) is dominant; test with the
                // fundamental-alcove centroid instead: w(c0) in same chamber.
                let img = apply_matrix(m, Alcove::fundamental(rs).centroid());
                rs.positive_roots.iter().all(|&c| (eval_root(c, img) > Q::zero()) == (eval_root(c, dir) > Q::zero()))
            })
            .expect("direction lies in some Weyl chamber");
        AlcoveId { base, weyl }
    }

    /// Reconstructs an alcove from its identifier.
    pub fn from_id(rs: &RootSystem2, id: AlcoveId) -> Result<Alcove> {
        if rs.vertex_type(id.base) != Some(0) {
            return Err(Error::Parse("alcove base is not a type-0 vertex".into()));
        }
        let group = rs.weyl_group();
        let m = *group.get(id.weyl).ok_or_else(|| Error::Parse("Weyl index out of range".into()))?;
        let c = id.base + apply_matrix(m, Alcove::fundamental(rs).centroid());
        Alcove::containing(rs, c)
    }
}

/// All alcoves inside the root-value box `|α(x)| ≤ radius`, with adjacency
/// and all-pairs gallery distances.
#[derive(Clone, Debug)]
pub struct ChamberWindow {
    pub radius: i64,
    pub alcoves: Vec<Alcove>,
    pub index: HashMap<Alcove, usize>,
    /// `adjacency[a][t]` is the neighbour across the cotype-`t` panel, if inside.
    pub adjacency: Vec<[Option<usize>; 3]>,
    /// Row-major gallery distance matrix.
    dist: Vec<u16>,
}

impl ChamberWindow {
    /// Enumerates the window of the given radius.
    pub fn new(rs: &RootSystem2, radius: i64) -> Result<ChamberWindow> {
        if radius < 1 {
            return Err(Error::Precondition("window radius must be positive".into()));
        }
        let inside = |a: &Alcove| {
            a.vertices.iter().all(|&v| rs.positive_roots.iter().all(|&c| eval_root(c, v).abs() <= qi(radius)))
        };
        let start = Alcove::fundamental(rs);
        let mut alcoves = vec![start];
        let mut index = HashMap::new();
        index.insert(start, 0);
        let mut queue = VecDeque::from([0usize]);
        let mut adjacency: Vec<[Option<usize>; 3]> = vec![[None; 3]];
        while let Some(i) = queue.pop_front() {
            for t in 0..3 {
                let n = alcoves[i].neighbour(rs, t);
                if !inside(&n) {
                    continue;
                }
                let j = match index.get(&n) {
                    Some(&j) => j,
                    None => {
                        let j = alcoves.len();
                        alcoves.push(n);
                        index.insert(n, j);
                        adjacency.push([None; 3]);
                        queue.push_back(j);
                        j
                    }
                };
                adjacency[i][t] = Some(j);
            }
        }
        let n = alcoves.len();
        let mut dist = vec![u16::MAX; n * n];
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(a) = q.pop_front() {
                let d = row[a];
                for b in adjacency[a].iter().flatten() {
                    if row[*b] == u16::MAX {
                        row[*b] = d + 1;
                        q.push_back(*b);
                    }
                }
            }
        }
        Ok(ChamberWindow { radius, alcoves, index, adjacency, dist })
    }

    pub fn len(&self) -> usize {
        self.alcoves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alcoves.is_empty()
    }

    /// Gallery distance between two window alcoves.
    pub fn distance(&self, a: usize, b: usize) -> u16 {
        self.dist[a * self.alcoves.len() + b]
    }

    /// Closure of a chamber set under minimal galleries (the combinatorial
    /// convex hull computed purely from gallery distances).
    pub fn gallery_closure(&self, seeds: &[usize]) -> Vec<usize> {
        let n = self.alcoves.len();
        let mut member = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in seeds {
            if !member[s] {
                member[s] = true;
                queue.push_back(s);
            }
        }
        let mut processed: Vec<usize> = Vec::new();
        while let Some(c) = queue.pop_front() {
            let rc = &self.dist[c * n..(c + 1) * n];
            for &d in &processed {
                let rd = &self.dist[d * n..(d + 1) * n];
                let dcd = rc[d];
                for e in 0..n {
                    if !member[e] && rc[e] + rd[e] == dcd {
                        member[e] = true;
                        queue.push_back(e);
                    }
                }
            }
            processed.push(c);
        }
        let mut out: Vec<usize> = (0..n).filter(|&i| member[i]).collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{root_data, Kind};

    #[test]
    fn neighbours_are_involutive_and_type_preserving() {
        for k in Kind::ALL {
            let rs = root_data(k);
            let w = ChamberWindow::new(&rs, 3).unwrap();
            for a in &w.alcoves {
                for t in 0..3 {
                    let n = a.neighbour(&rs, t);
                    assert_eq!(n.neighbour(&rs, t), *a);
                    for (ty, v) in n.vertices.iter().enumerate() {
                        assert_eq!(rs.vertex_type(*v), Some(ty as u8));
                    }
                }
            }
        }
    }

    #[test]
    fn alcove_ids_round_trip() {
        for k in Kind::ALL {
            let rs = root_data(k);
            let w = ChamberWindow::new(&rs, 2).unwrap();
            for a in &w.alcoves {
                let id = a.id(&rs);
                assert_eq!(Alcove::from_id(&rs, id).unwrap(), *a);
            }
        }
    }

    #[test]
    fn type_zero_vertex_has_weyl_many_alcoves() {
        for k in Kind::ALL {
            let rs = root_data(k);
            let w = ChamberWindow::new(&rs, 3).unwrap();
            let at_origin = w.alcoves.iter().filter(|a| a.vertices[0] == Point::origin()).count();
            assert_eq!(at_origin, rs.weyl_group().len());
        }
    }

    #[test]
    fn perturbed_location() {
        let rs = root_data(Kind::A2);
        let a = Alcove::containing_perturbed(&rs, Point::origin(), Point::new(qi(1), qi(1)), Point::new(qi(1), qi(0)))
            .unwrap();
        assert_eq!(a, Alcove::fundamental(&rs));
    }
}
