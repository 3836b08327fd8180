//! Extension counts between convex regions of the model apartment.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::factor::{ExtCount, Factor};
use super::link::LinkCount;
use crate::coxeter::{star, vertex_neighbours, Alcove, Point, Region, RootSystem2, Thickness};
use crate::error::{Error, Result};
use crate::rational::Q;

/// Which candidate step the induction takes when several are available.
/// The count does not depend on it; the factorization does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepOrder {
    /// Smallest candidate: crossing walls sorted by root, then level.
    Canonical,
    /// Largest candidate.
    Reversed,
}

fn pick<T: Ord + Clone>(mut cands: Vec<T>, order: StepOrder) -> Option<T> {
    cands.sort();
    match order {
        StepOrder::Canonical => cands.first().cloned(),
        StepOrder::Reversed => cands.last().cloned(),
    }
}

/// Validates and tightens a nested pair of regions.
fn prepare(rs: &RootSystem2, z1: &Region, z2: &Region, th: &Thickness) -> Result<(Region, Region)> {
    if z1.kind != rs.kind || z2.kind != rs.kind || th.kind != rs.kind {
        return Err(Error::Precondition("regions, root system and thickness must share a type".into()));
    }
    Thickness::new(rs, th.q)?;
    let (a, b) = (z1.tighten(rs)?, z2.tighten(rs)?);
    if !a.is_subset(&b) {
        return Err(Error::Precondition("source region is not contained in the target region".into()));
    }
    Ok((a, b))
}

/// Adds to `alcoves` every alcove of `region` reachable through panels.
fn grow(rs: &RootSystem2, alcoves: &mut BTreeSet<Alcove>, region: &Region) {
    let mut stack: Vec<Alcove> = alcoves.iter().copied().collect();
    while let Some(a) = stack.pop() {
        for t in 0..3 {
            let b = a.neighbour(rs, t);
            if region.contains_alcove(rs, &b) && alcoves.insert(b) {
                stack.push(b);
            }
        }
    }
}

/// Whether `w − v` is a positive multiple of `v − x`.
fn straight(x: Point, v: Point, w: Point) -> bool {
    let (a, b) = (v - x, w - v);
    let cross = a.0[0] * b.0[1] - a.0[1] * b.0[0];
    let dot = a.0[0] * b.0[0] + a.0[1] * b.0[1];
    cross == Q::from_integer(0) && dot > Q::from_integer(0)
}

/// Number of extensions of an embedding of `z1` to `z2`, by the
/// canonical induction.
///
/// Once the growing region contains a chamber, each step adds one chamber
/// across a panel of cotype `k` and contributes `q_k`. A region without
/// chambers first grows along segments (link counts at the growing end) and
/// then gains its first chamber on a panel of cotype `k` (`q_k + 1`).
pub fn count_flat(rs: &RootSystem2, z1: &Region, z2: &Region, th: &Thickness) -> Result<ExtCount> {
    count_flat_ordered(rs, z1, z2, th, StepOrder::Canonical)
}

/// [`count_flat`] with an explicit choice among candidate steps.
pub fn count_flat_ordered(
    rs: &RootSystem2,
    z1: &Region,
    z2: &Region,
    th: &Thickness,
    order: StepOrder,
) -> Result<ExtCount> {
    let (mut y, z2) = prepare(rs, z1, z2, th)?;
    let mut factors = Vec::new();
    let mut alcoves: BTreeSet<Alcove> = y.alcoves(rs).into_iter().collect();
    while y.levels != z2.levels {
        if !alcoves.is_empty() {
            let mut cands = Vec::new();
            for a in &alcoves {
                for t in 0..3 {
                    let d = a.neighbour(rs, t);
                    if !alcoves.contains(&d) && z2.contains_alcove(rs, &d) {
                        let wall = a.panel_wall(rs, t);
                        let root = rs.root_index(wall.root).expect("positive root");
                        cands.push((root, wall.level, d, t as u8));
                    }
                }
            }
            let (_, _, d, t) = pick(cands, order)
                .ok_or_else(|| Error::Inconsistent("no chamber of the target borders the source".into()))?;
            factors.push(Factor::Step { cotype: t });
            y = y.join(rs, &d.vertices)?;
            alcoves.insert(d);
            grow(rs, &mut alcoves, &y);
            continue;
        }
        let verts = y.vertices(rs);
        let inside: BTreeSet<Point> = verts.iter().copied().collect();
        let mut raise = Vec::new();
        for &v in &verts {
            for a in star(rs, v) {
                let outside: Vec<usize> = (0..3).filter(|&t| !inside.contains(&a.vertices[t])).collect();
                if outside.len() == 1 && z2.contains_alcove(rs, &a) {
                    raise.push((a, outside[0] as u8));
                }
            }
        }
        if let Some((d, t)) = pick(raise, order) {
            factors.push(Factor::Raise { cotype: t });
            y = y.join(rs, &d.vertices)?;
            alcoves.insert(d);
            grow(rs, &mut alcoves, &y);
            continue;
        }
        // Growth along a segment.
        let mut seg = Vec::new();
        for &v in &verts {
            let tv = rs.vertex_type(v).expect("vertex");
            let nbrs = vertex_neighbours(rs, v);
            let in_y: Vec<Point> = nbrs.iter().copied().filter(|w| inside.contains(w)).collect();
            for &w in nbrs.iter().filter(|w| !inside.contains(w) && z2.contains_point(rs, **w)) {
                let tw = rs.vertex_type(w).expect("vertex");
                match in_y.as_slice() {
                    [] => seg.push((v, w, LinkCount::Elements(tw), tv)),
                    [x] if straight(*x, v, w) => {
                        let tx = rs.vertex_type(*x).expect("vertex");
                        seg.push((v, w, LinkCount::Opposite(tx), tv))
                    }
                    _ => {}
                }
            }
        }
        let (_, w, count, tv) =
            pick(seg, order).ok_or_else(|| Error::Inconsistent("target region does not extend the source".into()))?;
        factors.push(Factor::Link { kind: rs.kind, vertex_type: tv, count });
        y = y.join(rs, &[w])?;
    }
    ExtCount::from_factors(rs.kind, th.q, factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{convex_hull, root_data, Kind};
    use crate::Point;

    fn origin_star_alcove(rs: &RootSystem2) -> Alcove {
        Alcove::fundamental(rs)
    }

    #[test]
    fn one_chamber_across_a_panel_costs_q_of_its_cotype() {
        for k in Kind::ALL {
            let rs = root_data(k);
            let th = Thickness::new(
                &rs,
                if k == Kind::A2 {
                    [2; 3]
                } else if k == Kind::G2 {
                    [2, 2, 3]
                } else {
                    [2, 3, 5]
                },
            );
            let th = th.unwrap();
            let a = origin_star_alcove(&rs);
            let z1 = Region::hull_of_alcoves(&rs, &[a], 6).unwrap();
            for t in 0..3 {
                let d = a.neighbour(&rs, t);
                let z2 = Region::hull_of_alcoves(&rs, &[a, d], 6).unwrap();
                let c = count_flat(&rs, &z1, &z2, &th).unwrap();
                assert_eq!(c.factors, vec![Factor::Step { cotype: t as u8 }]);
                assert_eq!(c.value, th.q[t]);
            }
        }
    }

    #[test]
    fn vertex_to_edge_in_a2_counts_fano_points() {
        let rs = root_data(Kind::A2);
        let v = Point::origin();
        let w = Point::new(Q::from_integer(1), Q::from_integer(0));
        let z1 = convex_hull(&rs, &[v], 6).unwrap();
        let z2 = convex_hull(&rs, &[v, w], 6).unwrap();
        let c = count_flat(&rs, &z1, &z2, &Thickness::uniform(Kind::A2, 2)).unwrap();
        assert_eq!(c.value, 7);
        assert_eq!(c.poly.to_string(), "q0^2 + q0 + 1");
    }

    #[test]
    fn thin_counts_are_one_for_chamber_sources() {
        for k in Kind::ALL {
            let rs = root_data(k);
            let a = Alcove::fundamental(&rs);
            let z1 = Region::hull_of_alcoves(&rs, &[a], 12).unwrap();
            let far = Point::new(Q::from_integer(2), Q::from_integer(1));
            let z2 = z1.join(&rs, &[far]).unwrap();
            let c = count_flat(&rs, &z1, &z2, &Thickness::uniform(k, 1)).unwrap();
            assert_eq!(c.value, 1);
        }
    }

    #[test]
    fn non_nested_pairs_are_rejected() {
        let rs = root_data(Kind::B2);
        let a = Alcove::fundamental(&rs);
        let z1 = Region::hull_of_alcoves(&rs, &[a], 6).unwrap();
        let z2 = Region::hull_of_alcoves(&rs, &[a.neighbour(&rs, 0)], 6).unwrap();
        assert!(matches!(count_flat(&rs, &z1, &z2, &Thickness::uniform(Kind::B2, 2)), Err(Error::Precondition(_))));
    }
}
