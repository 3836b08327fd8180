//! Chambers at infinity opposite a vertex at infinity.
//!
//! Chambers opposite a vertex `ζ` at infinity decompose into a vertex
//! opposite `ζ` and a chamber of the residue of `ζ`. Seen from a special
//! vertex `o` with the geodesic ray from `o` to `ζ` pinned, the embeddings
//! of the half-strips `R_{a,b} = {0 ≤ α_j ≤ b, α_i ≤ a}` form a system
//! indexed by a product of two chains: increasing `a` continues the line
//! through `o` beyond `o` (the opposite-vertex direction), increasing `b`
//! adds a row of chambers along that line (a path in the panel tree of
//! `ζ`). The system is presented as the product of these two directions,
//! with fiber sizes taken from extension counts of geodesic segments and
//! from panel thicknesses along the parallel walls.
//!
//! The finite shadow of the decomposition in a generalized polygon is
//! checked exactly: perspectivities identify the flags through a vertex
//! opposite `ζ` with the residue of `ζ`.

use serde::{Deserialize, Serialize};

use super::projectivity::perspectivity;
use crate::counting::count_flat;
use crate::coxeter::{convex_hull, eval_root, Alcove, Point, RootSystem2, Thickness, Wall};
use crate::error::{Error, Result};
use crate::polygon::GeneralizedPolygon;
use crate::prolim::{check_capacity, induced, BiSystem, FinStage, InvSystem};
use crate::rational::{q, qi, Q};

/// Name of the half-strip index `R_{a,b}`.
pub fn strip_name(a: usize, b: usize) -> String {
    format!("R[{a},{b}]")
}

/// Vertices of the model apartment on the line through the origin in the
/// direction of the fundamental weight `ω_i`, in order: the last vertex
/// before the origin, the origin, and the next `ahead` vertices.
pub fn line_vertices(rs: &RootSystem2, i: u8, ahead: usize) -> Vec<Point> {
    let [c1, c2] = rs.highest_root;
    let d = num_integer::lcm(c1, c2) * 6;
    let w = rs.weight(i);
    let on_line = |n: i64| -> Option<Point> {
        let p = w.scale(q(n, d));
        rs.vertex_type(p).map(|_| p)
    };
    let behind = (1..).map(|n| on_line(-n)).find_map(|p| p).expect("lattice line");
    let mut out = vec![behind, Point::origin()];
    let mut n = 1;
    while out.len() < ahead + 2 {
        if let Some(p) = on_line(n) {
            out.push(p);
        }
        n += 1;
    }
    out
}

/// Numbers of continuations of the pinned line beyond the origin, one per
/// step: the extension counts of the segment `[t₋₁, t_{k-1}]` to
/// `[t₋₁, t_k]`.
pub fn line_continuations(rs: &RootSystem2, i: u8, th: &Thickness, steps: usize, window: i64) -> Result<Vec<u64>> {
    let pts = line_vertices(rs, i, steps);
    (1..=steps)
        .map(|k| {
            let z1 = convex_hull(rs, &[pts[0], pts[k]], window)?;
            let z2 = convex_hull(rs, &[pts[0], pts[k + 1]], window)?;
            Ok(count_flat(rs, &z1, &z2, th)?.value)
        })
        .collect()
}

/// Degrees of the panel tree at the walls `α_j = 0, 1, …, rows - 1` parallel
/// to the line: the thickness plus one of the panels on each wall.
pub fn panel_tree_degrees(rs: &RootSystem2, i: u8, th: &Thickness, rows: usize) -> Result<Vec<u64>> {
    let root = if i == 1 { [0, 1] } else { [1, 0] };
    (0..rows as i64)
        .map(|k| {
            // A generic point just above the wall α_j = k.
            let along = rs.weight(i).scale(q(-7, 13));
            let up = rs.weight(3 - i).scale(qi(k) + q(1, 97));
            let a = Alcove::containing(rs, along + up)?;
            let wall = Wall { root, level: k };
            let t = (0..3)
                .find(|&t| a.panel_wall(rs, t) == wall)
                .ok_or_else(|| Error::Inconsistent(format!("no panel of wall {wall:?} at the probe alcove")))?;
            debug_assert_eq!(eval_root(root, along + up).floor(), qi(k));
            Ok(th.at(t) + 1)
        })
        .collect()
}

/// The half-strip system with `0 ≤ a ≤ amax`, `0 ≤ b ≤ bmax`, as a
/// bisystem whose base row (`b = 0`) is the line direction.
pub fn opp_bisystem(
    rs: &RootSystem2,
    i: u8,
    th: &Thickness,
    amax: usize,
    bmax: usize,
    window: i64,
) -> Result<BiSystem> {
    if i != 1 && i != 2 {
        return Err(Error::Precondition("the vertex at infinity must have type 1 or 2".into()));
    }
    let line = line_continuations(rs, i, th, amax, window)?;
    let degrees = panel_tree_degrees(rs, i, th, bmax)?;
    // Choices at each row: all neighbours at the first wall, then all but
    // the one we came from.
    let rows: Vec<u64> = (0..bmax).map(|k| if k == 0 { degrees[0] } else { degrees[k] - 1 }).collect();
    let size = |counts: &[u64]| counts.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c as usize));
    let total = size(&line).and_then(|x| size(&rows).and_then(|y| x.checked_mul(y))).unwrap_or(usize::MAX);
    let name = format!("opp({},{i},{amax},{bmax})", rs.kind);
    check_capacity(&name, total)?;
    let choices = |counts: &[u64]| -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for &c in counts {
            out = out
                .into_iter()
                .flat_map(|e: Vec<u32>| {
                    (0..c as u32).map(move |x| {
                        let mut f = e.clone();
                        f.push(x);
                        f
                    })
                })
                .collect();
        }
        out
    };
    let mut stages = Vec::new();
    let mut grid = vec![vec![0usize; amax + 1]; bmax + 1];
    for b in 0..=bmax {
        let tree = choices(&rows[..b]);
        for a in 0..=amax {
            let ahead = choices(&line[..a]);
            let mut elements = Vec::with_capacity(ahead.len() * tree.len());
            for x in &ahead {
                for y in &tree {
                    let mut e = x.clone();
                    e.extend_from_slice(y);
                    elements.push(e);
                }
            }
            grid[b][a] = stages.len();
            stages.push(FinStage::new(strip_name(a, b), elements));
        }
    }
    let mut maps = Vec::new();
    for b in 0..=bmax {
        for a in 0..=amax {
            if a > 0 {
                maps.push(induced(&stages, grid[b][a], grid[b][a - 1], |e| [&e[..a - 1], &e[a..]].concat())?);
            }
            if b > 0 {
                maps.push(induced(&stages, grid[b][a], grid[b - 1][a], |e| e[..e.len() - 1].to_vec())?);
            }
        }
    }
    let system = InvSystem::build(name, stages, maps, grid[0][0])?;
    BiSystem::new(system, grid)
}

/// Finite shadow of the opposite-chamber decomposition in a generalized
/// polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OppDecomposition {
    /// Elements opposite `ζ`.
    pub opposite: usize,
    /// Elements incident with `ζ`.
    pub residue: usize,
    /// Flags whose element of the opposite type is opposite `ζ`.
    pub chambers: usize,
    /// Whether `(ξ, η) ↦ (ξ, perspectivity_{ζ→ξ}(η))` is a bijection onto
    /// those flags, inverted by projecting back to the residue of `ζ`.
    pub bijective: bool,
}

/// Checks the decomposition of the flags opposite `zeta`.
pub fn opp_decomposition(poly: &GeneralizedPolygon, zeta: usize) -> Result<OppDecomposition> {
    if zeta >= poly.len() {
        return Err(Error::Precondition(format!("element {zeta} is out of range")));
    }
    let opposite: Vec<usize> = (0..poly.len()).filter(|&x| poly.opposite(zeta, x)).collect();
    let residue = poly.neighbours(zeta);
    let mut chambers: Vec<(usize, usize)> = Vec::new();
    for &xi in &opposite {
        for y in poly.neighbours(xi) {
            chambers.push((xi, y));
        }
    }
    let mut images = Vec::new();
    let mut inverse_ok = true;
    for &xi in &opposite {
        let p = perspectivity(poly, zeta, xi)?;
        for &eta in &residue {
            let img = p.apply(eta).ok_or_else(|| Error::Inconsistent("perspectivity undefined".into()))?;
            images.push((xi, img));
            inverse_ok &= poly.projection(zeta, img) == Some(eta);
        }
    }
    let mut sorted_images = images.clone();
    sorted_images.sort_unstable();
    sorted_images.dedup();
    chambers.sort_unstable();
    Ok(OppDecomposition {
        opposite: opposite.len(),
        residue: residue.len(),
        chambers: chambers.len(),
        bijective: inverse_ok && sorted_images.len() == images.len() && sorted_images == chambers,
    })
}

/// Exactness of the disintegration over the half-strip system: both sides
/// for a cylinder function, computed by [`crate::prolim::disintegrate_check`].
pub fn opp_disintegration_check(bi: &BiSystem, g: &crate::prolim::CylinderFunction) -> Result<(Q, Q)> {
    crate::prolim::disintegrate_check(bi, g)
}
