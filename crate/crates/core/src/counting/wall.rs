//! Extension counts between convex complexes of a wall space.

use serde::{Deserialize, Serialize};

use super::brute::TreeModel;
use super::factor::{ExtCount, Factor};
use crate::coxeter::{root_data, Thickness};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::treeconv::{
    elementary_extensions, hull_oracle, lower_value, upper_value, ExtensionKind, WallComplex, YChamber,
};

/// The target an extension count refers to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WallModel {
    /// A Euclidean building with the given thickness.
    Building(Thickness),
    /// A wall space over a finite tree with prescribed degrees, whose
    /// automorphisms are tree isometries combined with height translations.
    Tree(TreeModel),
}

/// What one link of an extension chain does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WallStepKind {
    /// A chamber below or above an admissible component, next to existing chambers.
    Along,
    /// A chamber across a vertical panel over a coarse vertex.
    Vertical { vertex: usize, present: u32 },
    /// The first chamber of a complex without chambers, on a non-vertical panel.
    Raise,
}

/// One step of an extension chain: the added chamber and the cotype of the
/// panel it is attached along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WallStep {
    pub kind: WallStepKind,
    pub cotype: u8,
    pub chamber: YChamber,
}

fn bounded(c: &WallComplex) -> bool {
    c.fibers.iter().flatten().all(|&(f, g)| lower_value(f).is_some() && upper_value(g).is_some())
}

/// Vertex types of the chamber not contained in the complex.
fn outside_types(y: &WallComplex, c: &YChamber) -> Vec<u8> {
    (0..3).filter(|&t| !y.contains_point(c.edge, c.tri[t].0, c.tri[t].1)).map(|t| t as u8).collect()
}

/// Chambers of `y` containing the vertical panel with the given heights over
/// coarse vertex `v`.
fn chambers_on_vertical_panel(y: &WallComplex, v: usize, heights: (Q, Q)) -> u32 {
    let tree = &y.tree;
    let ss = y.slopes();
    let (lo, hi) = (heights.0.min(heights.1), heights.0.max(heights.1));
    let mut count = 0;
    for (e, edge) in tree.edges.iter().enumerate() {
        if !edge.ends.contains(&v) {
            continue;
        }
        let ov = tree.offset_on(v, e);
        for tri in ss.strip_alcoves(lo - ss.period, hi + ss.period) {
            let on: Vec<Q> = tri.iter().filter(|p| p.0 == ov).map(|p| p.1).collect();
            if on.len() == 2 && on.contains(&lo) && on.contains(&hi) && y.contains_chamber(&YChamber { edge: e, tri }) {
                count += 1;
            }
        }
    }
    count
}

/// The canonical chain of elementary extensions from `z1` to `z2`.
///
/// While the complex has chambers, the first elementary extension that stays
/// inside `z2` is taken (lower components, upper components, vertical
/// panels). A complex without chambers first gains one chamber of `z2`
/// attached along one of its edges.
pub fn wall_chain(z1: &WallComplex, z2: &WallComplex) -> Result<Vec<WallStep>> {
    if z1.tree != z2.tree {
        return Err(Error::Precondition("complexes live on different trees".into()));
    }
    if z1.is_empty() {
        return Err(Error::Precondition("source complex is empty".into()));
    }
    if !z1.is_subset(z2) {
        return Err(Error::Precondition("source complex is not contained in the target".into()));
    }
    if !bounded(z2) {
        return Err(Error::Precondition("target complex is unbounded, so the pair is not cofinite".into()));
    }
    let mut y = z1.clone();
    let mut steps = Vec::new();
    while y != *z2 {
        if y.has_chamber() {
            let ext = elementary_extensions(&y)?.into_iter().find(|e| e.result.is_subset(z2)).ok_or_else(|| {
                Error::Precondition(format!("no elementary extension stays inside the target; stuck at {:?}", y.fibers))
            })?;
            let out = outside_types(&y, &ext.chamber);
            if out.len() != 1 {
                return Err(Error::Inconsistent("extension chamber is not attached along a panel".into()));
            }
            let kind = match ext.kind {
                ExtensionKind::Along { .. } => WallStepKind::Along,
                ExtensionKind::Vertical { vertex, .. } => {
                    let panel: Vec<Q> = (0..3).filter(|&t| t as u8 != out[0]).map(|t| ext.chamber.tri[t].1).collect();
                    let present = chambers_on_vertical_panel(&y, vertex, (panel[0], panel[1]));
                    WallStepKind::Vertical { vertex, present }
                }
            };
            steps.push(WallStep { kind, cotype: out[0], chamber: ext.chamber });
            y = ext.result;
            continue;
        }
        let mut raise = None;
        for c in z2.chambers()? {
            let out = outside_types(&y, &c);
            if out.len() == 1 {
                raise = Some((c, out[0]));
                break;
            }
        }
        let (c, t) = raise.ok_or_else(|| {
            Error::Unsupported(
                "the source has no edge on a chamber of the target (a point, or a one-dimensional target); \
                 such pairs lie in one apartment and are counted there"
                    .into(),
            )
        })?;
        let panel: Vec<(Q, Q)> = (0..3).filter(|&k| k as u8 != t).map(|k| c.tri[k]).collect();
        let kind = if panel[0].0 == panel[1].0 {
            let v = y.tree.vertex_at(c.edge, panel[0].0).expect("panel vertex");
            if y.tree.is_coarse(v) {
                WallStepKind::Vertical { vertex: v, present: 0 }
            } else {
                WallStepKind::Raise
            }
        } else {
            WallStepKind::Raise
        };
        steps.push(WallStep { kind, cotype: t, chamber: c });
        y = hull_oracle(&y, &[c]);
    }
    Ok(steps)
}

/// Number of extensions of an embedding of `z1` into the model to `z2`.
///
/// Building: `q_k` per step along a component, `q_k + 1 − ℓ` per vertical
/// step (`ℓ` chambers already on the panel), `q_k + 1` for the first chamber
/// on a non-vertical panel. Tree model: only vertical steps branch, with
/// `deg − ℓ` choices.
pub fn count_wall(z1: &WallComplex, z2: &WallComplex, model: &WallModel) -> Result<ExtCount> {
    let kind = z1.tree.kind;
    let steps = wall_chain(z1, z2)?;
    match model {
        WallModel::Building(th) => {
            if th.kind != kind {
                return Err(Error::Precondition("thickness type differs from the wall space type".into()));
            }
            Thickness::new(&root_data(kind), th.q)?;
            let factors = steps
                .iter()
                .map(|s| match s.kind {
                    WallStepKind::Along => Factor::Step { cotype: s.cotype },
                    WallStepKind::Raise => Factor::Raise { cotype: s.cotype },
                    WallStepKind::Vertical { present, .. } => Factor::Vertical { cotype: s.cotype, present },
                })
                .collect();
            ExtCount::from_factors(kind, th.q, factors)
        }
        WallModel::Tree(tm) => {
            let mut factors = Vec::new();
            for s in &steps {
                if let WallStepKind::Vertical { vertex, present } = s.kind {
                    let c = z1.tree.vertices[vertex].coarse.expect("coarse vertex");
                    let deg = tm.degrees[z1.tree.coarse[c].parity as usize];
                    let free = deg.checked_sub(u64::from(present)).ok_or_else(|| {
                        Error::ModelTooSmall(format!("degree {deg} below {present} occupied branches"))
                    })?;
                    factors.push(Factor::Constant(free));
                }
            }
            ExtCount::from_factors(kind, [1, 1, 1], factors)
        }
    }
}
