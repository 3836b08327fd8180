//! Saturation towards `±∞` and the classification of complexes without chambers.

use serde::{Deserialize, Serialize};

use super::complex::{hull_oracle, lower_value, upper_value, WallComplex};
use super::extend::{extend_vertical, vertical_sites};
use crate::error::{Error, Result};
use crate::rational::Bound;

/// Direction of saturation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Saturation {
    /// Least convex complex containing `C` and an upward ray over every tree point.
    Up,
    /// Least convex complex containing `C` and a downward ray over every tree point.
    Down,
    /// Both of the above: the whole wall space over the window.
    Both,
}

/// Degenerate shapes of convex complexes without chambers, and the generic case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degeneracy {
    PointTree,
    LinearZeroGap,
    ConstantZeroGap,
    FullDimensional,
}

/// Vertical extensions iterated to exhaustion: keeps `f|_S` and `g|_S` and
/// spreads sideways as far as non-degenerate fibers allow.
pub fn sideways_saturation(c: &WallComplex) -> Result<WallComplex> {
    let mut cur = c.clone();
    loop {
        let sites = vertical_sites(&cur);
        if sites.is_empty() {
            return Ok(cur);
        }
        for (v, w) in sites {
            if !cur.in_support(w) {
                let ext = extend_vertical(&cur, v, w)?;
                cur = hull_oracle(&ext.result, &[]);
            }
        }
    }
}

/// Saturates `c` inside its window.
pub fn saturate(c: &WallComplex, direction: Saturation) -> Result<WallComplex> {
    if c.is_empty() {
        return Err(Error::Precondition("cannot saturate the empty complex".into()));
    }
    match direction {
        Saturation::Up => {
            let mut open = c.clone();
            for fib in open.fibers.iter_mut().flatten() {
                fib.1 = Bound::Unbounded;
            }
            sideways_saturation(&hull_oracle(&open, &[]))
        }
        Saturation::Down => Ok(saturate(&c.flipped(), Saturation::Up)?.flipped()),
        Saturation::Both => saturate(&saturate(c, Saturation::Up)?, Saturation::Down),
    }
}

/// Classifies a convex complex by dimension.
pub fn classify_degenerate(c: &WallComplex) -> Result<Degeneracy> {
    if c.is_empty() {
        return Err(Error::Precondition("empty complex".into()));
    }
    if c.has_chamber() {
        return Ok(Degeneracy::FullDimensional);
    }
    let sup = c.support();
    if sup.len() == 1 {
        return Ok(Degeneracy::PointTree);
    }
    let mut zero_gap = true;
    let mut values = Vec::new();
    for &v in &sup {
        let (f, g) = c.fibers[v].expect("support");
        match (lower_value(f), upper_value(g)) {
            (Some(a), Some(b)) if a == b => values.push(a),
            _ => zero_gap = false,
        }
    }
    if zero_gap {
        if values.iter().all(|&x| x == values[0]) {
            return Ok(Degeneracy::ConstantZeroGap);
        }
        let branching = sup.iter().any(|&v| c.tree.adj[v].iter().filter(|(w, _)| c.in_support(*w)).count() > 2);
        if !branching {
            return Ok(Degeneracy::LinearZeroGap);
        }
    }
    Err(Error::Inconsistent("complex without chambers fits none of the degenerate shapes".into()))
}
