//! Disintegration of limit measures over product-indexed systems.

use num_traits::Zero;

use super::models::BiSystem;
use super::system::{CtoMap, CylinderFunction, FinStage, InvSystem};
use crate::error::{Error, Result};
use crate::rational::Q;

/// Evaluates a cylinder function at every element of stage `k`.
fn values_at(sys: &InvSystem, g: &CylinderFunction, k: usize) -> Result<Vec<Q>> {
    let mut vals = vec![Q::zero(); sys.stages[k].len()];
    for (c, cyl) in g {
        if !sys.leq(cyl.index, k) {
            return Err(Error::Precondition(format!(
                "cylinder at {} is not measurable at the available truncation",
                sys.stages[cyl.index].name
            )));
        }
        for x in sys.pull_back(cyl, k)?.subset {
            vals[x] += *c;
        }
    }
    Ok(vals)
}

/// The fiber system over `y` in the top stage of the base row: stages are
/// the preimages of `y` along the last column, with counting measure on `{y}`.
pub fn fiber_system(bi: &BiSystem, y: usize) -> Result<(InvSystem, Vec<Vec<usize>>)> {
    let sys = &bi.system;
    let last = bi.grid[0].len() - 1;
    let column: Vec<usize> = bi.grid.iter().map(|row| row[last]).collect();
    let row_top = column[0];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut stages = Vec::new();
    for &k in &column {
        let f = sys.composite(row_top, k)?;
        let m: Vec<usize> = (0..f.len()).filter(|&x| f[x] == y).collect();
        stages.push(FinStage::new(
            sys.stages[k].name.clone(),
            m.iter().map(|&x| sys.stages[k].elements[x].clone()).collect(),
        ));
        members.push(m);
    }
    let mut maps = Vec::new();
    for a in 1..column.len() {
        let f = sys.composite(column[a - 1], column[a])?;
        let pos: std::collections::HashMap<usize, usize> =
            members[a - 1].iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let map: Vec<usize> = members[a].iter().map(|&x| pos[&f[x]]).collect();
        maps.push(CtoMap::new(a, a - 1, map, members[a - 1].len())?);
    }
    let fs = InvSystem::build(format!("{}/fiber{y}", sys.name), stages, maps, 0)?;
    Ok((fs, members))
}

/// Both sides of the disintegration formula for a cylinder function `g`:
/// the integral against the limit measure of the whole system, and the
/// integral over the base row of the fiber integrals against the fiber
/// measures. The two are computed from independently built systems.
pub fn disintegrate_check(bi: &BiSystem, g: &CylinderFunction) -> Result<(Q, Q)> {
    let sys = &bi.system;
    let top = bi.top();
    let lhs = {
        let vals = values_at(sys, g, top)?;
        vals.iter().fold(Q::zero(), |acc, v| acc + *v) * sys.stages[top].mass
    };
    let row: Vec<usize> = bi.grid[0].clone();
    let row_sys = sys.restrict(&format!("{}/row", sys.name), &row, row[0])?;
    let row_top = row_sys.len() - 1;
    let nu = row_sys.stages[row_top].mass;
    let last = bi.grid[0].len() - 1;
    if bi.grid.len() > 1 {
        let column: Vec<usize> = bi.grid.iter().map(|r| r[last]).collect();
        super::system::fiber_size(sys.composite(column[0], top)?, sys.stages[column[0]].len())
            .map_err(|e| Error::Inconsistent(format!("row limit is not constant-to-one over the base row: {e}")))?;
    }
    let vals = values_at(sys, g, top)?;
    let mut rhs = Q::zero();
    for y in 0..row_sys.stages[row_top].len() {
        let (fs, members) = fiber_system(bi, y)?;
        let fiber_top = fs.len() - 1;
        let lambda = fs.stages[fiber_top].mass;
        let inner = members[fiber_top].iter().fold(Q::zero(), |acc, &x| acc + vals[x]) * lambda;
        rhs += nu * inner;
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prolim::{tree_product, Cylinder};
    use crate::rational::qi;

    #[test]
    fn base_fiber_indicator() {
        let b = tree_product(1, 1, 2, 2).unwrap();
        let g = vec![(qi(1), Cylinder::new(b.grid[0][0], vec![0]))];
        let (l, r) = disintegrate_check(&b, &g).unwrap();
        assert_eq!(l, qi(1));
        assert_eq!(r, qi(1));
    }

    #[test]
    fn fibers_over_a_point_carry_probability_measures() {
        let b = tree_product(2, 1, 2, 1).unwrap();
        let (fs, _) = fiber_system(&b, 3).unwrap();
        assert_eq!(fs.stages[0].len(), 1);
        assert_eq!(fs.stages.last().unwrap().total_mass(), qi(1));
    }
}
