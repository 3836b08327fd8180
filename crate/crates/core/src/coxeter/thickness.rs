//! Thickness parameters of a rank-2 Euclidean building.

use serde::{Deserialize, Serialize};

use super::{eval_root, Kind, RootCoeffs, RootSystem2};
use crate::error::{Error, Result};

/// Panel thicknesses: `q[t] + 1` chambers contain each panel of cotype `t`
/// (the panel missing the vertex of type `t`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Thickness {
    pub kind: Kind,
    pub q: [u64; 3],
}

/// The reflection of the fundamental alcove across the panel of cotype `t`.
pub(crate) fn panel_root(rs: &RootSystem2, t: usize) -> RootCoeffs {
    match t {
        0 => rs.highest_root,
        1 => [0, 1],
        _ => [1, 0],
    }
}

/// Order of the product of the reflections across panels `a` and `b`.
pub(crate) fn coxeter_order(rs: &RootSystem2, a: usize, b: usize) -> u32 {
    let (ra, rb) = (panel_root(rs, a), panel_root(rs, b));
    let p = eval_root(ra, rs.coroot_of(rb)) * eval_root(rb, rs.coroot_of(ra));
    match p.to_integer() {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        _ => unreachable!("crystallographic rank-2 pairing"),
    }
}

/// Partition of panel cotypes into conjugacy classes of the affine Weyl
/// group: two cotypes are conjugate iff joined by a path of odd orders.
pub fn panel_classes(rs: &RootSystem2) -> Vec<Vec<usize>> {
    let mut parent = [0usize, 1, 2];
    fn find(p: &mut [usize; 3], x: usize) -> usize {
        if p[x] == x {
            x
        } else {
            let r = find(p, p[x]);
            p[x] = r;
            r
        }
    }
    for a in 0..3 {
        for b in a + 1..3 {
            if coxeter_order(rs, a, b) % 2 == 1 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for t in 0..3 {
        let r = find(&mut parent, t);
        match classes.iter_mut().find(|c| find(&mut parent.clone(), c[0]) == r) {
            Some(c) => c.push(t),
            None => classes.push(vec![t]),
        }
    }
    classes
}

impl Thickness {
    /// Validates `(q0, q1, q2)` against the conjugacy classes of panels.
    pub fn new(rs: &RootSystem2, q: [u64; 3]) -> Result<Thickness> {
        if q.contains(&0) {
            return Err(Error::Precondition("thickness parameters must be at least 1".into()));
        }
        for class in panel_classes(rs) {
            if class.iter().any(|&t| q[t] != q[class[0]]) {
                return Err(Error::Precondition(format!(
                    "{}: cotypes {class:?} are conjugate and need equal thickness, got {q:?}",
                    rs.kind
                )));
            }
        }
        Ok(Thickness { kind: rs.kind, q })
    }

    /// Uniform thickness `q` on all panels.
    pub fn uniform(kind: Kind, q: u64) -> Thickness {
        Thickness { kind, q: [q; 3] }
    }

    /// `q_t`.
    pub fn at(&self, t: usize) -> u64 {
        self.q[t]
    }

    /// Whether every panel has exactly two chambers.
    pub fn is_thin(&self) -> bool {
        self.q == [1, 1, 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::root_data;

    #[test]
    fn classes_per_kind() {
        assert_eq!(panel_classes(&root_data(Kind::A2)), vec![vec![0, 1, 2]]);
        assert_eq!(panel_classes(&root_data(Kind::B2)), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(panel_classes(&root_data(Kind::C2)), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(panel_classes(&root_data(Kind::G2)), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn validation() {
        let a = root_data(Kind::A2);
        assert!(Thickness::new(&a, [2, 2, 2]).is_ok());
        assert!(Thickness::new(&a, [2, 3, 2]).is_err());
        let g = root_data(Kind::G2);
        assert!(Thickness::new(&g, [2, 2, 3]).is_ok());
        assert!(Thickness::new(&g, [2, 3, 2]).is_err());
        let b = root_data(Kind::B2);
        assert!(Thickness::new(&b, [2, 3, 4]).is_ok());
        assert!(Thickness::new(&b, [0, 3, 4]).is_err());
    }
}
