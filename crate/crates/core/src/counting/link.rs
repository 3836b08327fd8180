//! Counts in vertex links.
//!
//! The link of a vertex of type `t` is a generalized `m`-gon whose elements
//! are the neighbouring vertices of the two other types `a`, `b`. An element
//! of type `a` lies on `q_b + 1` link chambers (the chambers through the
//! panel `{t, a}`, of cotype `b`). All counts follow from the distance layers
//! around a fixed element: `n_0 = 1`, `n_d = n_{d-1}·(deg_{d-1} − 1)` for
//! `d < m`, and `n_m·deg_m = n_{m-1}·(deg_{m-1} − 1)`.

use serde::{Deserialize, Serialize};

use crate::coxeter::{coxeter_order, RootSystem2, Thickness};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::Kind;

/// A quantity in the link of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinkCount {
    /// Neighbouring vertices of the given type.
    Elements(u8),
    /// Neighbouring vertices opposite (in the link) a fixed neighbour of the given type.
    Opposite(u8),
    /// Chambers containing the vertex.
    Chambers,
}

/// Evaluated link counts at one vertex type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkTable {
    pub kind: Kind,
    pub vertex_type: u8,
    /// The two neighbouring vertex types, ascending.
    pub link_types: [u8; 2],
    pub gonality: usize,
    /// `degrees[k]`: chambers through the panel spanned by the vertex and a
    /// neighbour of type `link_types[k]`.
    pub degrees: [u64; 2],
    /// `elements[k]`: neighbours of type `link_types[k]`.
    pub elements: [u64; 2],
    /// `opposite[k]`: neighbours opposite a fixed neighbour of type `link_types[k]`.
    pub opposite: [u64; 2],
    pub chambers: u64,
}

/// The two vertex types other than `t`, ascending.
pub fn link_types(t: u8) -> [u8; 2] {
    match t {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

/// Gonality of the link of a type-`t` vertex.
pub fn link_gonality(rs: &RootSystem2, t: u8) -> usize {
    let [a, b] = link_types(t);
    coxeter_order(rs, a as usize, b as usize) as usize
}

fn check_type(t: u8, what: &str) -> Result<()> {
    if t > 2 {
        return Err(Error::Precondition(format!("{what} {t} is not a vertex type")));
    }
    Ok(())
}

/// Distance layers around a fixed neighbour of type `a` in the link of a type-`t` vertex.
fn layers(rs: &RootSystem2, t: u8, a: u8) -> Vec<Poly> {
    let [x, y] = link_types(t);
    let b = if a == x { y } else { x };
    let m = link_gonality(rs, t);
    let type_at = |d: usize| if d.is_multiple_of(2) { a } else { b };
    let other = |c: u8| if c == a { b } else { a };
    // An element of type c has degree q_{other(c)} + 1.
    let degree = |c: u8| Poly::var_plus(other(c) as usize, 1);
    let reduced = |c: u8| Poly::var(other(c) as usize);
    let mut out = vec![Poly::one()];
    let mut tail = Poly::one();
    for d in 1..m {
        if d > 1 {
            tail = &tail * &reduced(type_at(d - 1));
        }
        out.push(&degree(a) * &tail);
    }
    // Opposite layer: divide the full product by deg(type_at(m)), which equals
    // deg(a) up to the thickness identities of the link.
    out.push(&tail * &reduced(type_at(m - 1)));
    out
}

/// Symbolic link count in `q0, q1, q2`.
pub fn link_poly(rs: &RootSystem2, t: u8, count: LinkCount) -> Result<Poly> {
    check_type(t, "vertex type")?;
    let lt = link_types(t);
    let member = |c: u8| -> Result<()> {
        if lt.contains(&c) {
            Ok(())
        } else {
            Err(Error::Precondition(format!("type {c} does not occur in the link of a type-{t} vertex")))
        }
    };
    Ok(match count {
        LinkCount::Elements(c) => {
            member(c)?;
            layers(rs, t, c).into_iter().step_by(2).fold(Poly::zero(), |acc, p| acc + p)
        }
        LinkCount::Opposite(c) => {
            member(c)?;
            layers(rs, t, c).pop().expect("nonempty layers")
        }
        LinkCount::Chambers => {
            let [a, b] = lt;
            &link_poly(rs, t, LinkCount::Elements(a))? * &Poly::var_plus(b as usize, 1)
        }
    })
}

/// Evaluates a link count at a thickness.
pub fn link_value(rs: &RootSystem2, t: u8, count: LinkCount, th: &Thickness) -> Result<u64> {
    let v = link_poly(rs, t, count)?.eval(th.q);
    u64::try_from(v).map_err(|_| Error::Inconsistent(format!("link count {v} out of range")))
}

/// The full table of link counts at a vertex type.
pub fn link_counts(rs: &RootSystem2, t: u8, th: &Thickness) -> Result<LinkTable> {
    check_type(t, "vertex type")?;
    let lt = link_types(t);
    let ev = |c| link_value(rs, t, c, th);
    Ok(LinkTable {
        kind: rs.kind,
        vertex_type: t,
        link_types: lt,
        gonality: link_gonality(rs, t),
        degrees: [th.q[lt[1] as usize] + 1, th.q[lt[0] as usize] + 1],
        elements: [ev(LinkCount::Elements(lt[0]))?, ev(LinkCount::Elements(lt[1]))?],
        opposite: [ev(LinkCount::Opposite(lt[0]))?, ev(LinkCount::Opposite(lt[1]))?],
        chambers: ev(LinkCount::Chambers)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::root_data;
    use crate::polygon::GeneralizedPolygon;

    /// Counts read off a polygon: (points, lines, opposite a point, opposite a line, flags).
    fn enumerate(p: &GeneralizedPolygon) -> [u64; 5] {
        let line0 = p.line(0);
        [
            p.points as u64,
            p.lines as u64,
            (0..p.len()).filter(|&y| p.opposite(0, y)).count() as u64,
            (0..p.len()).filter(|&y| p.opposite(line0, y)).count() as u64,
            p.flags().len() as u64,
        ]
    }

    fn table_row(t: &LinkTable) -> [u64; 5] {
        [t.elements[0], t.elements[1], t.opposite[0], t.opposite[1], t.chambers]
    }

    #[test]
    fn thin_links_are_ordinary_polygons() {
        for k in Kind::ALL {
            let rs = root_data(k);
            for t in 0..3 {
                let tab = link_counts(&rs, t, &Thickness::uniform(k, 1)).unwrap();
                let poly = GeneralizedPolygon::thin(tab.gonality).unwrap();
                assert_eq!(table_row(&tab), enumerate(&poly), "{k} type {t}");
            }
        }
    }

    #[test]
    fn fano_link_in_a2() {
        let rs = root_data(Kind::A2);
        let tab = link_counts(&rs, 0, &Thickness::uniform(Kind::A2, 2)).unwrap();
        assert_eq!(table_row(&tab), enumerate(&GeneralizedPolygon::fano()));
        assert_eq!(tab.elements[0], 7);
        assert_eq!(tab.opposite[0], 4);
        assert_eq!(
            link_poly(&rs, 0, LinkCount::Elements(1)).unwrap().identify(1, 0).identify(2, 0).to_string(),
            "q0^2 + q0 + 1"
        );
    }

    #[test]
    fn symplectic_link_at_special_vertices() {
        for (k, t) in [(Kind::B2, 0), (Kind::B2, 2), (Kind::C2, 0), (Kind::C2, 1)] {
            let rs = root_data(k);
            let tab = link_counts(&rs, t, &Thickness::uniform(k, 2)).unwrap();
            assert_eq!(tab.gonality, 4);
            assert_eq!(table_row(&tab), enumerate(&GeneralizedPolygon::w2()), "{k} type {t}");
            assert_eq!(tab.opposite, [8, 8]);
        }
    }

    #[test]
    fn foreign_types_are_rejected() {
        let rs = root_data(Kind::G2);
        assert!(link_poly(&rs, 0, LinkCount::Elements(0)).is_err());
        assert!(link_poly(&rs, 3, LinkCount::Chambers).is_err());
    }
}
