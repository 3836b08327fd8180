//! Symbolic fiber sizes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::link::{link_poly, LinkCount};
use crate::coxeter::{panel_classes, root_data};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::Kind;

/// One factor of an extension count, recording the step that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    /// `q_k`: a new chamber across a panel of cotype `k` next to existing chambers.
    Step { cotype: u8 },
    /// `q_k + 1`: the first chamber on a panel of cotype `k` of a lower-dimensional complex.
    Raise { cotype: u8 },
    /// `q_k + 1 − ℓ`: a chamber on a vertical panel of cotype `k` already
    /// lying in `ℓ` chambers of the complex.
    Vertical { cotype: u8, present: u32 },
    /// A link count at a vertex of the given type.
    Link { kind: Kind, vertex_type: u8, count: LinkCount },
    /// A model-specific integer factor.
    Constant(u64),
}

impl Factor {
    /// The factor as a polynomial in `q0, q1, q2`.
    pub fn poly(&self) -> Poly {
        match *self {
            Factor::Step { cotype } => Poly::var(cotype as usize),
            Factor::Raise { cotype } => Poly::var_plus(cotype as usize, 1),
            Factor::Vertical { cotype, present } => Poly::var_plus(cotype as usize, 1 - i64::from(present)),
            Factor::Link { kind, vertex_type, count } => {
                link_poly(&root_data(kind), vertex_type, count).expect("validated link factor")
            }
            Factor::Constant(c) => Poly::constant(c as i64),
        }
    }

    /// Evaluates at `(q0, q1, q2)`.
    pub fn eval(&self, q: [u64; 3]) -> Result<u64> {
        let v = self.poly().eval(q);
        u64::try_from(v).map_err(|_| Error::Inconsistent(format!("factor {self} evaluates to {v}")))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::Step { cotype } => write!(f, "q{cotype}"),
            Factor::Raise { cotype } => write!(f, "(q{cotype}+1)"),
            Factor::Vertical { cotype, present } => write!(f, "(q{cotype}+1-{present})"),
            Factor::Link { kind, vertex_type, count } => {
                let what = match count {
                    LinkCount::Elements(c) => format!("type{c}"),
                    LinkCount::Opposite(c) => format!("opp{c}"),
                    LinkCount::Chambers => "chambers".to_string(),
                };
                write!(f, "[link:{kind}@{vertex_type},{what}]")
            }
            Factor::Constant(c) => write!(f, "{c}"),
        }
    }
}

fn parse_cotype(s: &str) -> Result<u8> {
    let t: u8 =
        s.strip_prefix('q').and_then(|x| x.parse().ok()).ok_or_else(|| Error::Parse(format!("bad parameter {s:?}")))?;
    if t > 2 {
        return Err(Error::Parse(format!("bad parameter {s:?}")));
    }
    Ok(t)
}

impl FromStr for Factor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Factor> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad factor {s:?}"));
        if let Some(body) = s.strip_prefix("[link:").and_then(|x| x.strip_suffix(']')) {
            let (head, what) = body.split_once(',').ok_or_else(bad)?;
            let (kind, t) = head.split_once('@').ok_or_else(bad)?;
            let kind: Kind = kind.parse()?;
            let vertex_type: u8 = t.parse().map_err(|_| bad())?;
            let count = if what == "chambers" {
                LinkCount::Chambers
            } else if let Some(c) = what.strip_prefix("type") {
                LinkCount::Elements(c.parse().map_err(|_| bad())?)
            } else if let Some(c) = what.strip_prefix("opp") {
                LinkCount::Opposite(c.parse().map_err(|_| bad())?)
            } else {
                return Err(bad());
            };
            link_poly(&root_data(kind), vertex_type, count)?;
            return Ok(Factor::Link { kind, vertex_type, count });
        }
        if let Some(body) = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
            let mut parts = body.split(['+', '-']);
            let q = parts.next().ok_or_else(bad)?;
            let cotype = parse_cotype(q)?;
            if parts.next() != Some("1") {
                return Err(bad());
            }
            return match parts.next() {
                None if body.ends_with("+1") => Ok(Factor::Raise { cotype }),
                Some(l) if parts.next().is_none() && body.contains("+1-") => {
                    Ok(Factor::Vertical { cotype, present: l.parse().map_err(|_| bad())? })
                }
                _ => Err(bad()),
            };
        }
        if s.starts_with('q') {
            return Ok(Factor::Step { cotype: parse_cotype(s)? });
        }
        s.parse().map(Factor::Constant).map_err(|_| bad())
    }
}

/// An extension count: value, factorization and normalized polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtCount {
    pub kind: Kind,
    /// The thickness the value was evaluated at.
    pub q: [u64; 3],
    pub value: u64,
    pub factors: Vec<Factor>,
    /// Product of the factors, with conjugate parameters identified
    /// (each `q_t` replaced by the smallest index in its class).
    pub poly: Poly,
}

/// Identifies conjugate thickness parameters.
pub fn normalize(kind: Kind, p: &Poly) -> Poly {
    let mut out = p.clone();
    for class in panel_classes(&root_data(kind)) {
        for &t in &class[1..] {
            out = out.identify(t, class[0]);
        }
    }
    out
}

impl ExtCount {
    /// Builds the count from factors, evaluating at `q`.
    pub fn from_factors(kind: Kind, q: [u64; 3], factors: Vec<Factor>) -> Result<ExtCount> {
        let mut value: u64 = 1;
        let mut poly = Poly::one();
        for f in &factors {
            value = value
                .checked_mul(f.eval(q)?)
                .ok_or_else(|| Error::Unsupported("extension count exceeds 64 bits".into()))?;
            poly = &poly * &f.poly();
        }
        Ok(ExtCount { kind, q, value, factors, poly: normalize(kind, &poly) })
    }

    /// The factorization string, e.g. `q1 * (q2+1) * [link:A2@0,type1]`; `1` if empty.
    pub fn factorization(&self) -> String {
        if self.factors.is_empty() {
            "1".to_string()
        } else {
            self.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" * ")
        }
    }

    /// Parses a factorization string.
    pub fn parse_factorization(s: &str) -> Result<Vec<Factor>> {
        if s.trim() == "1" {
            return Ok(Vec::new());
        }
        s.split(" * ").map(str::parse).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_strings_round_trip() {
        let fs = [
            Factor::Step { cotype: 1 },
            Factor::Raise { cotype: 2 },
            Factor::Vertical { cotype: 0, present: 2 },
            Factor::Link { kind: Kind::A2, vertex_type: 0, count: LinkCount::Elements(1) },
            Factor::Link { kind: Kind::B2, vertex_type: 0, count: LinkCount::Opposite(2) },
            Factor::Link { kind: Kind::G2, vertex_type: 1, count: LinkCount::Chambers },
            Factor::Constant(5),
        ];
        for f in fs {
            assert_eq!(f.to_string().parse::<Factor>().unwrap(), f, "{f}");
        }
        let c = ExtCount::from_factors(Kind::A2, [2, 2, 2], fs[..4].to_vec()).unwrap();
        assert_eq!(c.factorization(), "q1 * (q2+1) * (q0+1-2) * [link:A2@0,type1]");
        assert_eq!(ExtCount::parse_factorization(&c.factorization()).unwrap(), fs[..4].to_vec());
        assert_eq!(c.value, 2 * 3 * 7);
    }

    #[test]
    fn malformed_factors_are_rejected() {
        for s in ["q3", "(q1+2)", "(q1+1-)", "[link:A2@0,type0]", "[link:X@0,type1]", "x"] {
            assert!(s.parse::<Factor>().is_err(), "{s}");
        }
    }
}
