//! Exact rationals, one-sided bounds and their `"p/q"` string encoding.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number used for all coordinates, heights and masses.
pub type Q = Ratio<i64>;

/// Builds the rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Builds the integer rational `n`.
pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Largest integer not exceeding `x`.
pub fn floor(x: Q) -> i64 {
    x.numer().div_floor(x.denom())
}

/// Least integer not below `x`.
pub fn ceil(x: Q) -> i64 {
    -Integer::div_floor(&(-*x.numer()), x.denom())
}

/// Largest multiple of `step` (a positive rational) not exceeding `x`.
pub fn floor_to(x: Q, step: Q) -> Q {
    step * qi(floor(x / step))
}

/// Least multiple of `step` (a positive rational) not below `x`.
pub fn ceil_to(x: Q, step: Q) -> Q {
    step * qi(ceil(x / step))
}

/// Formats a rational as `"p/q"`, or `"p"` when it is an integer.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = i64::from_str(n.trim()).map_err(|_| bad())?;
            let d = i64::from_str(d.trim()).map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(qi(i64::from_str(s).map_err(|_| bad())?)),
    }
}

/// Serde adapter storing a [`Q`] as a `"p/q"` string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for sequences of [`Q`].
pub mod serde_q_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = xs.iter().map(fmt_q).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_q(s).map_err(serde::de::Error::custom)).collect()
    }
}

/// A one-sided bound of a wall-space complex at a tree point.
///
/// `Finite(x)` is an actual bound; `Unbounded` means the complex is not
/// bounded on that side (a lower bound of `-∞`, or an upper bound of `+∞`).
/// Serialized as `"p/q"` or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Finite(Q),
    Unbounded,
}

impl Bound {
    /// The finite value, if any.
    pub fn finite(self) -> Option<Q> {
        match self {
            Bound::Finite(x) => Some(x),
            Bound::Unbounded => None,
        }
    }

    /// True for `Unbounded`.
    pub fn is_unbounded(self) -> bool {
        matches!(self, Bound::Unbounded)
    }

    /// The smaller bound value (the weaker constraint); `Unbounded` absorbs.
    pub fn weaker(self, other: Bound) -> Bound {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a.min(b)),
            _ => Bound::Unbounded,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(x) => write!(f, "{}", fmt_q(x)),
            Bound::Unbounded => write!(f, "inf"),
        }
    }
}

impl FromStr for Bound {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            Ok(Bound::Unbounded)
        } else {
            parse_q(s).map(Bound::Finite)
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sign of a rational as `-1`, `0` or `1`.
pub fn sign(x: Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// `1` as a rational; convenience for generic code.
pub fn one() -> Q {
    Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn floor_and_ceil_of_negative_fractions() {
        assert_eq!(floor(q(-1, 2)), -1);
        assert_eq!(ceil(q(-1, 2)), 0);
        assert_eq!(floor(q(7, 3)), 2);
        assert_eq!(ceil(q(7, 3)), 3);
        assert_eq!(floor(qi(4)), 4);
        assert_eq!(ceil(qi(4)), 4);
    }

    #[test]
    fn multiples_of_a_step() {
        assert_eq!(floor_to(q(5, 2), qi(2)), qi(2));
        assert_eq!(ceil_to(q(5, 2), qi(2)), qi(4));
        assert_eq!(floor_to(q(-1, 3), q(2, 3)), q(-2, 3));
    }

    #[test]
    fn bound_text_round_trip() {
        for b in [Bound::Unbounded, Bound::Finite(q(-7, 3)), Bound::Finite(qi(5))] {
            let s = b.to_string();
            assert_eq!(s.parse::<Bound>().unwrap(), b);
        }
        assert!("x/2".parse::<Bound>().is_err());
        assert!(parse_q("1/0").is_err());
    }

    proptest! {
        #[test]
        fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
            let x = q(n, d);
            prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
        }

        #[test]
        fn floor_brackets_value(n in -10_000i64..10_000, d in 1i64..500) {
            let x = q(n, d);
            prop_assert!(qi(floor(x)) <= x && x < qi(floor(x) + 1));
            prop_assert!(qi(ceil(x)) >= x && x > qi(ceil(x) - 1));
        }
    }
}
