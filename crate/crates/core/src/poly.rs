//! Integer polynomials in the thickness parameters `q0, q1, q2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

/// A polynomial with integer coefficients in `q0, q1, q2`, stored as a map
/// from exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<[u32; 3], i64>,
}

impl Poly {
    /// The constant polynomial `c`.
    pub fn constant(c: i64) -> Poly {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert([0, 0, 0], c);
        }
        Poly { terms }
    }

    pub fn one() -> Poly {
        Poly::constant(1)
    }

    pub fn zero() -> Poly {
        Poly::constant(0)
    }

    /// The variable `q_t`.
    pub fn var(t: usize) -> Poly {
        let mut e = [0u32; 3];
        e[t] = 1;
        Poly { terms: BTreeMap::from([(e, 1)]) }
    }

    /// `q_t + c`.
    pub fn var_plus(t: usize, c: i64) -> Poly {
        Poly::var(t) + Poly::constant(c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates at `(q0, q1, q2)`.
    pub fn eval(&self, q: [u64; 3]) -> i128 {
        self.terms
            .iter()
            .map(|(e, &c)| {
                let mut v = c as i128;
                for t in 0..3 {
                    v *= (q[t] as i128).pow(e[t]);
                }
                v
            })
            .sum()
    }

    /// Substitutes `q_a := q_b` (used to normalize conjugate parameters).
    pub fn identify(&self, a: usize, b: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, &c) in &self.terms {
            let mut e2 = *e;
            e2[b] += e2[a];
            e2[a] = 0;
            out.add_term(e2, c);
        }
        out
    }

    fn add_term(&mut self, e: [u32; 3], c: i64) {
        let entry = self.terms.entry(e).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, o: Poly) -> Poly {
        for (e, c) in o.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, o: Poly) -> Poly {
        for (e, c) in o.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &o.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl fmt::Display for Poly {
    /// Terms in decreasing degree, e.g. `q0^2 + q0 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&[u32; 3], &i64)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (k, (e, &c)) in terms.iter().enumerate() {
            let mono: Vec<String> = (0..3)
                .filter(|&t| e[t] > 0)
                .map(|t| if e[t] == 1 { format!("q{t}") } else { format!("q{t}^{}", e[t]) })
                .collect();
            let mag = c.abs();
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_eval() {
        let q = Poly::var(0);
        let p = &q * &q + q.clone() + Poly::one();
        assert_eq!(p.to_string(), "q0^2 + q0 + 1");
        assert_eq!(p.eval([2, 0, 0]), 7);
        assert_eq!((Poly::var(1) - Poly::var(1)).to_string(), "0");
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_map(a in -5i64..5, b in -5i64..5, t in 0usize..3, q0 in 1u64..5, q1 in 1u64..5, q2 in 1u64..5) {
            let x = Poly::var_plus(t, a);
            let y = Poly::var_plus((t + 1) % 3, b);
            let q = [q0, q1, q2];
            prop_assert_eq!((&x * &y).eval(q), x.eval(q) * y.eval(q));
            prop_assert_eq!((x.clone() + y.clone()).eval(q), x.eval(q) + y.eval(q));
        }
    }
}
