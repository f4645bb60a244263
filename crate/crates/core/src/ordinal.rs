//! Ordinals below ω^ω in Cantor normal form.
//!
//! A value is a finite sum `ω^e1·c1 + ω^e2·c2 + …` with `e1 > e2 > …` natural
//! exponents and positive coefficients. The empty sum is zero.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::finite(1)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(1)
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(0, n)] }
        }
    }

    /// ω^e.
    pub fn omega_pow(e: u32) -> Self {
        Ordinal { terms: vec![(e, 1)] }
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs. Zero
    /// coefficients are dropped; exponents must be strictly decreasing.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, Error> {
        let terms: Vec<_> = terms.into_iter().filter(|&(_, c)| c > 0).collect();
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::Invalid(
                "ordinal exponents must be strictly decreasing".into(),
            ));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e == 0)
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((0, _)))
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// Leading exponent; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|&(e, _)| e)
    }

    pub fn succ(&self) -> Self {
        self.add(&Ordinal::one())
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Self> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        last.1 -= 1;
        if last.1 == 0 {
            terms.pop();
        }
        Some(Ordinal { terms })
    }

    /// Ordinal sum `self + rhs`: terms of `self` below the leading exponent
    /// of `rhs` are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.degree() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self
            .terms
            .iter()
            .copied()
            .take_while(|&(e, _)| e >= lead)
            .collect();
        let mut rest = rhs.terms.iter().copied();
        if let Some(last) = terms.last_mut() {
            if last.0 == lead {
                last.1 += rest.next().unwrap().1;
            }
        }
        terms.extend(rest);
        Ordinal { terms }
    }

    /// Element `n` of the canonical fundamental sequence of a limit ordinal.
    ///
    /// Writing `self = δ + ω^e·m` with `e ≥ 1` its last term, the sequence is
    /// `δ + ω^e·(m−1) + ω^(e−1)·n + 1`: strictly increasing successors with
    /// supremum `self`.
    pub fn fundamental_seq(&self, n: u64) -> Result<Ordinal, Error> {
        if !self.is_limit() {
            return Err(Error::Domain(format!(
                "fundamental sequences exist only for limit ordinals, got {self}"
            )));
        }
        let mut terms = self.terms.clone();
        let (e, m) = terms.pop().unwrap();
        if m > 1 {
            terms.push((e, m - 1));
        }
        let base = Ordinal { terms };
        let step = Ordinal {
            terms: if n > 0 { vec![(e - 1, n)] } else { vec![] },
        };
        Ok(base.add(&step).succ())
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let ord = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::finite(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    /// Parses `w^2*3 + w*1 + 4`, `w + 1`, `0`. `ω` is accepted for `w`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |msg: &str| Error::Invalid(format!("bad ordinal `{s}`: {msg}"));
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let cleaned = cleaned.replace('ω', "w");
        if cleaned.is_empty() {
            return Err(bad("empty"));
        }
        let mut total = Ordinal::zero();
        let mut prev_exp: Option<u32> = None;
        for term in cleaned.split('+') {
            let (exp, coeff) = if let Some(rest) = term.strip_prefix('w') {
                let (pow, coeff) = match rest.split_once('*') {
                    Some((p, c)) => (p, c.parse::<u64>().map_err(|_| bad("coefficient"))?),
                    None => (rest, 1),
                };
                let exp = match pow.strip_prefix('^') {
                    Some(p) => p.parse::<u32>().map_err(|_| bad("exponent"))?,
                    None if pow.is_empty() => 1,
                    None => return Err(bad("unexpected text after w")),
                };
                (exp, coeff)
            } else {
                (0, term.parse::<u64>().map_err(|_| bad("term"))?)
            };
            if prev_exp.is_some_and(|p| p <= exp) {
                return Err(bad("exponents must strictly decrease"));
            }
            prev_exp = Some(exp);
            if coeff > 0 {
                total.terms.push((exp, coeff));
            }
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn comparisons() {
        assert_eq!(o("0").cmp(&o("1")), Ordering::Less);
        assert_eq!(o("w").cmp(&o("5")), Ordering::Greater);
        assert_eq!(o("w*2+1").cmp(&o("w*2 + 1")), Ordering::Equal);
        assert!(o("w^2") > o("w*100 + 7"));
    }

    #[test]
    fn addition_absorbs() {
        assert_eq!(o("1").add(&o("w")), o("w"));
        assert_eq!(o("w").add(&o("1")), o("w+1"));
        assert_eq!(o("w*2+3").add(&o("w^2")), o("w^2"));
        assert_eq!(o("w^2+w*2+3").add(&o("w*3+1")), o("w^2+w*5+1"));
    }

    #[test]
    fn successors() {
        assert_eq!(o("w").succ(), o("w+1"));
        assert!(o("w+1").is_successor());
        assert!(!o("w^2").is_successor());
        assert!(!Ordinal::zero().is_successor());
        assert!(!Ordinal::zero().is_limit());
        assert_eq!(o("w+1").pred(), Some(o("w")));
        assert_eq!(o("w").pred(), None);
    }

    #[test]
    fn fundamental_sequences() {
        assert_eq!(o("w").fundamental_seq(3).unwrap(), o("4"));
        assert_eq!(o("w^2").fundamental_seq(2).unwrap(), o("w*2+1"));
        assert_eq!(o("w*2").fundamental_seq(0).unwrap(), o("w+1"));
        assert!(o("w+1").fundamental_seq(1).is_err());
        assert!(Ordinal::zero().fundamental_seq(1).is_err());
    }

    #[test]
    fn fundamental_sequences_are_cofinal() {
        for g in ["w", "w*2", "w^2", "w^2+w"] {
            let g = o(g);
            let seq: Vec<_> = (0..=1000).map(|n| g.fundamental_seq(n).unwrap()).collect();
            for w in seq.windows(2) {
                assert!(w[0] < w[1] && w[1] < g);
            }
            assert!(seq.iter().all(Ordinal::is_successor));
            // Everything below g with small coefficients is eventually passed.
            let below = [o("0"), o("999")];
            for x in below.iter().chain([o("w*1+500"), o("w+999")].iter()) {
                if x < &g {
                    assert!(seq.iter().any(|s| s > x), "{x} never passed for {g}");
                }
            }
        }
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "7", "w", "w + 1", "w^2*3 + w*2 + 4", "w^5"] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(o("w^2*3 + w*1 + 4").to_string(), "w^2*3 + w + 4");
        assert!("w^1 + w^2".parse::<Ordinal>().is_err());
        assert!("x".parse::<Ordinal>().is_err());
    }

    fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
        proptest::collection::vec(0u64..=5, 5).prop_map(|coeffs| {
            let terms = coeffs
                .into_iter()
                .enumerate()
                .map(|(i, c)| (4 - i as u32, c))
                .collect();
            Ordinal::from_terms(terms).unwrap()
        })
    }

    proptest! {
        #[test]
        fn addition_is_associative(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        }

        #[test]
        fn addition_is_strictly_monotone_on_the_right(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
            if a < b {
                prop_assert!(c.add(&a) < c.add(&b));
            }
        }

        #[test]
        fn order_is_total_and_consistent(a in arb_ordinal(), b in arb_ordinal()) {
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            prop_assert_eq!(a == b, a.cmp(&b) == Ordering::Equal);
            prop_assert!(a.add(&b) >= b);
        }
    }
}
