//! Order types of the jump sets, used as an independent check on ranks.
//!
//! Order types of rank-`α` sets reach `ω^α`, beyond the range of
//! [`Ordinal`], so they use a Cantor normal form whose exponents are
//! themselves ordinals below ω^ω.

use std::cmp::Ordering;
use std::fmt;

use crate::block::{Block, Content, Mark};
use crate::ordinal::Ordinal;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OrderType {
    terms: Vec<(Ordinal, u64)>,
}

impl OrderType {
    pub fn zero() -> Self {
        OrderType::default()
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            OrderType::zero()
        } else {
            OrderType {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }

    pub fn omega_pow(e: Ordinal) -> Self {
        OrderType {
            terms: vec![(e, 1)],
        }
    }

    /// Embeds an ordinal below ω^ω.
    pub fn from_ordinal(o: &Ordinal) -> Self {
        OrderType {
            terms: o
                .terms()
                .iter()
                .map(|&(e, c)| (Ordinal::finite(e as u64), c))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn add(&self, rhs: &OrderType) -> OrderType {
        let Some(lead) = rhs.degree() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> = self
            .terms
            .iter()
            .filter(|(e, _)| e >= lead)
            .cloned()
            .collect();
        let mut rest = rhs.terms.iter().cloned();
        if let Some(last) = terms.last_mut() {
            if &last.0 == lead {
                last.1 += rest.next().unwrap().1;
            }
        }
        terms.extend(rest);
        OrderType { terms }
    }

    /// `self · ω`, which is `ω^(degree + 1)` for nonzero `self`.
    pub fn times_omega(&self) -> OrderType {
        match self.degree() {
            None => OrderType::zero(),
            Some(e) => OrderType::omega_pow(e.succ()),
        }
    }
}

impl Ord for OrderType {
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

impl PartialOrd for OrderType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let base = match e.as_finite() {
                Some(0) => None,
                Some(1) => Some("w".to_string()),
                Some(n) => Some(format!("w^{n}")),
                None => Some(format!("w^({e})")),
            };
            match (base, c) {
                (None, c) => write!(f, "{c}")?,
                (Some(b), 1) => write!(f, "{b}")?,
                (Some(b), c) => write!(f, "{b}*{c}")?,
            }
        }
        Ok(())
    }
}

/// Supremum of an ordinal sequence of the form `A + ω^j·(n + c) + tail`,
/// given two consecutive members `x < y`: the common prefix plus
/// `ω^(j+1)`.
pub fn sup_of_progression(x: &Ordinal, y: &Ordinal) -> Ordinal {
    let (xt, yt) = (x.terms(), y.terms());
    let mut prefix = Vec::new();
    let mut i = 0;
    loop {
        match (xt.get(i), yt.get(i)) {
            (Some(a), Some(b)) if a == b => prefix.push(*a),
            (_, Some(b)) => {
                match prefix.last_mut() {
                    Some(last) if last.0 == b.0 + 1 => last.1 += 1,
                    _ => prefix.push((b.0 + 1, 1)),
                }
                return Ordinal::from_terms(prefix).expect("decreasing exponents");
            }
            _ => panic!("sup_of_progression needs an increasing pair, got {x} and {y}"),
        }
        i += 1;
    }
}

/// Order type of a compact well-ordered block list. Clusters contribute
/// `otype(body)·ω + 1`; ramps sum their materialized copies, whose degrees
/// climb to a limit, and add the limit point.
pub fn order_type<L: Mark>(blocks: &[Block<L>]) -> OrderType {
    blocks.iter().fold(OrderType::zero(), |acc, b| {
        let t = match b {
            Block::Step { .. } => OrderType::finite(1),
            Block::Cluster(c) => match &c.content {
                Content::Body(body) => order_type(body).times_omega().add(&OrderType::finite(1)),
                Content::Ramp { deriv, .. } => {
                    let n = *deriv as u64 + 1;
                    let d0 = order_type(&c.body(n));
                    let d1 = order_type(&c.body(n + 1));
                    let e0 = d0.degree().cloned().unwrap_or_default();
                    let e1 = d1.degree().cloned().unwrap_or_default();
                    let sup = sup_of_progression(&e0, &e1);
                    OrderType::omega_pow(sup).add(&OrderType::finite(1))
                }
            },
        };
        acc.add(&t)
    })
}

/// Rank read off an order type: `0` for the empty set, otherwise one more
/// than the leading exponent.
pub fn rank_from_order_type(t: &OrderType) -> Ordinal {
    match t.degree() {
        None => Ordinal::zero(),
        Some(e) => e.succ(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic() {
        let w1 = OrderType::omega_pow(o("1")).add(&OrderType::finite(1));
        assert_eq!(w1.to_string(), "w + 1");
        assert_eq!(OrderType::finite(2).times_omega().to_string(), "w");
        assert_eq!(w1.times_omega().to_string(), "w^2");
        let big = OrderType::omega_pow(o("w")).add(&OrderType::finite(1));
        assert_eq!(big.to_string(), "w^(w) + 1");
        assert_eq!(OrderType::finite(3).add(&big), big);
    }

    #[test]
    fn ranks_from_types() {
        assert_eq!(rank_from_order_type(&OrderType::finite(3)), o("1"));
        let t = OrderType::omega_pow(o("1")).add(&OrderType::finite(1));
        assert_eq!(rank_from_order_type(&t), o("2"));
        let t = OrderType::from_ordinal(&o("w^2*2 + 1"));
        assert_eq!(rank_from_order_type(&t), o("3"));
        assert_eq!(rank_from_order_type(&OrderType::zero()), o("0"));
    }

    #[test]
    fn progression_sups() {
        assert_eq!(sup_of_progression(&o("8"), &o("9")), o("w"));
        assert_eq!(sup_of_progression(&o("w*8"), &o("w*9")), o("w^2"));
        assert_eq!(sup_of_progression(&o("w^2+8"), &o("w^2+9")), o("w^2+w"));
        assert_eq!(sup_of_progression(&o("w+3"), &o("w*2+3")), o("w^2"));
        assert_eq!(sup_of_progression(&o("w^2+w*3"), &o("w^2+w*4")), o("w^2*2"));
    }
}
