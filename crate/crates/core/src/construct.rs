//! Escaping Cauchy chains: each filtration level `T^[α]` is incomplete.
//!
//! Piece `n` of a chain starting at `x` occupies `[ρ_x + r(1 − 2^{1−n}),
//! ρ_x + r(1 − 2^{−n}))`, so the pieces tile `[ρ_x, ρ_x + r)` and the chain
//! converges to an element whose jumps accumulate at `ρ_x + r`.

use serde::Serialize;

use crate::block::{map_affine, Block, Cluster, Content};
use crate::cbrank::{complexity, member, pair_complexity};
use crate::element::{smallest_other, Alphabet, Element, Label};
use crate::error::{Error, Result};
use crate::metric::dist;
use crate::ordinal::Ordinal;
use crate::rational::{fmt_q, half, one, pow, q_frac, zero, Q};
use crate::sexpr::element_to_string;
use crate::witness::witness_body;

/// The ranks `β_1, β_2, …` of the successive pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaSeq {
    /// `β_n = β` for every `n`; `β` a successor.
    Constant(Ordinal),
    /// `β_n` is element `n − 1` of the fundamental sequence of a limit.
    Fundamental(Ordinal),
}

impl BetaSeq {
    /// The natural sequence with supremum `alpha >= 1`.
    pub fn for_sup(alpha: &Ordinal) -> Result<BetaSeq> {
        if alpha.is_zero() {
            return Err(Error::Domain("the supremum must be at least 1".into()));
        }
        Ok(if alpha.is_limit() {
            BetaSeq::Fundamental(alpha.clone())
        } else {
            BetaSeq::Constant(alpha.clone())
        })
    }

    fn check(&self) -> Result<()> {
        match self {
            BetaSeq::Constant(b) if b.is_zero() || b.is_limit() => Err(Error::Domain(format!(
                "a constant sequence needs a successor ordinal >= 1, got {b}"
            ))),
            BetaSeq::Fundamental(g) if !g.is_limit() => Err(Error::Domain(format!(
                "fundamental sequences exist only for limit ordinals, got {g}"
            ))),
            _ => Ok(()),
        }
    }

    /// `β_n`, for `n >= 1`.
    pub fn nth(&self, n: u64) -> Ordinal {
        match self {
            BetaSeq::Constant(b) => b.clone(),
            BetaSeq::Fundamental(g) => g.fundamental_seq(n - 1).expect("checked limit"),
        }
    }

    pub fn sup(&self) -> Ordinal {
        match self {
            BetaSeq::Constant(b) | BetaSeq::Fundamental(b) => b.clone(),
        }
    }
}

fn positive(r: &Q) -> Result<()> {
    if r <= &zero() {
        return Err(Error::Domain(format!("radius {} must be positive", fmt_q(r))));
    }
    Ok(())
}

/// Ground and excursion labels for a piece glued after `x`.
fn labels_after(x: &Element) -> (Label, Label) {
    match x.final_value() {
        Some(v) => (v, smallest_other(v)),
        None => (Label(1), Label::ZERO),
    }
}

/// An `a` with `x ≺ a`, `ρ_a = ρ_x + r` and `comp(x, a) = β`.
pub fn escape_step(x: &Element, beta: &Ordinal, r: &Q) -> Result<Element> {
    positive(r)?;
    let (g, u) = labels_after(x);
    if beta == &Ordinal::one() {
        return x.extend_step(u, r);
    }
    let body = witness_body(beta, &g, &u)?;
    Ok(x.append(map_affine(&body, r, x.rho()), x.rho() + r))
}

/// `a_1 = x`, `a_{n+1} = escape_step(a_n, β_n, r/2^n)`.
pub fn escape_sequence(x: &Element, seq: &BetaSeq, r: &Q, n: usize) -> Result<Vec<Element>> {
    seq.check()?;
    positive(r)?;
    if n == 0 {
        return Err(Error::Domain("a chain has at least one element".into()));
    }
    let mut out = vec![x.clone()];
    for k in 1..n as u64 {
        let next = escape_step(out.last().unwrap(), &seq.nth(k), &(r * pow(&half(), k)))?;
        out.push(next);
    }
    Ok(out)
}

/// The limit of `escape_sequence(x, seq, r, ·)`, built directly.
pub fn limit_of_chain(x: &Element, seq: &BetaSeq, r: &Q) -> Result<Element> {
    seq.check()?;
    positive(r)?;
    let limit = x.rho() + r;
    let mut cur = x.clone();
    let mut k = 0u64;
    let cluster = match seq {
        BetaSeq::Constant(b) if b == &Ordinal::one() => {
            // Single steps alternate 1, 0, 1, … once the value is 0.
            while cur.final_value() != Some(Label::ZERO) {
                k += 1;
                cur = escape_step(&cur, b, &(r * pow(&half(), k)))?;
            }
            Cluster {
                limit: limit.clone(),
                offset: r * pow(&half(), k),
                ratio: q_frac(1, 4),
                ground: Label::ZERO,
                content: Content::Body(vec![
                    Block::Step {
                        pos: zero(),
                        label: Label(1),
                    },
                    Block::Step {
                        pos: q_frac(2, 3),
                        label: Label::ZERO,
                    },
                ]),
                at: None,
            }
        }
        BetaSeq::Constant(b) => {
            let (g, u) = labels_after(x);
            Cluster {
                limit: limit.clone(),
                offset: r.clone(),
                ratio: half(),
                ground: g,
                content: Content::Body(witness_body(b, &g, &u)?),
                at: None,
            }
        }
        BetaSeq::Fundamental(gamma) => {
            // The first piece may be a single step, so it stays explicit.
            cur = escape_step(&cur, &seq.nth(1), &(r * half()))?;
            let (g, u) = labels_after(&cur);
            Cluster {
                limit: limit.clone(),
                offset: r * half(),
                ratio: half(),
                ground: g,
                content: Content::Ramp {
                    gamma: gamma.clone(),
                    deriv: 0,
                    skip: 1,
                    up: u,
                },
                at: None,
            }
        }
    };
    Ok(cur.append(vec![Block::Cluster(cluster)], limit))
}

#[derive(Clone, Debug, Serialize)]
pub struct EscapeReport {
    pub alpha: String,
    pub kappa: String,
    pub radius: String,
    pub sequence: Vec<String>,
    /// `Σ_{i<n} d(a_i, a_{i+1})` for `n = 1 … N`.
    pub partial_distance_sums: Vec<String>,
    pub step_distances: Vec<String>,
    pub step_pair_complexities: Vec<String>,
    pub limit: String,
    pub limit_complexity: String,
    pub distance_to_limit: String,
    pub chain_members: bool,
    pub member_alpha: bool,
    pub member_alpha_plus_one: bool,
    /// Every check above came out as the construction promises.
    pub verified: bool,
}

/// Builds a chain in `T^[α]` from `c_0` with radius 1 and its limit, and
/// checks that the limit has complexity `α + 1`.
pub fn incompleteness_demo(alpha: &Ordinal, alphabet: Alphabet, n: usize) -> Result<EscapeReport> {
    let seq = BetaSeq::for_sup(alpha)?;
    let r = one();
    let x = Element::const_ray(zero(), alphabet);
    let chain = escape_sequence(&x, &seq, &r, n)?;
    let limit = limit_of_chain(&x, &seq, &r)?;

    let mut verified = true;
    let mut sums = vec![zero()];
    let mut steps = Vec::new();
    let mut pairs = Vec::new();
    for (k, w) in chain.windows(2).enumerate() {
        let d = dist(&w[0], &w[1])?;
        verified &= d <= &r * pow(&half(), k as u64 + 1);
        verified &= crate::metric::leq(&w[0], &w[1])? && w[0].rho() < w[1].rho();
        let p = pair_complexity(&w[0], &w[1])?;
        verified &= p == seq.nth(k as u64 + 1);
        pairs.push(p.to_string());
        sums.push(sums.last().unwrap() + &d);
        steps.push(d);
    }
    verified &= sums.iter().all(|s| s <= &r);
    let chain_members = chain.iter().all(|a| member(a, alpha));
    let last = chain.last().unwrap();
    let to_limit = dist(last, &limit)?;
    verified &= to_limit <= &r * pow(&half(), n as u64 - 1);
    verified &= crate::metric::leq(last, &limit)?;
    let limit_complexity = complexity(&limit);
    let member_alpha = member(&limit, alpha);
    let member_alpha_plus_one = member(&limit, &alpha.succ());
    verified &= chain_members && limit_complexity == alpha.succ() && !member_alpha && member_alpha_plus_one;

    Ok(EscapeReport {
        alpha: alpha.to_string(),
        kappa: match alphabet.valence() {
            Some(k) => k.to_string(),
            None => "countable".into(),
        },
        radius: fmt_q(&r),
        sequence: chain.iter().map(element_to_string).collect(),
        partial_distance_sums: sums.iter().map(fmt_q).collect(),
        step_distances: steps.iter().map(fmt_q).collect(),
        step_pair_complexities: pairs,
        limit: element_to_string(&limit),
        limit_complexity: limit_complexity.to_string(),
        distance_to_limit: fmt_q(&to_limit),
        chain_members,
        member_alpha,
        member_alpha_plus_one,
        verified,
    })
}
