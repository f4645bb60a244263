//! Jump sets, Cantor–Bendixson derivatives and rank, complexity, and the
//! filtration levels `T^[α]`.
//!
//! Ranks are computed by structural recursion over the block grammar; the
//! transfinite derivative stages are never materialized.

use std::fmt;

use crate::block::{cut_below, cut_from, map_affine, Block, Cluster, Content, Mark};
use crate::element::{Alphabet, Element, Label};
use crate::error::{Error, Result};
use crate::metric::leq;
use crate::ordinal::Ordinal;
use crate::otype::{self, OrderType};
use crate::rational::{fmt_q, zero, Q};
use crate::witness::witness_body;

impl Mark for () {
    fn ramp_copy(gamma: &Ordinal, deriv: u32, index: u64, _: &(), _: &()) -> Vec<Block<()>> {
        let mut body = crate::witness::ramp_body(gamma, index, &(), &());
        for _ in 0..deriv {
            body = derive_blocks(&body);
        }
        body
    }
}

/// A countable compact well-ordered subset of the line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PointSet(Vec<Block<()>>);

impl PointSet {
    pub fn empty() -> Self {
        PointSet(Vec::new())
    }

    /// A finite set; the positions are sorted and deduplicated.
    pub fn atoms(mut points: Vec<Q>) -> Self {
        points.sort();
        points.dedup();
        PointSet(
            points
                .into_iter()
                .map(|pos| Block::Step { pos, label: () })
                .collect(),
        )
    }

    pub(crate) fn from_blocks(blocks: Vec<Block<()>>) -> Self {
        PointSet(blocks)
    }

    pub fn blocks(&self) -> &[Block<()>] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<Q> {
        self.0.first().map(Block::first)
    }

    pub fn max(&self) -> Option<Q> {
        self.0.last().map(Block::last)
    }

    /// Concatenation; every point of `other` must exceed every point of `self`.
    pub fn concat(&self, other: &PointSet) -> Result<PointSet> {
        if let (Some(a), Some(b)) = (self.max(), other.min()) {
            if b <= a {
                return Err(Error::Domain("concatenated point sets must be ordered".into()));
            }
        }
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Ok(PointSet(v))
    }

    /// Whether `t` lies in the set.
    pub fn contains(&self, t: &Q) -> bool {
        !restrict_set(self, t, t).is_empty()
    }
}

/// The closure of the left-variation points of `f`.
pub fn jump_set(f: &Element) -> PointSet {
    PointSet(strip(f.jumps()))
}

fn strip(blocks: &[Block<Label>]) -> Vec<Block<()>> {
    blocks
        .iter()
        .map(|b| match b {
            Block::Step { pos, .. } => Block::Step {
                pos: pos.clone(),
                label: (),
            },
            Block::Cluster(c) => Block::Cluster(Cluster {
                limit: c.limit.clone(),
                offset: c.offset.clone(),
                ratio: c.ratio.clone(),
                ground: (),
                content: match &c.content {
                    Content::Body(b) => Content::Body(strip(b)),
                    Content::Ramp {
                        gamma, deriv, skip, ..
                    } => Content::Ramp {
                        gamma: gamma.clone(),
                        deriv: *deriv,
                        skip: *skip,
                        up: (),
                    },
                },
                // The limit is always a closure point.
                at: Some(()),
            }),
        })
        .collect()
}

fn derive_blocks(blocks: &[Block<()>]) -> Vec<Block<()>> {
    let mut out = Vec::new();
    for b in blocks {
        let Block::Cluster(c) = b else { continue };
        match &c.content {
            Content::Body(body) => {
                let d = derive_blocks(body);
                if d.is_empty() {
                    out.push(Block::Step {
                        pos: c.limit.clone(),
                        label: (),
                    });
                } else {
                    let mut c = c.clone();
                    c.content = Content::Body(d);
                    out.push(Block::Cluster(c));
                }
            }
            Content::Ramp {
                gamma, deriv, skip, ..
            } => {
                let mut c = c.clone();
                c.content = Content::Ramp {
                    gamma: gamma.clone(),
                    deriv: deriv + 1,
                    skip: *skip,
                    up: (),
                };
                out.push(Block::Cluster(c));
            }
        }
    }
    out
}

/// One Cantor–Bendixson derivative: the non-isolated points.
pub fn derivative(s: &PointSet) -> PointSet {
    PointSet(derive_blocks(&s.0))
}

fn rank_blocks(blocks: &[Block<()>]) -> Ordinal {
    blocks
        .iter()
        .map(|b| match b {
            Block::Step { .. } => Ordinal::one(),
            Block::Cluster(c) => match &c.content {
                Content::Body(body) => rank_blocks(body).succ(),
                // Copies of unbounded rank below gamma keep the limit alive
                // through every stage below gamma.
                Content::Ramp { gamma, .. } => gamma.succ(),
            },
        })
        .max()
        .unwrap_or_default()
}

/// Least `α` with `S^(α) = ∅`.
pub fn cb_rank(s: &PointSet) -> Ordinal {
    rank_blocks(&s.0)
}

pub fn order_type(s: &PointSet) -> OrderType {
    otype::order_type(&s.0)
}

/// Rank derived from the order type alone.
pub fn rank_from_order_type(s: &PointSet) -> Ordinal {
    otype::rank_from_order_type(&order_type(s))
}

/// `S ∩ [lo, hi]`.
pub fn restrict_set(s: &PointSet, lo: &Q, hi: &Q) -> PointSet {
    if lo > hi {
        return PointSet::empty();
    }
    PointSet(cut_from(&cut_below(&s.0, hi, true), lo))
}

/// Cantor–Bendixson rank of the jump set.
pub fn complexity(f: &Element) -> Ordinal {
    cb_rank(&jump_set(f))
}

/// `rk(P_b ∩ [ρ_a, ρ_b])` for `a ≺ b`.
pub fn pair_complexity(a: &Element, b: &Element) -> Result<Ordinal> {
    if a.rho() >= b.rho() || !leq(a, b)? {
        return Err(Error::Domain("pair complexity needs a strict prefix pair a < b".into()));
    }
    Ok(cb_rank(&pair_set(a, b)))
}

/// `P_b ∩ [ρ_a, ρ_b]`.
pub fn pair_set(a: &Element, b: &Element) -> PointSet {
    restrict_set(&jump_set(b), a.rho(), b.rho())
}

/// Membership in `T^[α]`.
pub fn member(f: &Element, alpha: &Ordinal) -> bool {
    &complexity(f) <= alpha
}

/// An element of complexity exactly `alpha` whose jumps lie in
/// `[at − width, at]`, with `ρ = at + width`.
pub fn witness(alpha: &Ordinal, at: &Q, width: &Q, alphabet: Alphabet) -> Result<Element> {
    if width <= &zero() {
        return Err(Error::Domain(format!("witness width {} must be positive", fmt_q(width))));
    }
    let body = witness_body(alpha, &Label::ZERO, &Label(1))?;
    let jumps = map_affine(&body, &(width + width), &(at - width));
    Element::new(at + width, jumps, alphabet)
}

/// The jump set of the canonical witness on `[-1, 0]`.
pub fn witness_set(alpha: &Ordinal) -> Result<PointSet> {
    let body = witness_body(alpha, &(), &())?;
    Ok(PointSet(map_affine(&body, &Q::from_integer(2.into()), &Q::from_integer((-1).into()))))
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(set {})", crate::sexpr::set_blocks_to_string(&self.0))
    }
}
