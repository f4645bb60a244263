//! The jump grammar shared by elements (labeled) and point sets (unlabeled).
//!
//! A block list describes a countable, compact, well-ordered set of jump
//! positions. A `Step` is a single jump. A `Cluster` places infinitely many
//! affinely scaled copies of a body in the slots
//! `[limit − offset·ratio^n, limit − offset·ratio^(n+1))`, accumulating at
//! `limit` from below. Bodies live in slot coordinates `[0, 1)`.

use std::fmt::Debug;
use std::hash::Hash;

use crate::ordinal::Ordinal;
use crate::rational::{one, pow, Q};

/// Payload attached to jumps: a label for elements, `()` for point sets.
pub trait Mark: Clone + Eq + Hash + Debug {
    /// Body of copy `index` of a ramp cluster, in slot coordinates.
    fn ramp_copy(gamma: &Ordinal, deriv: u32, index: u64, ground: &Self, up: &Self)
        -> Vec<Block<Self>>;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Block<L> {
    Step { pos: Q, label: L },
    Cluster(Cluster<L>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cluster<L> {
    pub limit: Q,
    pub offset: Q,
    pub ratio: Q,
    /// Value in force before copy 0 and between consecutive copies.
    pub ground: L,
    pub content: Content<L>,
    /// Value from `limit` onward. `None` marks a terminal cluster whose
    /// limit is the right endpoint of the domain.
    pub at: Option<L>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Content<L> {
    Body(Vec<Block<L>>),
    /// Copy `n` is the canonical witness body whose rank is element
    /// `skip + n` of the fundamental sequence of `gamma`, differentiated
    /// `deriv` times.
    Ramp {
        gamma: Ordinal,
        deriv: u32,
        skip: u64,
        up: L,
    },
}

const COPY_SEARCH_LIMIT: u64 = 4096;

impl<L: Mark> Cluster<L> {
    pub fn slot(&self, n: u64) -> (Q, Q) {
        let lo = &self.limit - &self.offset * pow(&self.ratio, n);
        let hi = &self.limit - &self.offset * pow(&self.ratio, n + 1);
        (lo, hi)
    }

    /// Body of copy `n` in slot coordinates.
    pub fn body(&self, n: u64) -> Vec<Block<L>> {
        match &self.content {
            Content::Body(b) => b.clone(),
            Content::Ramp {
                gamma,
                deriv,
                skip,
                up,
            } => L::ramp_copy(gamma, *deriv, skip + n, &self.ground, up),
        }
    }

    /// Copy `n` in absolute coordinates.
    pub fn copy(&self, n: u64) -> Vec<Block<L>> {
        let (lo, hi) = self.slot(n);
        map_affine(&self.body(n), &(hi - &lo), &lo)
    }

    /// The same cluster with its first `k` copies removed.
    pub fn tail(&self, k: u64) -> Cluster<L> {
        let mut c = self.clone();
        c.offset = &self.offset * pow(&self.ratio, k);
        if let Content::Ramp { skip, .. } = &mut c.content {
            *skip += k;
        }
        c
    }

    /// Index of the slot containing `s`, for `slot(0).0 <= s < limit`.
    pub fn find_copy(&self, s: &Q) -> u64 {
        debug_assert!(s < &self.limit);
        let mut n = 0;
        let mut width = &self.offset * (one() - &self.ratio);
        let mut hi = &self.limit - &self.offset + &width;
        while s >= &hi {
            n += 1;
            width *= &self.ratio;
            hi += &width;
        }
        n
    }

    /// Least point of the closure of the cluster's jump set.
    pub fn first(&self) -> Q {
        for n in 0..COPY_SEARCH_LIMIT {
            let body = self.body(n);
            if let Some(b) = body.first() {
                let (lo, hi) = self.slot(n);
                return lo.clone() + (hi - lo) * b.first();
            }
        }
        self.limit.clone()
    }

    pub fn is_terminal(&self) -> bool {
        self.at.is_none()
    }
}

impl<L: Mark> Block<L> {
    pub fn first(&self) -> Q {
        match self {
            Block::Step { pos, .. } => pos.clone(),
            Block::Cluster(c) => c.first(),
        }
    }

    /// Greatest point of the closure.
    pub fn last(&self) -> Q {
        match self {
            Block::Step { pos, .. } => pos.clone(),
            Block::Cluster(c) => c.limit.clone(),
        }
    }
}

/// Applies `t ↦ shift + scale·t` (with `scale > 0`) to every position.
pub fn map_affine<L: Clone>(blocks: &[Block<L>], scale: &Q, shift: &Q) -> Vec<Block<L>> {
    blocks
        .iter()
        .map(|b| match b {
            Block::Step { pos, label } => Block::Step {
                pos: shift + scale * pos,
                label: label.clone(),
            },
            Block::Cluster(c) => Block::Cluster(Cluster {
                limit: shift + scale * &c.limit,
                offset: scale * &c.offset,
                ratio: c.ratio.clone(),
                ground: c.ground.clone(),
                content: c.content.clone(),
                at: c.at.clone(),
            }),
        })
        .collect()
}

/// Applies `f` to every label, including the implicit labels of ramps.
pub fn map_labels<L: Clone, M>(blocks: &[Block<L>], f: &impl Fn(&L) -> M) -> Vec<Block<M>> {
    blocks
        .iter()
        .map(|b| match b {
            Block::Step { pos, label } => Block::Step {
                pos: pos.clone(),
                label: f(label),
            },
            Block::Cluster(c) => Block::Cluster(Cluster {
                limit: c.limit.clone(),
                offset: c.offset.clone(),
                ratio: c.ratio.clone(),
                ground: f(&c.ground),
                content: match &c.content {
                    Content::Body(b) => Content::Body(map_labels(b, f)),
                    Content::Ramp {
                        gamma,
                        deriv,
                        skip,
                        up,
                    } => Content::Ramp {
                        gamma: gamma.clone(),
                        deriv: *deriv,
                        skip: *skip,
                        up: f(up),
                    },
                },
                at: c.at.as_ref().map(f),
            }),
        })
        .collect()
}

/// Points strictly below `s` (or `<= s` when `inclusive`).
///
/// An exclusive cut exactly at a cluster limit keeps the cluster as
/// terminal.
pub fn cut_below<L: Mark>(blocks: &[Block<L>], s: &Q, inclusive: bool) -> Vec<Block<L>> {
    let keeps = |p: &Q| p < s || (inclusive && p == s);
    let mut out = Vec::new();
    for b in blocks {
        match b {
            Block::Step { pos, .. } => {
                if !keeps(pos) {
                    break;
                }
                out.push(b.clone());
            }
            Block::Cluster(c) => {
                if !keeps(&c.first()) {
                    break;
                }
                if keeps(&c.limit) {
                    out.push(b.clone());
                    continue;
                }
                if &c.limit == s {
                    let mut t = c.clone();
                    t.at = None;
                    out.push(Block::Cluster(t));
                    break;
                }
                let n = c.find_copy(s);
                for k in 0..n {
                    out.extend(c.copy(k));
                }
                out.extend(cut_below(&c.copy(n), s, inclusive));
                break;
            }
        }
    }
    out
}

/// Points `>= s`. A cut exactly at a non-terminal cluster limit leaves a
/// step at the limit carrying the cluster's `at` value.
pub fn cut_from<L: Mark>(blocks: &[Block<L>], s: &Q) -> Vec<Block<L>> {
    let mut out = Vec::new();
    let mut iter = blocks.iter();
    for b in iter.by_ref() {
        match b {
            Block::Step { pos, .. } => {
                if pos >= s {
                    out.push(b.clone());
                    break;
                }
            }
            Block::Cluster(c) => {
                if &c.limit < s {
                    continue;
                }
                if &c.first() >= s {
                    out.push(b.clone());
                    break;
                }
                if &c.limit == s {
                    if let Some(at) = &c.at {
                        out.push(Block::Step {
                            pos: s.clone(),
                            label: at.clone(),
                        });
                    }
                    break;
                }
                let n = c.find_copy(s);
                out.extend(cut_from(&c.copy(n), s));
                out.push(Block::Cluster(c.tail(n + 1)));
                break;
            }
        }
    }
    out.extend(iter.cloned());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    #[derive(Clone, Debug, PartialEq, Eq, Hash)]
    struct Dot;

    impl Mark for Dot {
        fn ramp_copy(_: &Ordinal, _: u32, _: u64, _: &Self, _: &Self) -> Vec<Block<Self>> {
            unreachable!()
        }
    }

    fn step(p: Q) -> Block<Dot> {
        Block::Step { pos: p, label: Dot }
    }

    fn pulse_cluster() -> Cluster<Dot> {
        Cluster {
            limit: q(0),
            offset: q(1),
            ratio: q_frac(1, 2),
            ground: Dot,
            content: Content::Body(vec![step(q(0)), step(q_frac(1, 2))]),
            at: Some(Dot),
        }
    }

    #[test]
    fn slots_and_copies() {
        let c = pulse_cluster();
        assert_eq!(c.slot(0), (q(-1), q_frac(-1, 2)));
        assert_eq!(c.slot(2), (q_frac(-1, 4), q_frac(-1, 8)));
        assert_eq!(c.copy(1), vec![step(q_frac(-1, 2)), step(q_frac(-3, 8))]);
        assert_eq!(c.first(), q(-1));
        assert_eq!(c.find_copy(&q_frac(-1, 4)), 2);
        assert_eq!(c.find_copy(&q_frac(-3, 10)), 1);
        assert_eq!(c.tail(2).slot(0), c.slot(2));
    }

    #[test]
    fn cuts() {
        let blocks = vec![Block::Cluster(pulse_cluster()), step(q(1))];
        let below = cut_below(&blocks, &q_frac(-1, 4), false);
        assert_eq!(below.len(), 4);
        let below = cut_below(&blocks, &q(0), false);
        assert!(matches!(&below[..], [Block::Cluster(c)] if c.is_terminal()));
        let below = cut_below(&blocks, &q(0), true);
        assert_eq!(below, vec![Block::Cluster(pulse_cluster())]);

        let from = cut_from(&blocks, &q_frac(-1, 4));
        assert!(matches!(&from[..], [_, _, Block::Cluster(c), Block::Step { .. }] if c.slot(0).0 == q_frac(-1, 8)));
        let from = cut_from(&blocks, &q_frac(-3, 8));
        assert_eq!(from.len(), 3);
        assert_eq!(cut_from(&blocks, &q(0)), vec![step(q(0)), step(q(1))]);
        assert_eq!(cut_from(&blocks, &q(2)), vec![]);
    }
}
