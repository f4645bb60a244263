//! Canonical witness bodies: closed jump structures of a prescribed rank.
//!
//! Rank 1 is a pulse (up at 0, back to ground at 1/2). Rank `β+1` with `β` a
//! successor is a cluster of rank-`β` bodies accumulating at 1/2. Rank `γ+1`
//! with `γ` a limit is a ramp whose copies climb the fundamental sequence of
//! `γ`. Every body starts and ends at its ground value, and all of its
//! points lie in `[0, 1/2]`.

use crate::block::{Block, Cluster, Content, Mark};
use crate::error::Error;
use crate::ordinal::Ordinal;
use crate::rational::{half, q};

pub fn witness_body<L: Mark>(rank: &Ordinal, ground: &L, up: &L) -> Result<Vec<Block<L>>, Error> {
    let Some(pred) = rank.pred() else {
        return Err(Error::Domain(format!(
            "witnesses exist only for successor ranks >= 1 (a nonempty countable compact set has successor rank), got {rank}"
        )));
    };
    if pred.is_zero() {
        return Ok(vec![
            Block::Step {
                pos: q(0),
                label: up.clone(),
            },
            Block::Step {
                pos: half(),
                label: ground.clone(),
            },
        ]);
    }
    let content = if pred.is_successor() {
        Content::Body(witness_body(&pred, ground, up)?)
    } else {
        Content::Ramp {
            gamma: pred,
            deriv: 0,
            skip: 0,
            up: up.clone(),
        }
    };
    Ok(vec![Block::Cluster(Cluster {
        limit: half(),
        offset: half(),
        ratio: half(),
        ground: ground.clone(),
        content,
        at: Some(ground.clone()),
    })])
}

/// Body of copy `index` of a ramp over `gamma`.
pub fn ramp_body<L: Mark>(gamma: &Ordinal, index: u64, ground: &L, up: &L) -> Vec<Block<L>> {
    let rank = gamma
        .fundamental_seq(index)
        .expect("ramp clusters carry a limit ordinal");
    witness_body(&rank, ground, up).expect("fundamental sequences consist of successors")
}
