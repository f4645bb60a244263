//! Points of the universal real tree: eventually-zero, right-piecewise-constant
//! labeled functions on `(−∞, ρ)` with a symbolic jump structure.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::block::{cut_below, cut_from, Block, Cluster, Content, Mark};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::rational::{fmt_q, one, q, zero, Q};
use crate::witness::ramp_body;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label(pub u64);

impl Label {
    pub const ZERO: Label = Label(0);
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Mark for Label {
    fn ramp_copy(gamma: &Ordinal, deriv: u32, index: u64, ground: &Self, up: &Self) -> Vec<Block<Self>> {
        debug_assert_eq!(deriv, 0, "labeled ramps are never differentiated");
        ramp_body(gamma, index, ground, up)
    }
}

/// The label set. `Finite(m)` has labels `0..m` and models valence `m + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    Finite(u64),
    Countable,
}

impl Alphabet {
    /// Alphabet for valence `kappa >= 3`.
    pub fn for_valence(kappa: u64) -> Result<Alphabet> {
        if kappa < 3 {
            return Err(Error::Domain(format!("valence must be at least 3, got {kappa}")));
        }
        Ok(Alphabet::Finite(kappa - 1))
    }

    pub fn contains(&self, l: Label) -> bool {
        match self {
            Alphabet::Finite(m) => l.0 < *m,
            Alphabet::Countable => true,
        }
    }

    /// Valence of the tree; `None` for the countable alphabet.
    pub fn valence(&self) -> Option<u64> {
        match self {
            Alphabet::Finite(m) => Some(m + 1),
            Alphabet::Countable => None,
        }
    }

    pub fn labels(&self) -> Option<impl Iterator<Item = Label>> {
        match self {
            Alphabet::Finite(m) => Some((0..*m).map(Label)),
            Alphabet::Countable => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Alphabet::Finite(m) if *m < 2 => Err(Error::Invalid(format!(
                "finite alphabets need at least 2 labels, got {m}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Finite(m) => write!(f, "(alphabet finite {m})"),
            Alphabet::Countable => write!(f, "(alphabet countable)"),
        }
    }
}

/// Smallest label different from `l`.
pub fn smallest_other(l: Label) -> Label {
    if l == Label::ZERO {
        Label(1)
    } else {
        Label::ZERO
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    rho: Q,
    jumps: Vec<Block<Label>>,
    alphabet: Alphabet,
}

impl Element {
    /// Validates and normalizes.
    pub fn new(rho: Q, jumps: Vec<Block<Label>>, alphabet: Alphabet) -> Result<Element> {
        alphabet.validate()?;
        validate_list(&jumps, &alphabet, Some(&rho))?;
        Ok(Element::assemble(rho, jumps, alphabet))
    }

    /// Normalizes internally produced block lists without validation.
    pub(crate) fn assemble(rho: Q, jumps: Vec<Block<Label>>, alphabet: Alphabet) -> Element {
        Element {
            jumps: normalize_blocks(jumps, Some(Label::ZERO)),
            rho,
            alphabet,
        }
    }

    /// The constant ray `c_l`.
    pub fn const_ray(l: Q, alphabet: Alphabet) -> Element {
        Element {
            rho: l,
            jumps: Vec::new(),
            alphabet,
        }
    }

    pub fn rho(&self) -> &Q {
        &self.rho
    }

    pub fn jumps(&self) -> &[Block<Label>] {
        &self.jumps
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Position of the first jump, or `ρ` when there is none.
    pub fn tau(&self) -> Q {
        self.jumps.first().map_or_else(|| self.rho.clone(), Block::first)
    }

    pub fn is_const_ray(&self) -> bool {
        self.jumps.is_empty()
    }

    pub fn normalize(&self) -> Element {
        Element::assemble(self.rho.clone(), self.jumps.clone(), self.alphabet)
    }

    /// Value at `t < ρ`.
    pub fn eval(&self, t: &Q) -> Result<Label> {
        if t >= &self.rho {
            return Err(Error::Domain(format!(
                "evaluation point {} is not below rho = {}",
                fmt_q(t),
                fmt_q(&self.rho)
            )));
        }
        Ok(eval_blocks(&self.jumps, t, Label::ZERO))
    }

    /// Value on `(ρ − ε, ρ)` for small `ε`; `None` when jumps accumulate at `ρ`.
    pub fn final_value(&self) -> Option<Label> {
        match self.jumps.last() {
            None => Some(Label::ZERO),
            Some(Block::Step { label, .. }) => Some(*label),
            Some(Block::Cluster(c)) => c.at,
        }
    }

    /// The restriction to `(−∞, s)`.
    pub fn prefix(&self, s: &Q) -> Result<Element> {
        if s > &self.rho {
            return Err(Error::Domain(format!(
                "prefix point {} exceeds rho = {}",
                fmt_q(s),
                fmt_q(&self.rho)
            )));
        }
        Ok(Element::assemble(
            s.clone(),
            cut_below(&self.jumps, s, false),
            self.alphabet,
        ))
    }

    /// Extends by the constant `x` on `[ρ, ρ + len)`.
    pub fn extend_step(&self, x: Label, len: &Q) -> Result<Element> {
        if !self.alphabet.contains(x) {
            return Err(Error::Invalid(format!("label {x} outside {}", self.alphabet)));
        }
        if len <= &zero() {
            return Err(Error::Domain("extension length must be positive".into()));
        }
        let mut jumps = self.jumps.clone();
        jumps.push(Block::Step {
            pos: self.rho.clone(),
            label: x,
        });
        Ok(Element::assemble(&self.rho + len, jumps, self.alphabet))
    }

    /// Appends `blocks` (positions `>= ρ`) and moves the endpoint to `rho`.
    pub(crate) fn append(&self, blocks: Vec<Block<Label>>, rho: Q) -> Element {
        let mut jumps = self.jumps.clone();
        jumps.extend(blocks);
        Element::assemble(rho, jumps, self.alphabet)
    }

    /// Jump blocks at positions `>= s`, with a leading step carrying the
    /// value at `s`. Empty when `s >= ρ`.
    pub(crate) fn suffix_from(&self, s: &Q) -> Vec<Block<Label>> {
        if s >= &self.rho {
            return Vec::new();
        }
        let value = eval_blocks(&self.jumps, s, Label::ZERO);
        let mut out = cut_from(&self.jumps, s);
        if out.first().map(Block::first).as_ref() != Some(s) {
            out.insert(
                0,
                Block::Step {
                    pos: s.clone(),
                    label: value,
                },
            );
        }
        out
    }

    /// Replaces the alphabet after checking every label.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Element> {
        Element::new(self.rho.clone(), self.jumps.clone(), alphabet)
    }
}

fn eval_blocks(blocks: &[Block<Label>], t: &Q, init: Label) -> Label {
    let mut cur = init;
    for b in blocks {
        match b {
            Block::Step { pos, label } => {
                if pos > t {
                    break;
                }
                cur = *label;
            }
            Block::Cluster(c) => {
                if &c.limit <= t {
                    cur = c.at.unwrap_or(cur);
                    continue;
                }
                if &c.first() > t {
                    break;
                }
                let n = c.find_copy(t);
                if n > 0 {
                    cur = c.ground;
                }
                return eval_blocks(&c.copy(n), t, cur);
            }
        }
    }
    cur
}

/// Canonical form relative to the value `cur` in force before the list
/// (`None` right after a terminal limit).
fn normalize_blocks(blocks: Vec<Block<Label>>, cur: Option<Label>) -> Vec<Block<Label>> {
    let mut cur = cur;
    let mut work: VecDeque<Block<Label>> = blocks.into();
    let mut out: Vec<Block<Label>> = Vec::new();
    while let Some(b) = work.pop_front() {
        let after_terminal = match out.last() {
            Some(Block::Cluster(c)) if c.is_terminal() => Some(c.limit.clone()),
            _ => None,
        };
        match b {
            Block::Step { pos, label } => {
                if after_terminal.as_ref() == Some(&pos) {
                    if let Some(Block::Cluster(c)) = out.last_mut() {
                        c.at = Some(label);
                    }
                    cur = Some(label);
                } else if cur != Some(label) {
                    out.push(Block::Step { pos, label });
                    cur = Some(label);
                }
            }
            Block::Cluster(mut c) => {
                if let Content::Body(body) = c.content {
                    let body = normalize_blocks(body, Some(c.ground));
                    if body.is_empty() {
                        if let Some(at) = c.at {
                            work.push_front(Block::Step {
                                pos: c.limit,
                                label: at,
                            });
                        }
                        continue;
                    }
                    c.content = Content::Body(body);
                }
                if cur != Some(c.ground) {
                    work.push_front(Block::Cluster(c.tail(1)));
                    for blk in c.copy(0).into_iter().rev() {
                        work.push_front(blk);
                    }
                    continue;
                }
                cur = c.at;
                out.push(Block::Cluster(c));
            }
        }
    }
    out
}

/// Final value of a list started at `init`; `None` after a terminal cluster.
fn end_value(blocks: &[Block<Label>], init: Label) -> Option<Label> {
    match blocks.last() {
        None => Some(init),
        Some(Block::Step { label, .. }) => Some(*label),
        Some(Block::Cluster(c)) => c.at,
    }
}

/// Structural checks. `rho` is `Some` for a top-level list and `None` for a
/// cluster body in slot coordinates.
fn validate_list(blocks: &[Block<Label>], alphabet: &Alphabet, rho: Option<&Q>) -> Result<()> {
    let check_label = |l: &Label| {
        if alphabet.contains(*l) {
            Ok(())
        } else {
            Err(Error::Invalid(format!("label {l} outside {alphabet}")))
        }
    };
    let mut prev_last: Option<Q> = None;
    for (i, b) in blocks.iter().enumerate() {
        match b {
            Block::Step { label, .. } => check_label(label)?,
            Block::Cluster(c) => {
                check_label(&c.ground)?;
                if let Some(at) = &c.at {
                    check_label(at)?;
                }
                if c.offset <= zero() {
                    return Err(Error::Invalid("cluster offset must be positive".into()));
                }
                if c.ratio <= zero() || c.ratio >= one() {
                    return Err(Error::Invalid("cluster ratio must lie in (0,1)".into()));
                }
                match &c.content {
                    Content::Body(body) => {
                        if body.is_empty() {
                            return Err(Error::Invalid("cluster body must be nonempty".into()));
                        }
                        validate_list(body, alphabet, None)?;
                        if end_value(body, c.ground) != Some(c.ground) {
                            return Err(Error::Invalid(
                                "cluster body must end at the cluster's ground label".into(),
                            ));
                        }
                    }
                    Content::Ramp {
                        gamma, deriv, up, ..
                    } => {
                        check_label(up)?;
                        if !gamma.is_limit() {
                            return Err(Error::Invalid(format!(
                                "ramp gamma must be a limit ordinal, got {gamma}"
                            )));
                        }
                        if *deriv != 0 {
                            return Err(Error::Invalid("element ramps cannot be differentiated".into()));
                        }
                        if up == &c.ground {
                            return Err(Error::Invalid("ramp up label must differ from ground".into()));
                        }
                    }
                }
                if c.is_terminal() {
                    let last_top = rho.is_some() && i + 1 == blocks.len();
                    if !last_top || rho != Some(&c.limit) {
                        return Err(Error::Invalid(
                            "only the last top-level cluster may be terminal, with limit = rho".into(),
                        ));
                    }
                }
            }
        }
        let first = b.first();
        if let Some(p) = &prev_last {
            if &first <= p {
                return Err(Error::Invalid(format!(
                    "blocks must be disjoint and increasing (position {} after {})",
                    fmt_q(&first),
                    fmt_q(p)
                )));
            }
        }
        let last = b.last();
        match rho {
            Some(r) => {
                let terminal = matches!(b, Block::Cluster(c) if c.is_terminal());
                if !terminal && &last >= r {
                    return Err(Error::Invalid(format!(
                        "jump position {} >= rho {}",
                        fmt_q(&last),
                        fmt_q(r)
                    )));
                }
            }
            None => {
                if first < zero() || last >= one() {
                    return Err(Error::Invalid("cluster body must lie in [0,1)".into()));
                }
            }
        }
        prev_last = Some(last);
    }
    Ok(())
}

/// A pulse `[Step(0, 1), Step(1/2, 0)]` in slot coordinates.
pub fn pulse() -> Vec<Block<Label>> {
    vec![
        Block::Step {
            pos: q(0),
            label: Label(1),
        },
        Block::Step {
            pos: crate::rational::half(),
            label: Label::ZERO,
        },
    ]
}

/// Convenience constructor for a cluster block with ground 0.
pub fn lim_block(limit: Q, offset: Q, ratio: Q, body: Vec<Block<Label>>, at: Option<Label>) -> Block<Label> {
    Block::Cluster(Cluster {
        limit,
        offset,
        ratio,
        ground: Label::ZERO,
        content: Content::Body(body),
        at,
    })
}

pub fn step(pos: Q, label: u64) -> Block<Label> {
    Block::Step {
        pos,
        label: Label(label),
    }
}
