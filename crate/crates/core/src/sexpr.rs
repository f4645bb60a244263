//! Text syntax for elements, point sets and alphabets.
//!
//! ```text
//! (alphabet finite 3)
//! (elem :rho 1 :jumps [(lim :at 0 :off 1 :ratio 1/2 :body [(step 0 1) (step 1/2 0)] :label 1)])
//! ```
//!
//! Optional keys: `:ground` (default 0) on clusters, `:up` (default 1) and
//! `:skip` (default 0) on ramps, `:deriv` (default 0) on point-set ramps.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::block::{Block, Cluster, Content};
use crate::cbrank::PointSet;
use crate::element::{Alphabet, Element, Label};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::rational::{fmt_q, parse_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sx {
    Atom(String, Pos),
    List(Vec<Sx>, Pos),
    Vector(Vec<Sx>, Pos),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Sx {
    pub fn pos(&self) -> Pos {
        match self {
            Sx::Atom(_, p) | Sx::List(_, p) | Sx::Vector(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sx::Atom(s, _) => Some(s),
            _ => None,
        }
    }

    /// Items of a `( … )` list whose head is the symbol `head`.
    pub fn form(&self, head: &str) -> Option<&[Sx]> {
        match self {
            Sx::List(items, _) if items.first().and_then(Sx::atom) == Some(head) => Some(&items[1..]),
            _ => None,
        }
    }
}

pub fn err_at(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

/// Reads every top-level expression in `src`. `;` starts a comment.
pub fn read_all(src: &str) -> Result<Vec<Sx>> {
    let mut tokens = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let line = line.split(';').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: ln + 1,
                column: i + 1,
            };
            if c.is_whitespace() {
                i += 1;
            } else if "()[]".contains(c) {
                tokens.push((c.to_string(), pos));
                i += 1;
            } else {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !"()[]".contains(chars[i]) {
                    i += 1;
                }
                tokens.push((chars[start..i].iter().collect(), pos));
            }
        }
    }
    let mut iter = tokens.into_iter().peekable();
    let mut out = Vec::new();
    while iter.peek().is_some() {
        out.push(read_one(&mut iter)?);
    }
    Ok(out)
}

fn read_one(iter: &mut std::iter::Peekable<std::vec::IntoIter<(String, Pos)>>) -> Result<Sx> {
    let (tok, pos) = iter.next().ok_or_else(|| err_at(Pos::default(), "unexpected end of input"))?;
    let close = match tok.as_str() {
        "(" => ")",
        "[" => "]",
        ")" | "]" => return Err(err_at(pos, format!("unexpected `{tok}`"))),
        _ => return Ok(Sx::Atom(tok, pos)),
    };
    let mut items = Vec::new();
    loop {
        match iter.peek() {
            None => return Err(err_at(pos, format!("unclosed `{tok}`"))),
            Some((t, p)) if t == ")" || t == "]" => {
                if t != close {
                    return Err(err_at(*p, format!("expected `{close}`, found `{t}`")));
                }
                iter.next();
                break;
            }
            Some(_) => items.push(read_one(iter)?),
        }
    }
    Ok(if close == ")" {
        Sx::List(items, pos)
    } else {
        Sx::Vector(items, pos)
    })
}

pub fn read_one_expr(src: &str) -> Result<Sx> {
    let mut all = read_all(src)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(err_at(Pos { line: 1, column: 1 }, "empty input")),
        _ => Err(err_at(all[1].pos(), "trailing input")),
    }
}

fn q_of(sx: &Sx) -> Result<Q> {
    let s = sx.atom().ok_or_else(|| err_at(sx.pos(), "expected a rational"))?;
    parse_q(s).map_err(|e| err_at(sx.pos(), e.to_string()))
}

fn nat_of(sx: &Sx) -> Result<u64> {
    let s = sx.atom().ok_or_else(|| err_at(sx.pos(), "expected a natural number"))?;
    s.parse().map_err(|_| err_at(sx.pos(), format!("bad natural `{s}`")))
}

fn ord_of(sx: &Sx) -> Result<Ordinal> {
    let s = sx.atom().ok_or_else(|| err_at(sx.pos(), "expected an ordinal"))?;
    s.parse().map_err(|e: Error| err_at(sx.pos(), e.to_string()))
}

fn bool_of(sx: &Sx) -> Result<bool> {
    match sx.atom() {
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        _ => Err(err_at(sx.pos(), "expected true or false")),
    }
}

fn vector_of(sx: &Sx) -> Result<&[Sx]> {
    match sx {
        Sx::Vector(v, _) => Ok(v),
        _ => Err(err_at(sx.pos(), "expected `[ … ]`")),
    }
}

/// Keyword arguments of a form, checked against the allowed keys.
struct Keys<'a> {
    map: BTreeMap<&'a str, &'a Sx>,
    pos: Pos,
}

impl<'a> Keys<'a> {
    fn new(items: &'a [Sx], pos: Pos, allowed: &[&str]) -> Result<Self> {
        if items.len() % 2 != 0 {
            return Err(err_at(pos, "keyword without a value"));
        }
        let mut map = BTreeMap::new();
        for pair in items.chunks(2) {
            let key = pair[0]
                .atom()
                .and_then(|k| k.strip_prefix(':'))
                .ok_or_else(|| err_at(pair[0].pos(), "expected a `:keyword`"))?;
            if !allowed.contains(&key) {
                return Err(err_at(pair[0].pos(), format!("unknown key `:{key}`")));
            }
            if map.insert(key, &pair[1]).is_some() {
                return Err(err_at(pair[0].pos(), format!("duplicate key `:{key}`")));
            }
        }
        Ok(Keys { map, pos })
    }

    fn get(&self, key: &str) -> Option<&'a Sx> {
        self.map.get(key).copied()
    }

    fn need(&self, key: &str) -> Result<&'a Sx> {
        self.get(key).ok_or_else(|| err_at(self.pos, format!("missing `:{key}`")))
    }
}

fn form_parts(sx: &Sx) -> Result<(&str, &[Sx], Pos)> {
    match sx {
        Sx::List(items, pos) => {
            let head = items.first().and_then(Sx::atom).ok_or_else(|| err_at(*pos, "expected a form"))?;
            Ok((head, &items[1..], *pos))
        }
        _ => Err(err_at(sx.pos(), "expected a form `( … )`")),
    }
}

// ---- elements ----

pub fn alphabet_to_string(a: Alphabet) -> String {
    a.to_string()
}

pub fn parse_alphabet(sx: &Sx) -> Result<Alphabet> {
    let items = sx
        .form("alphabet")
        .ok_or_else(|| err_at(sx.pos(), "expected `(alphabet …)`"))?;
    match items {
        [kind] if kind.atom() == Some("countable") => Ok(Alphabet::Countable),
        [kind, m] if kind.atom() == Some("finite") => {
            let m = nat_of(m)?;
            if m < 2 {
                return Err(err_at(sx.pos(), "a finite alphabet needs at least 2 labels"));
            }
            Ok(Alphabet::Finite(m))
        }
        _ => Err(err_at(sx.pos(), "expected `(alphabet finite M)` or `(alphabet countable)`")),
    }
}

fn write_label_blocks(out: &mut String, blocks: &[Block<Label>]) {
    out.push('[');
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        match b {
            Block::Step { pos, label } => {
                let _ = write!(out, "(step {} {})", fmt_q(pos), label);
            }
            Block::Cluster(c) => {
                let head = if matches!(c.content, Content::Body(_)) { "lim" } else { "ramp" };
                let _ = write!(
                    out,
                    "({head} :at {} :off {} :ratio {}",
                    fmt_q(&c.limit),
                    fmt_q(&c.offset),
                    fmt_q(&c.ratio)
                );
                if c.ground != Label::ZERO {
                    let _ = write!(out, " :ground {}", c.ground);
                }
                match &c.content {
                    Content::Body(body) => {
                        out.push_str(" :body ");
                        write_label_blocks(out, body);
                    }
                    Content::Ramp { gamma, skip, up, .. } => {
                        let _ = write!(out, " :gamma {}", compact_ordinal(gamma));
                        if *up != Label(1) {
                            let _ = write!(out, " :up {up}");
                        }
                        if *skip != 0 {
                            let _ = write!(out, " :skip {skip}");
                        }
                    }
                }
                match &c.at {
                    Some(l) => {
                        let _ = write!(out, " :label {l})");
                    }
                    None => out.push_str(" :terminal true)"),
                }
            }
        }
    }
    out.push(']');
}

fn compact_ordinal(o: &Ordinal) -> String {
    o.to_string().replace(' ', "")
}

pub fn element_to_string(f: &Element) -> String {
    let mut out = format!("(elem :rho {} :jumps ", fmt_q(f.rho()));
    write_label_blocks(&mut out, f.jumps());
    out.push(')');
    out
}

/// Header line plus element, newline-terminated.
pub fn element_file(f: &Element) -> String {
    format!("{}\n{}\n", f.alphabet(), element_to_string(f))
}

fn parse_label_blocks(items: &[Sx]) -> Result<Vec<Block<Label>>> {
    items.iter().map(parse_label_block).collect()
}

fn parse_label_block(sx: &Sx) -> Result<Block<Label>> {
    let (head, items, pos) = form_parts(sx)?;
    match head {
        "step" => match items {
            [p, l] => Ok(Block::Step {
                pos: q_of(p)?,
                label: Label(nat_of(l)?),
            }),
            _ => Err(err_at(pos, "expected `(step Q LABEL)`")),
        },
        "lim" | "ramp" => {
            let allowed: &[&str] = if head == "lim" {
                &["at", "off", "ratio", "ground", "body", "label", "terminal"]
            } else {
                &["at", "off", "ratio", "ground", "gamma", "up", "skip", "label", "terminal"]
            };
            let k = Keys::new(items, pos, allowed)?;
            let terminal = k.get("terminal").map(bool_of).transpose()?.unwrap_or(false);
            let at = match (k.get("label"), terminal) {
                (Some(l), false) => Some(Label(nat_of(l)?)),
                (None, true) => None,
                (Some(_), true) => return Err(err_at(pos, "a terminal cluster has no `:label`")),
                (None, false) => return Err(err_at(pos, "missing `:label` (or `:terminal true`)")),
            };
            let ground = k.get("ground").map(nat_of).transpose()?.map(Label).unwrap_or(Label::ZERO);
            let content = if head == "lim" {
                Content::Body(parse_label_blocks(vector_of(k.need("body")?)?)?)
            } else {
                Content::Ramp {
                    gamma: ord_of(k.need("gamma")?)?,
                    deriv: 0,
                    skip: k.get("skip").map(nat_of).transpose()?.unwrap_or(0),
                    up: k.get("up").map(nat_of).transpose()?.map(Label).unwrap_or(Label(1)),
                }
            };
            Ok(Block::Cluster(Cluster {
                limit: q_of(k.need("at")?)?,
                offset: q_of(k.need("off")?)?,
                ratio: q_of(k.need("ratio")?)?,
                ground,
                content,
                at,
            }))
        }
        other => Err(err_at(pos, format!("unknown block `{other}`"))),
    }
}

/// Parses an `(elem …)` form over a known alphabet.
pub fn parse_elem(sx: &Sx, alphabet: Alphabet) -> Result<Element> {
    let items = sx.form("elem").ok_or_else(|| err_at(sx.pos(), "expected `(elem …)`"))?;
    let k = Keys::new(items, sx.pos(), &["rho", "jumps"])?;
    let rho = q_of(k.need("rho")?)?;
    let jumps = parse_label_blocks(vector_of(k.need("jumps")?)?)?;
    Element::new(rho, jumps, alphabet).map_err(|e| err_at(sx.pos(), e.to_string()))
}

/// Parses a file: an alphabet header followed by one element.
pub fn parse_element_file(src: &str) -> Result<Element> {
    let all = read_all(src)?;
    match &all[..] {
        [header, elem] => parse_elem(elem, parse_alphabet(header)?),
        [] => Err(err_at(Pos { line: 1, column: 1 }, "empty input")),
        [one] => Err(err_at(one.pos(), "expected an alphabet header followed by an element")),
        [_, _, extra, ..] => Err(err_at(extra.pos(), "trailing input")),
    }
}

// ---- point sets ----

pub(crate) fn set_blocks_to_string(blocks: &[Block<()>]) -> String {
    let mut out = String::new();
    write_set_blocks(&mut out, blocks);
    out
}

fn write_set_blocks(out: &mut String, blocks: &[Block<()>]) {
    out.push('[');
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        match b {
            Block::Step { pos, .. } => {
                let _ = write!(out, "(atom {})", fmt_q(pos));
            }
            Block::Cluster(c) => {
                let head = if matches!(c.content, Content::Body(_)) { "lim" } else { "ramp" };
                let _ = write!(
                    out,
                    "({head} :at {} :off {} :ratio {}",
                    fmt_q(&c.limit),
                    fmt_q(&c.offset),
                    fmt_q(&c.ratio)
                );
                match &c.content {
                    Content::Body(body) => {
                        out.push_str(" :body ");
                        write_set_blocks(out, body);
                    }
                    Content::Ramp {
                        gamma, deriv, skip, ..
                    } => {
                        let _ = write!(out, " :gamma {}", compact_ordinal(gamma));
                        if *deriv != 0 {
                            let _ = write!(out, " :deriv {deriv}");
                        }
                        if *skip != 0 {
                            let _ = write!(out, " :skip {skip}");
                        }
                    }
                }
                out.push(')');
            }
        }
    }
    out.push(']');
}

fn parse_set_block(sx: &Sx) -> Result<Block<()>> {
    let (head, items, pos) = form_parts(sx)?;
    match head {
        "atom" => match items {
            [p] => Ok(Block::Step { pos: q_of(p)?, label: () }),
            _ => Err(err_at(pos, "expected `(atom Q)`")),
        },
        "lim" | "ramp" => {
            let allowed: &[&str] = if head == "lim" {
                &["at", "off", "ratio", "body"]
            } else {
                &["at", "off", "ratio", "gamma", "deriv", "skip"]
            };
            let k = Keys::new(items, pos, allowed)?;
            let content = if head == "lim" {
                Content::Body(vector_of(k.need("body")?)?.iter().map(parse_set_block).collect::<Result<_>>()?)
            } else {
                let deriv = k.get("deriv").map(nat_of).transpose()?.unwrap_or(0);
                Content::Ramp {
                    gamma: ord_of(k.need("gamma")?)?,
                    deriv: u32::try_from(deriv).map_err(|_| err_at(pos, "`:deriv` too large"))?,
                    skip: k.get("skip").map(nat_of).transpose()?.unwrap_or(0),
                    up: (),
                }
            };
            Ok(Block::Cluster(Cluster {
                limit: q_of(k.need("at")?)?,
                offset: q_of(k.need("off")?)?,
                ratio: q_of(k.need("ratio")?)?,
                ground: (),
                content,
                at: Some(()),
            }))
        }
        other => Err(err_at(pos, format!("unknown set block `{other}`"))),
    }
}

/// Parses `(set [ … ])`. No structural validation beyond syntax.
pub fn parse_set(src: &str) -> Result<PointSet> {
    let sx = read_one_expr(src)?;
    let items = sx.form("set").ok_or_else(|| err_at(sx.pos(), "expected `(set [ … ])`"))?;
    match items {
        [v] => Ok(PointSet::from_blocks(
            vector_of(v)?.iter().map(parse_set_block).collect::<Result<_>>()?,
        )),
        _ => Err(err_at(sx.pos(), "expected `(set [ … ])`")),
    }
}
