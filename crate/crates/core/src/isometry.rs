//! Explicit isometries as composable expression trees.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::block::{map_affine, map_labels};
use crate::element::{Alphabet, Element, Label};
use crate::error::{Error, Result};
use crate::metric::{dist, divergence};
use crate::rational::{fmt_q, one, zero, Q};
use crate::sexpr::{self, err_at, Sx};

/// A permutation of labels with finite support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Perm {
    map: BTreeMap<Label, Label>,
}

impl Perm {
    pub fn identity() -> Self {
        Perm::default()
    }

    pub fn swap(a: u64, b: u64) -> Self {
        if a == b {
            return Perm::identity();
        }
        Perm::from_cycles(&[vec![a, b]]).expect("a transposition is a permutation")
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(cycles: &[Vec<u64>]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if map.insert(Label(x), Label(y)).is_some() {
                    return Err(Error::Invalid(format!("label {x} occurs twice in the cycles")));
                }
            }
        }
        map.retain(|k, v| k != v);
        Ok(Perm { map })
    }

    pub fn apply(&self, l: Label) -> Label {
        self.map.get(&l).copied().unwrap_or(l)
    }

    pub fn inverse(&self) -> Perm {
        Perm {
            map: self.map.iter().map(|(k, v)| (*v, *k)).collect(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = Label> + '_ {
        self.map.keys().copied()
    }

    /// Disjoint cycles, each starting at its least label.
    pub fn cycles(&self) -> Vec<Vec<u64>> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.map.keys() {
            if !seen.insert(start) {
                continue;
            }
            let mut cycle = vec![start.0];
            let mut cur = self.apply(start);
            while cur != start {
                seen.insert(cur);
                cycle.push(cur.0);
                cur = self.apply(cur);
            }
            out.push(cycle);
        }
        out
    }

    fn check(&self, alphabet: Alphabet) -> Result<()> {
        match self.support().find(|l| !alphabet.contains(*l)) {
            Some(l) => Err(Error::Invalid(format!("permutation moves label {l}, outside {alphabet}"))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Isometry {
    Id,
    Translate(Q),
    Reflect,
    BranchSwap(Element),
    DirPerm(Element, Perm),
    Relabel(Perm),
    /// Applied right to left.
    Compose(Vec<Isometry>),
}

pub fn translate(r: Q) -> Isometry {
    Isometry::Translate(r)
}

pub fn reflect() -> Isometry {
    Isometry::Reflect
}

pub fn branch_swap(a: Element) -> Isometry {
    Isometry::BranchSwap(a)
}

pub fn dir_perm(x: Element, sigma: Perm) -> Isometry {
    Isometry::DirPerm(x, sigma)
}

/// A global relabeling; `sigma` must fix 0.
pub fn relabel(sigma: Perm) -> Result<Isometry> {
    if sigma.apply(Label::ZERO) != Label::ZERO {
        return Err(Error::Invalid("a global relabeling must fix label 0".into()));
    }
    Ok(Isometry::Relabel(sigma))
}

/// Flattens nested compositions and drops identity factors.
pub fn compose(list: Vec<Isometry>) -> Isometry {
    let mut flat = Vec::new();
    for phi in list {
        match phi {
            Isometry::Id => {}
            Isometry::Translate(r) if r.is_zero() => {}
            Isometry::Compose(inner) => flat.extend(inner),
            other => flat.push(other),
        }
    }
    match flat.len() {
        0 => Isometry::Id,
        1 => flat.pop().unwrap(),
        _ => Isometry::Compose(flat),
    }
}

pub fn invert(phi: &Isometry) -> Isometry {
    match phi {
        Isometry::Id | Isometry::Reflect | Isometry::BranchSwap(_) => phi.clone(),
        Isometry::Translate(r) => Isometry::Translate(-r),
        Isometry::DirPerm(x, s) => Isometry::DirPerm(x.clone(), s.inverse()),
        Isometry::Relabel(s) => Isometry::Relabel(s.inverse()),
        Isometry::Compose(list) => compose(list.iter().rev().map(invert).collect()),
    }
}

fn same_alphabet(a: &Element, f: &Element) -> Result<()> {
    if a.alphabet() != f.alphabet() {
        return Err(Error::AlphabetMismatch(a.alphabet().to_string(), f.alphabet().to_string()));
    }
    Ok(())
}

pub fn apply(phi: &Isometry, f: &Element) -> Result<Element> {
    match phi {
        Isometry::Id => Ok(f.clone()),
        Isometry::Translate(r) => Ok(Element::assemble(
            f.rho() + r,
            map_affine(f.jumps(), &one(), r),
            f.alphabet(),
        )),
        Isometry::Reflect => {
            let shift = -(f.tau() * Q::from_integer(2.into()));
            Ok(Element::assemble(
                f.rho() + &shift,
                map_affine(f.jumps(), &one(), &shift),
                f.alphabet(),
            ))
        }
        Isometry::BranchSwap(a) => {
            same_alphabet(a, f)?;
            apply_branch_swap(a, f)
        }
        Isometry::DirPerm(x, sigma) => {
            same_alphabet(x, f)?;
            sigma.check(f.alphabet())?;
            let above = f.rho() > x.rho() && &divergence(f, x)? == x.rho();
            if !above {
                return Ok(f.clone());
            }
            let tail = map_labels(&f.suffix_from(x.rho()), &|l: &Label| sigma.apply(*l));
            Ok(x.append(tail, f.rho().clone()))
        }
        Isometry::Relabel(sigma) => {
            sigma.check(f.alphabet())?;
            Ok(Element::assemble(
                f.rho().clone(),
                map_labels(f.jumps(), &|l: &Label| sigma.apply(*l)),
                f.alphabet(),
            ))
        }
        Isometry::Compose(list) => list.iter().rev().try_fold(f.clone(), |g, phi| apply(phi, &g)),
    }
}

fn apply_branch_swap(a: &Element, b: &Element) -> Result<Element> {
    if a.is_const_ray() {
        return Ok(b.clone());
    }
    let tau = a.tau();
    let top = Element::const_ray(a.rho().clone(), a.alphabet());
    let along_a = divergence(b, a)?;
    let along_top = divergence(b, &top)?;
    let head = if along_a > tau {
        // b leaves a above τ_a: replace the part on a by the ray
        top.prefix(&along_a)?
    } else if along_top > tau {
        a.prefix(&along_top)?
    } else {
        return Ok(b.clone());
    };
    let sigma = head.rho().clone();
    // The directions at the branch point are exchanged too: the one along
    // a and the one along the ray.
    let swap = if &sigma < a.rho() {
        Perm::swap(0, a.eval(&sigma)?.0)
    } else {
        Perm::identity()
    };
    let tail = map_labels(&b.suffix_from(&sigma), &|l: &Label| swap.apply(*l));
    Ok(head.append(tail, b.rho().clone()))
}

/// Sends `p1` to `c_0` and `p2` to `c_r`, `r = d(p1, p2)`.
fn normalizer(p1: &Element, p2: &Element) -> Result<Isometry> {
    let phi1 = branch_swap(p1.clone());
    let phi2 = translate(-p1.rho());
    let moved = apply(&phi2, &apply(&phi1, p2)?)?;
    let mut steps = vec![phi2, phi1];
    let moved = if moved.tau() < zero() {
        steps.insert(0, reflect());
        apply(&Isometry::Reflect, &moved)?
    } else {
        moved
    };
    steps.insert(0, branch_swap(moved));
    Ok(compose(steps))
}

/// An isometry with `a1 ↦ b1` and `a2 ↦ b2`.
pub fn two_point_map(a1: &Element, a2: &Element, b1: &Element, b2: &Element) -> Result<Isometry> {
    for e in [a2, b1, b2] {
        same_alphabet(a1, e)?;
    }
    let (da, db) = (dist(a1, a2)?, dist(b1, b2)?);
    if da != db {
        return Err(Error::Domain(format!(
            "distances differ: d(a1, a2) = {} but d(b1, b2) = {}",
            fmt_q(&da),
            fmt_q(&db)
        )));
    }
    let phi = normalizer(a1, a2)?;
    let psi = normalizer(b1, b2)?;
    Ok(compose(vec![invert(&psi), phi]))
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cycles()
            .iter()
            .map(|c| {
                let items: Vec<String> = c.iter().map(u64::to_string).collect();
                format!("(cycle {})", items.join(" "))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let with_perm = |f: &mut fmt::Formatter<'_>, head: String, p: &Perm| {
            if p.map.is_empty() {
                write!(f, "({head})")
            } else {
                write!(f, "({head} {p})")
            }
        };
        match self {
            Isometry::Id => write!(f, "(id)"),
            Isometry::Translate(r) => write!(f, "(translate {})", fmt_q(r)),
            Isometry::Reflect => write!(f, "(reflect)"),
            Isometry::BranchSwap(a) => write!(f, "(branch-swap {})", sexpr::element_to_string(a)),
            Isometry::DirPerm(x, p) => with_perm(f, format!("dir-perm {}", sexpr::element_to_string(x)), p),
            Isometry::Relabel(p) => with_perm(f, "relabel".into(), p),
            Isometry::Compose(list) => {
                write!(f, "(compose")?;
                for phi in list {
                    write!(f, " {phi}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn parse_cycles(items: &[Sx]) -> Result<Perm> {
    let mut cycles = Vec::new();
    for sx in items {
        let c = sx.form("cycle").ok_or_else(|| err_at(sx.pos(), "expected `(cycle L …)`"))?;
        let labels = c
            .iter()
            .map(|l| {
                l.atom()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err_at(l.pos(), "expected a label"))
            })
            .collect::<Result<Vec<u64>>>()?;
        if labels.is_empty() {
            return Err(err_at(sx.pos(), "empty cycle"));
        }
        cycles.push(labels);
    }
    Perm::from_cycles(&cycles).map_err(|e| err_at(items[0].pos(), e.to_string()))
}

fn parse_iso(sx: &Sx, alphabet: Alphabet) -> Result<Isometry> {
    let Sx::List(items, pos) = sx else {
        return Err(err_at(sx.pos(), "expected an isometry form"));
    };
    let head = items.first().and_then(Sx::atom).unwrap_or("");
    let args = items.get(1..).unwrap_or(&[]);
    let elem = |i: usize| -> Result<Element> {
        let e = args.get(i).ok_or_else(|| err_at(*pos, "missing element"))?;
        sexpr::parse_elem(e, alphabet)
    };
    match (head, args.len()) {
        ("id", 0) => Ok(Isometry::Id),
        ("reflect", 0) => Ok(Isometry::Reflect),
        ("translate", 1) => {
            let r = args[0].atom().ok_or_else(|| err_at(args[0].pos(), "expected a rational"))?;
            let r = crate::rational::parse_q(r).map_err(|e| err_at(args[0].pos(), e.to_string()))?;
            Ok(Isometry::Translate(r))
        }
        ("branch-swap", 1) => Ok(Isometry::BranchSwap(elem(0)?)),
        ("dir-perm", n) if n >= 1 => {
            let p = if n > 1 { parse_cycles(&args[1..])? } else { Perm::identity() };
            Ok(Isometry::DirPerm(elem(0)?, p))
        }
        ("relabel", n) => {
            let p = if n > 0 { parse_cycles(args)? } else { Perm::identity() };
            relabel(p).map_err(|e| err_at(*pos, e.to_string()))
        }
        ("compose", _) => Ok(compose(
            args.iter().map(|a| parse_iso(a, alphabet)).collect::<Result<_>>()?,
        )),
        _ => Err(err_at(*pos, format!("unknown isometry form `{head}` with {} arguments", args.len()))),
    }
}

/// Parses isometry syntax; embedded elements use `alphabet`.
pub fn parse_isometry(src: &str, alphabet: Alphabet) -> Result<Isometry> {
    parse_iso(&sexpr::read_one_expr(src)?, alphabet)
}
