//! The prefix order, the wedge (greatest lower bound), the tree metric, and
//! directions at a point.
//!
//! Everything reduces to one decision procedure: the position where two
//! elements first disagree. Both jump lists are merged as event streams in
//! increasing position order. Clusters are unfolded lazily one copy at a
//! time, and two structurally identical clusters are skipped whole. When two
//! self-similar cluster tails with a common limit recur in the same relative
//! scale, the streams provably agree up to that limit.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::Signed;

use crate::block::{Block, Cluster, Content};
use crate::element::{Alphabet, Element, Label};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, one, Q};

pub const DEFAULT_UNFOLD_CAP: usize = 100_000;

static UNFOLD_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_UNFOLD_CAP);

/// Sets the number of merge events after which comparisons give up with
/// [`Error::Undecided`].
pub fn set_unfold_cap(cap: usize) {
    UNFOLD_CAP.store(cap.max(1), Ordering::Relaxed);
}

pub fn unfold_cap() -> usize {
    UNFOLD_CAP.load(Ordering::Relaxed)
}

fn same_alphabet(f: &Element, g: &Element) -> Result<()> {
    if f.alphabet() != g.alphabet() {
        return Err(Error::AlphabetMismatch(
            f.alphabet().to_string(),
            g.alphabet().to_string(),
        ));
    }
    Ok(())
}

/// Cycle-detection key: a cluster with its scale and limit value erased.
fn shape(c: &Cluster<Label>) -> Cluster<Label> {
    let mut s = c.clone();
    s.offset = one();
    s.at = None;
    s
}

fn same_up_to_limit(a: &Cluster<Label>, b: &Cluster<Label>) -> bool {
    a.limit == b.limit
        && a.offset == b.offset
        && a.ratio == b.ratio
        && a.ground == b.ground
        && a.content == b.content
}

fn unfold_front(queue: &mut VecDeque<Block<Label>>) {
    let Some(Block::Cluster(c)) = queue.pop_front() else {
        unreachable!("unfold_front on a non-cluster");
    };
    queue.push_front(Block::Cluster(c.tail(1)));
    for b in c.copy(0).into_iter().rev() {
        queue.push_front(b);
    }
}

/// Replaces a front cluster by the event at its limit.
fn close_front(queue: &mut VecDeque<Block<Label>>) {
    let Some(Block::Cluster(c)) = queue.pop_front() else {
        unreachable!("close_front on a non-cluster");
    };
    if let Some(at) = c.at {
        queue.push_front(Block::Step {
            pos: c.limit,
            label: at,
        });
    }
}

/// Supremum of the `t` with `f = g` on `(−∞, t)`, capped at `min(ρ_f, ρ_g)`.
pub fn divergence(f: &Element, g: &Element) -> Result<Q> {
    divergence_with_cap(f, g, unfold_cap())
}

/// [`divergence`] with an explicit event budget.
pub fn divergence_with_cap(f: &Element, g: &Element, cap: usize) -> Result<Q> {
    same_alphabet(f, g)?;
    let end = f.rho().min(g.rho()).clone();
    let mut qf: VecDeque<Block<Label>> = f.jumps().iter().cloned().collect();
    let mut qg: VecDeque<Block<Label>> = g.jumps().iter().cloned().collect();
    let mut seen: HashSet<(Cluster<Label>, Cluster<Label>, Q)> = HashSet::new();
    for _ in 0..cap {
        let pf = qf.front().map(Block::first);
        let pg = qg.front().map(Block::first);
        let p = match (pf, pg) {
            (None, None) => return Ok(end),
            (Some(p), None) | (None, Some(p)) => return Ok(p.min(end)),
            (Some(a), Some(b)) if a != b => return Ok(a.min(b).min(end)),
            (Some(a), Some(_)) => a,
        };
        if p >= end {
            return Ok(end);
        }
        match (qf.front().unwrap(), qg.front().unwrap()) {
            (Block::Step { label: a, .. }, Block::Step { label: b, .. }) => {
                if a != b {
                    return Ok(p);
                }
                qf.pop_front();
                qg.pop_front();
            }
            (Block::Step { .. }, Block::Cluster(_)) => unfold_front(&mut qg),
            (Block::Cluster(_), Block::Step { .. }) => unfold_front(&mut qf),
            (Block::Cluster(a), Block::Cluster(b)) => {
                if same_up_to_limit(a, b) {
                    close_front(&mut qf);
                    close_front(&mut qg);
                    continue;
                }
                let self_similar = matches!(a.content, Content::Body(_))
                    && matches!(b.content, Content::Body(_));
                if a.limit == b.limit && self_similar {
                    let key = (shape(a), shape(b), &a.offset / &b.offset);
                    if !seen.insert(key) {
                        close_front(&mut qf);
                        close_front(&mut qg);
                        continue;
                    }
                }
                unfold_front(&mut qf);
                unfold_front(&mut qg);
            }
        }
    }
    Err(Error::Undecided { events: cap })
}

/// The greatest lower bound `f ∧ g`.
pub fn wedge(f: &Element, g: &Element) -> Result<Element> {
    let s = divergence(f, g)?;
    f.prefix(&s)
}

/// `d(f, g) = ρ_f + ρ_g − 2ρ_{f∧g}`.
pub fn dist(f: &Element, g: &Element) -> Result<Q> {
    let s = divergence(f, g)?;
    Ok(f.rho() + g.rho() - s * Q::from_integer(2.into()))
}

/// `f ⪯ g`: `f` is a prefix of `g`.
pub fn leq(f: &Element, g: &Element) -> Result<bool> {
    Ok(&divergence(f, g)? == f.rho())
}

/// Semantic equality (distance zero).
pub fn same_point(f: &Element, g: &Element) -> Result<bool> {
    Ok(f.rho() == g.rho() && leq(f, g)?)
}

/// The point at distance `t` from `f` on the geodesic `[f, g]`.
pub fn point_on_segment(f: &Element, g: &Element, t: &Q) -> Result<Element> {
    let s = divergence(f, g)?;
    let total = f.rho() + g.rho() - &s - &s;
    if t.is_negative() || t > &total {
        return Err(Error::Domain(format!(
            "segment parameter {} outside [0, {}]",
            fmt_q(t),
            fmt_q(&total)
        )));
    }
    let down = f.rho() - &s;
    if t <= &down {
        f.prefix(&(f.rho() - t))
    } else {
        g.prefix(&(s + (t - down)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DirectionId {
    Down,
    Up(Label),
}

impl fmt::Display for DirectionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DirectionId::Down => write!(f, "down"),
            DirectionId::Up(l) => write!(f, "up {l}"),
        }
    }
}

/// The component of `T − {x}` containing `g`.
pub fn classify_direction(x: &Element, g: &Element) -> Result<DirectionId> {
    let s = divergence(g, x)?;
    if &s < x.rho() {
        return Ok(DirectionId::Down);
    }
    if g.rho() == x.rho() {
        return Err(Error::Domain("the probe coincides with the base point".into()));
    }
    Ok(DirectionId::Up(g.eval(x.rho())?))
}

/// One representative per direction at `x`: the point one unit below and
/// one single-step extension per label.
pub fn enumerate_directions(x: &Element) -> Result<Vec<(DirectionId, Element)>> {
    let Alphabet::Finite(_) = x.alphabet() else {
        return Err(Error::Domain(
            "directions cannot be enumerated over a countable alphabet; classify explicit probes instead".into(),
        ));
    };
    let mut out = vec![(DirectionId::Down, x.prefix(&(x.rho() - one()))?)];
    for c in x.alphabet().labels().into_iter().flatten() {
        out.push((DirectionId::Up(c), x.extend_step(c, &one())?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{lim_block, pulse, step};
    use crate::rational::{half, q, q_frac};

    const A3: Alphabet = Alphabet::Finite(3);

    fn c(r: Q) -> Element {
        Element::const_ray(r, A3)
    }
    fn e1() -> Element {
        Element::new(q(1), vec![step(q(0), 1)], A3).unwrap()
    }
    fn e2() -> Element {
        Element::new(q(1), vec![step(q(0), 2)], A3).unwrap()
    }
    fn e3() -> Element {
        Element::new(q(1), vec![lim_block(q(0), q(1), half(), pulse(), Some(Label(1)))], A3).unwrap()
    }

    /// Divergence point by bisection over sampled evaluations.
    fn sampled_divergence(f: &Element, g: &Element, lo: Q, hi: Q) -> Q {
        let mut lo = lo;
        let mut hi = hi;
        for _ in 0..40 {
            let mid = (&lo + &hi) / q(2);
            // agree on a grid below mid?
            let agree = (0..64).all(|i| {
                let t = &lo + (&mid - &lo) * q_frac(i, 64);
                f.eval(&t).unwrap() == g.eval(&t).unwrap()
            });
            if agree {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge(&c(q(3)), &c(q(5))).unwrap(), c(q(3)));
        assert_eq!(wedge(&e1(), &e2()).unwrap(), c(q(0)));
        assert_eq!(wedge(&e1(), &e3()).unwrap(), c(q(-1)));
        let approx = sampled_divergence(&e1(), &e3(), q(-4), q(1));
        assert!((approx + q(1)).abs() < q_frac(1, 1000));
    }

    #[test]
    fn dist_examples() {
        assert_eq!(dist(&c(q(0)), &c(q_frac(7, 2))).unwrap(), q_frac(7, 2));
        assert_eq!(dist(&e1(), &e2()).unwrap(), q(2));
        assert_eq!(dist(&e1(), &e3()).unwrap(), q(4));
        assert_eq!(dist(&e3(), &e3()).unwrap(), q(0));
    }

    #[test]
    fn leq_examples() {
        assert!(leq(&c(q(-1)), &e1()).unwrap());
        assert!(!leq(&e1(), &e2()).unwrap());
        assert!(leq(&e3().prefix(&q_frac(-1, 4)).unwrap(), &e3()).unwrap());
        assert!(leq(&e3().prefix(&q(0)).unwrap(), &e3()).unwrap());
    }

    #[test]
    fn aliased_clusters_compare_equal() {
        // Ratio 1/4 with a doubled pulse body denotes the same function as E3.
        let doubled = vec![
            step(q(0), 1),
            step(q_frac(1, 3), 0),
            step(q_frac(2, 3), 1),
            step(q_frac(5, 6), 0),
        ];
        let alias = Element::new(
            q(1),
            vec![lim_block(q(0), q(1), q_frac(1, 4), doubled, Some(Label(1)))],
            A3,
        )
        .unwrap();
        assert_ne!(alias, e3());
        for i in -400..399 {
            let t = q_frac(i, 399);
            assert_eq!(alias.eval(&t).unwrap(), e3().eval(&t).unwrap());
        }
        assert_eq!(dist(&alias, &e3()).unwrap(), q(0));
        let other = alias.extend_step(Label(2), &q(1)).unwrap();
        assert_eq!(dist(&other, &e3()).unwrap(), q(1));
    }

    #[test]
    fn segment_examples() {
        assert_eq!(point_on_segment(&e1(), &e2(), &q(0)).unwrap(), e1());
        assert_eq!(point_on_segment(&e1(), &e2(), &q(1)).unwrap(), c(q(0)));
        assert_eq!(point_on_segment(&e1(), &e2(), &q(2)).unwrap(), e2());
        assert_eq!(point_on_segment(&c(q(0)), &c(q(4)), &q(3)).unwrap(), c(q(3)));
        assert!(point_on_segment(&e1(), &e2(), &q(3)).is_err());
    }

    #[test]
    fn direction_examples() {
        assert_eq!(classify_direction(&c(q(0)), &c(q(-1))).unwrap(), DirectionId::Down);
        assert_eq!(classify_direction(&c(q(0)), &e1()).unwrap(), DirectionId::Up(Label(1)));
        assert_eq!(classify_direction(&c(q(0)), &e2()).unwrap(), DirectionId::Up(Label(2)));
        assert_eq!(classify_direction(&c(q(0)), &c(q(1))).unwrap(), DirectionId::Up(Label(0)));
        assert!(classify_direction(&e1(), &e1()).is_err());

        let x = Element::const_ray(q(0), Alphabet::Finite(2));
        assert_eq!(enumerate_directions(&x).unwrap().len(), 3);
        let e1_4 = e1().with_alphabet(Alphabet::Finite(3)).unwrap();
        let dirs = enumerate_directions(&e1_4).unwrap();
        assert_eq!(dirs.len(), 4);
        for (id, rep) in &dirs {
            assert_eq!(&classify_direction(&e1_4, rep).unwrap(), id);
        }
        let countable = Element::const_ray(q(0), Alphabet::Countable);
        assert!(enumerate_directions(&countable).is_err());
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let other = Element::const_ray(q(0), Alphabet::Finite(5));
        assert!(matches!(dist(&c(q(0)), &other), Err(Error::AlphabetMismatch(..))));
    }

    #[test]
    fn cap_yields_undecided() {
        let doubled = vec![
            step(q(0), 1),
            step(q_frac(1, 3), 0),
            step(q_frac(2, 3), 1),
            step(q_frac(5, 6), 0),
        ];
        let alias = Element::new(
            q(1),
            vec![lim_block(q(0), q(1), q_frac(1, 4), doubled, Some(Label(1)))],
            A3,
        )
        .unwrap();
        let r = divergence_with_cap(&alias, &e3(), 3);
        assert!(matches!(r, Err(Error::Undecided { events: 3 })));
        assert_eq!(divergence_with_cap(&alias, &e3(), 1000).unwrap(), q(1));
    }
}
