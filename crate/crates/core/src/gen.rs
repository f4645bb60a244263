//! Seeded random elements for the property suites.
//!
//! Elements mix steps with clusters nested at most two deep, positions stay
//! in `[-8, 8]`, and many elements are grown from prefixes of earlier ones
//! so that wedges are nontrivial.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::block::{Block, Cluster, Content};
use crate::element::{Alphabet, Element, Label};
use crate::ordinal::Ordinal;
use crate::rational::{half, q, q_frac, Q};

pub struct Gen {
    rng: StdRng,
    alphabet: Alphabet,
    pool: Vec<Element>,
}

const POOL_SIZE: usize = 32;

impl Gen {
    pub fn new(seed: u64, alphabet: Alphabet) -> Self {
        Gen {
            rng: StdRng::seed_from_u64(seed),
            alphabet,
            pool: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn rng(&mut self) -> &mut StdRng {
        &mut self.rng
    }

    /// A rational `k/d` in `[lo, hi]` with a small denominator.
    pub fn rat(&mut self, lo: i64, hi: i64) -> Q {
        let d = [1, 2, 3, 4, 8][self.rng.gen_range(0..5)];
        q_frac(self.rng.gen_range(lo * d..=hi * d), d)
    }

    fn label_count(&self) -> u64 {
        match self.alphabet {
            Alphabet::Finite(m) => m,
            Alphabet::Countable => 5,
        }
    }

    pub fn label(&mut self) -> Label {
        Label(self.rng.gen_range(0..self.label_count()))
    }

    pub fn label_other(&mut self, cur: Label) -> Label {
        let m = self.label_count();
        Label((cur.0 + self.rng.gen_range(1..m)) % m)
    }

    fn ratio(&mut self) -> Q {
        q_frac(1, self.rng.gen_range(2..=4))
    }

    /// A closed body in `[0, 1)` on `ground`.
    fn body(&mut self, ground: Label, depth: u32) -> Vec<Block<Label>> {
        let k = self.rng.gen_range(1..=3i64);
        let mut out = Vec::new();
        for i in 0..k {
            let start = q_frac(i, k);
            let w = q_frac(1, k);
            if depth > 0 && self.rng.gen_bool(0.4) {
                let at = self.label();
                out.push(Block::Cluster(Cluster {
                    limit: &start + &w * half(),
                    offset: &w * half(),
                    ratio: self.ratio(),
                    ground,
                    content: Content::Body(self.body(ground, depth - 1)),
                    at: Some(at),
                }));
                if at != ground {
                    out.push(Block::Step {
                        pos: &start + &w * q_frac(3, 4),
                        label: ground,
                    });
                }
            } else {
                let up = self.label_other(ground);
                out.push(Block::Step {
                    pos: start.clone(),
                    label: up,
                });
                out.push(Block::Step {
                    pos: start + w * half(),
                    label: ground,
                });
            }
        }
        out
    }

    /// Blocks on `[start, start + len)`, given the value `cur` before them.
    /// Returns the blocks and the value after them (`None` for a terminal
    /// cluster, which then ends the list at `start + len`).
    fn item(&mut self, start: &Q, len: &Q, cur: Option<Label>, last: bool) -> (Vec<Block<Label>>, Option<Label>) {
        let ground = cur.unwrap_or(Label::ZERO);
        let roll = self.rng.gen_range(0..10);
        if roll < 4 || cur.is_none() {
            let l = self.label_other(ground);
            return (vec![Block::Step { pos: start.clone(), label: l }], Some(l));
        }
        let limit = start + len * half();
        let terminal = last && self.rng.gen_bool(0.3);
        let at = if terminal { None } else { Some(self.label()) };
        let content = if roll == 9 {
            Content::Ramp {
                gamma: if self.rng.gen_bool(0.7) { Ordinal::omega() } else { "w*2".parse().unwrap() },
                deriv: 0,
                skip: self.rng.gen_range(0..3),
                up: self.label_other(ground),
            }
        } else {
            let depth = self.rng.gen_range(0..=1);
            Content::Body(self.body(ground, depth))
        };
        let offset = len * half();
        let c = Cluster {
            limit,
            offset,
            ratio: self.ratio(),
            ground,
            content,
            at,
        };
        (vec![Block::Cluster(c)], at)
    }

    /// Appends up to `max_items` random items after `base`, staying below 8.
    fn grow(&mut self, base: &Element, max_items: usize) -> Element {
        let budget = q(8) - base.rho();
        if budget <= q_frac(1, 4) {
            return base.clone();
        }
        // a terminal base needs a step to fix its value at the limit
        let least = usize::from(base.final_value().is_none());
        let n = self.rng.gen_range(least..=max_items.max(least));
        let share = &budget / q(n as i64 + 1);
        let mut pos = base.rho().clone();
        let mut cur = base.final_value();
        let mut blocks = Vec::new();
        for i in 0..n {
            let len = &share * q_frac(self.rng.gen_range(2..=4), 4);
            let (b, next) = self.item(&pos, &len, cur, i + 1 == n);
            blocks.extend(b);
            if next.is_none() {
                return base.append(blocks, pos + len * half());
            }
            cur = next;
            pos += len;
        }
        let tail = &share * q_frac(self.rng.gen_range(1..=4), 4);
        base.append(blocks, pos + tail)
    }

    /// A fresh random element.
    pub fn fresh(&mut self) -> Element {
        let start = self.rat(-8, -2);
        let base = Element::const_ray(start, self.alphabet);
        self.grow(&base, 4)
    }

    /// A random prefix of `base` grown in a new random way.
    pub fn related(&mut self, base: &Element) -> Element {
        let lo = base.tau() - q(1);
        let span = base.rho() - &lo;
        let t = &lo + span * q_frac(self.rng.gen_range(0..=16), 16);
        let p = base.prefix(&t).expect("cut point below rho");
        self.grow(&p, 2)
    }

    /// Draws from a mix of fresh elements and relatives of recent draws.
    pub fn element(&mut self) -> Element {
        let e = if self.pool.is_empty() || self.rng.gen_bool(0.3) {
            self.fresh()
        } else {
            let i = self.rng.gen_range(0..self.pool.len());
            let base = self.pool[i].clone();
            match self.rng.gen_range(0..4) {
                0 => base.prefix(&(base.rho() - self.rat(0, 2))).unwrap_or(base),
                _ => self.related(&base),
            }
        };
        if self.pool.len() < POOL_SIZE {
            self.pool.push(e.clone());
        } else {
            let i = self.rng.gen_range(0..POOL_SIZE);
            self.pool[i] = e.clone();
        }
        e
    }

    /// A successor ordinal below `ω·2 + 4`.
    pub fn successor(&mut self) -> Ordinal {
        let n = self.rng.gen_range(1..=4);
        match self.rng.gen_range(0..3) {
            0 | 1 => Ordinal::finite(n),
            _ => Ordinal::omega().add(&Ordinal::finite(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexpr::{element_file, parse_element_file};

    #[test]
    fn deterministic_and_valid() {
        let mut a = Gen::new(7, Alphabet::Finite(3));
        let mut b = Gen::new(7, Alphabet::Finite(3));
        for _ in 0..300 {
            let f = a.element();
            assert_eq!(f, b.element());
            assert!(f.rho() >= &q(-8) && f.rho() <= &q(8));
            // the validator accepts what the generator builds
            assert_eq!(parse_element_file(&element_file(&f)).unwrap(), f);
        }
    }
}
