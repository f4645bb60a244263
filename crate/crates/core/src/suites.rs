//! Randomized property suites shared by the test targets and the CLI.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::cbrank::{
    cb_rank, complexity, derivative, jump_set, member, pair_complexity, pair_set, rank_from_order_type,
    restrict_set, witness, witness_set, PointSet,
};
use crate::construct::{escape_sequence, incompleteness_demo, limit_of_chain, BetaSeq};
use crate::element::{Alphabet, Element};
use crate::error::{Error, Result};
use crate::gen::Gen;
use crate::isometry::{apply, branch_swap, compose, dir_perm, invert, reflect, relabel, translate, two_point_map, Isometry, Perm};
use crate::metric::{classify_direction, dist, enumerate_directions, leq, point_on_segment, same_point, wedge, DirectionId};
use crate::ordinal::Ordinal;
use crate::rational::{half, one, pow, q, zero};

pub const SUITES: &[&str] = &[
    "metric",
    "fourpoint",
    "glb",
    "isometry",
    "two-point",
    "rank-oracle",
    "limit",
    "escape",
    "directions",
];

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub checks: usize,
    pub failures: usize,
    pub undecided: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.undecided == 0
    }

    /// Records one check. Errors count as failures, except UNDECIDED,
    /// which is tallied on its own.
    fn check(&mut self, what: impl FnOnce() -> String, outcome: Result<bool>) {
        self.checks += 1;
        let note = match outcome {
            Ok(true) => return,
            Ok(false) => {
                self.failures += 1;
                what()
            }
            Err(e @ Error::Undecided { .. }) => {
                self.undecided += 1;
                format!("{}: {e}", what())
            }
            Err(e) => {
                self.failures += 1;
                format!("{}: {e}", what())
            }
        };
        self.first_failure.get_or_insert(note);
    }

    fn merge(&mut self, other: SuiteReport) {
        self.cases += other.cases;
        self.checks += other.checks;
        self.failures += other.failures;
        self.undecided += other.undecided;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} cases, {} checks, {} failures, {} undecided",
            self.suite, self.cases, self.checks, self.failures, self.undecided
        )?;
        if let Some(note) = &self.first_failure {
            write!(f, "\n  first failure: {note}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub cases: usize,
    pub seed: u64,
    pub alphabet: Alphabet,
    /// Filtration levels for `escape`; empty means the default set.
    pub alphas: Vec<Ordinal>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            cases: 1000,
            seed: 1,
            alphabet: Alphabet::Finite(3),
            alphas: Vec::new(),
        }
    }
}

pub fn run(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    Ok(match name {
        "metric" => metric(cfg),
        "fourpoint" => four_point(cfg),
        "glb" => glb(cfg),
        "isometry" => isometries(cfg),
        "two-point" => two_point(cfg),
        "rank-oracle" => rank_oracle(cfg),
        "limit" => limit_law(cfg),
        "escape" => escape(cfg),
        "directions" => directions(cfg),
        _ => {
            return Err(Error::Domain(format!(
                "unknown suite `{name}`; known suites: {}",
                SUITES.join(", ")
            )))
        }
    })
}

fn show(f: &Element) -> String {
    crate::sexpr::element_to_string(f)
}

/// Identity, symmetry, positivity and the triangle inequality.
pub fn metric(cfg: &SuiteConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("metric");
    let mut gen = Gen::new(cfg.seed, cfg.alphabet);
    for _ in 0..cfg.cases {
        rep.cases += 1;
        let (f, g, h) = (gen.element(), gen.element(), gen.element());
        let ctx = || format!("{} | {} | {}", show(&f), show(&g), show(&h));
        rep.check(ctx, dist(&f, &f).map(|d| d == zero()));
        let fg = dist(&f, &g);
        rep.check(ctx, (|| Ok(fg.clone()? == dist(&g, &f)?))());
        rep.check(ctx, (|| {
            let d = fg.clone()?;
            Ok(d >= zero() && (d == zero()) == same_point(&f, &g)?)
        })());
        rep.check(ctx, (|| Ok(fg.clone()? <= dist(&f, &h)? + dist(&h, &g)?))());
    }
    rep
}

/// `d(a,b) + d(c,d) <= max(d(a,c) + d(b,d), d(a,d) + d(b,c))`.
pub fn four_point(cfg: &SuiteConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("fourpoint");
    let mut gen = Gen::new(cfg.seed ^ 0x4f50, cfg.alphabet);
    for _ in 0..cfg.cases {
        rep.cases += 1;
        let p: Vec<Element> = (0..4).map(|_| gen.element()).collect();
        let ctx = || p.iter().map(show).collect::<Vec<_>>().join(" | ");
        let outcome = (|| {
            let d = |i: usize, j: usize| dist(&p[i], &p[j]);
            let s1 = d(0, 1)? + d(2, 3)?;
            let s2 = d(0, 2)? + d(1, 3)?;
            let s3 = d(0, 3)? + d(1, 2)?;
            // all three orderings: the two largest sums coincide
            let mut v = [s1, s2, s3];
            v.sort();
            Ok(v[1] == v[2])
        })();
        rep.check(ctx, outcome);
    }
    rep
}

/// `f ∧ g` is the greatest lower bound.
pub fn glb(cfg: &SuiteConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("glb");
    let mut gen = Gen::new(cfg.seed ^ 0x474c, cfg.alphabet);
    for _ in 0..cfg.cases {
        rep.cases += 1;
        let (f, g) = (gen.element(), gen.element());
        let ctx = || format!("{} | {}", show(&f), show(&g));
        let w = match wedge(&f, &g) {
            Ok(w) => w,
            Err(e) => {
                rep.check(ctx, Err(e));
                continue;
            }
        };
        rep.check(ctx, (|| Ok(leq(&w, &f)? && leq(&w, &g)?))());
        let h = match gen.rng().gen_range(0..4) {
            0 => gen.element(),
            1 => f.prefix(&(f.rho() - gen.rat(0, 3))).unwrap_or(f.clone()),
            _ => {
                let s = w.rho() - gen.rat(0, 2);
                w.prefix(&s).unwrap_or(w.clone())
            }
        };
        rep.check(ctx, (|| {
            if leq(&h, &f)? && leq(&h, &g)? {
                leq(&h, &w)
            } else {
                Ok(true)
            }
        })());
        // anything strictly above the wedge fails to lie below one of f, g
        let above = w.extend_step(gen.label(), &half()).expect("valid label");
        rep.check(ctx, (|| Ok(!(leq(&above, &f)? && leq(&above, &g)?)))());
    }
    rep
}

fn random_perm(gen: &mut Gen, fix_zero: bool) -> Perm {
    let m = match gen.alphabet() {
        Alphabet::Finite(m) => m,
        Alphabet::Countable => 5,
    };
    let lo = u64::from(fix_zero);
    let mut labels: Vec<u64> = (lo..m).collect();
    for i in (1..labels.len()).rev() {
        let j = gen.rng().gen_range(0..=i);
        labels.swap(i, j);
    }
    let k = gen.rng().gen_range(0..=labels.len());
    labels.truncate(k.max(1));
    Perm::from_cycles(&[labels]).expect("distinct labels")
}

fn random_isometry(gen: &mut Gen, kind: usize) -> Isometry {
    match kind {
        0 => translate(gen.rat(-4, 4)),
        1 => reflect(),
        2 => branch_swap(gen.element()),
        3 => {
            let x = gen.element();
            dir_perm(x, random_perm(gen, false))
        }
        4 => relabel(random_perm(gen, true)).expect("fixes zero"),
        _ => {
            let n = gen.rng().gen_range(1..=4);
            compose(
                (0..n)
                    .map(|_| {
                        let k = gen.rng().gen_range(0..5);
                        random_isometry(gen, k)
                    })
                    .collect(),
            )
        }
    }
}

const KIND_NAMES: [&str; 6] = ["translate", "reflect", "branch-swap", "dir-perm", "relabel", "compose"];

/// Distance preservation, involutions, inverses, the swap contract and
/// level preservation.
pub fn isometries(cfg: &SuiteConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("isometry");
    for (kind, name) in KIND_NAMES.iter().enumerate() {
        let mut sub = SuiteReport::new(name);
        let mut gen = Gen::new(cfg.seed.wrapping_add(kind as u64 * 7919), cfg.alphabet);
        let mut phi = random_isometry(&mut gen, kind);
        for i in 0..cfg.cases {
            if i % 16 == 0 {
                phi = random_isometry(&mut gen, kind);
            }
            sub.cases += 1;
            let (f, g) = (gen.element(), gen.element());
            let ctx = || format!("{name} {phi} on {} | {}", show(&f), show(&g));
            let images = (|| Ok((apply(&phi, &f)?, apply(&phi, &g)?)))();
            let (pf, pg) = match images {
                Ok(x) => x,
                Err(e) => {
                    sub.check(ctx, Err(e));
                    continue;
                }
            };
            sub.check(ctx, (|| Ok(dist(&pf, &pg)? == dist(&f, &g)?))());
            sub.check(ctx, (|| same_point(&apply(&invert(&phi), &pf)?, &f))());
            if kind == 1 || kind == 2 {
                sub.check(ctx, (|| same_point(&apply(&phi, &pf)?, &f))());
            }
            let (cf, cp) = (complexity(&f), complexity(&pf));
            let level_ok = match &phi {
                Isometry::Translate(_) | Isometry::Reflect | Isometry::Relabel(_) => cf == cp,
                Isometry::DirPerm(..) => cf == cp || (cf <= Ordinal::one() && cp <= Ordinal::one()),
                Isometry::BranchSwap(a) => cp <= std::cmp::max(cf.clone(), complexity(a)),
                _ => true,
            };
            sub.check(ctx, Ok(level_ok));
            if kind == 2 && i < 100 {
                let a = gen.element();
                let top = Element::const_ray(a.rho().clone(), a.alphabet());
                let ctx = || format!("swap contract at {}", show(&a));
                sub.check(ctx, (|| same_point(&apply(&branch_swap(a.clone()), &a)?, &top))());
                let low = Element::const_ray(a.tau() - gen.rat(0, 3), a.alphabet());
                sub.check(ctx, (|| same_point(&apply(&branch_swap(a.clone()), &low)?, &low))());
            }
        }
        rep.merge(sub);
    }
    rep
}

/// A point at distance `d` from `b`.
fn at_distance(gen: &mut Gen, b: &Element, d: &crate::rational::Q) -> Result<Element> {
    let c = gen.element();
    if &dist(b, &c)? >= d {
        return point_on_segment(b, &c, d);
    }
    if d == &zero() {
        return Ok(b.clone());
    }
    let l = gen.label();
    point_on_segment(b, &b.extend_step(l, d)?, d)
}

/// Two-point transitivity with exact endpoint images.
pub fn two_point(cfg: &SuiteConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("two-point");
    let mut gen = Gen::new(cfg.seed ^ 0x5450, cfg.alphabet);
    for _ in 0..cfg.cases {
        rep.cases += 1;
        let (a1, a2, b1) = (gen.element(), gen.element(), gen.element());
        let ctx = || format!("{} {} -> {}", show(&a1), show(&a2), show(&b1));
        let setup = (|| {
            let d = dist(&a1, &a2)?;
            let b2 = at_distance(&mut gen, &b1, &d)?;
            let phi = two_point_map(&a1, &a2, &b1, &b2)?;
            Ok((b2, phi))
        })();
        let (b2, phi) = match setup {
            Ok(x) => x,
            Err(e) => {
                rep.check(ctx, Err(e));
                continue;
            }
        };
        rep.check(ctx, (|| same_point(&apply(&phi, &a1)?, &b1))());
        rep.check(ctx, (|| same_point(&apply(&phi, &a2)?, &b2))());
        let probes: Vec<Element> = (0..20).map(|_| gen.element()).collect();
        let images: Result<Vec<Element>> = probes.iter().map(|p| apply(&phi, p)).collect();
        let images = match images {
            Ok(v) => v,
            Err(e) => {
                rep.check(ctx, Err(e));
                continue;
            }
        };
        for i in 0..probes.len() {
            let j = (i + 1) % probes.len();
            rep.check(ctx, (|| Ok(dist(&images[i], &images[j])? == dist(&probes[i], &probes[j])?))());
            rep.check(ctx, (|| Ok(dist(&images[i], &b1)? == dist(&probes[i], &a1)?))());
        }
    }
    rep
}

/// Successor ordinals up to `ω·2 + 3`.
pub fn oracle_ordinals() -> Vec<Ordinal> {
    let mut v: Vec<Ordinal> = (1..=6).map(Ordinal::finite).collect();
    for base in [Ordinal::omega(), Ordinal::omega().add(&Ordinal::omega())] {
        for n in 1..=3 {
            v.push(base.add(&Ordinal::finite(n)));
        }
    }
    v
}

fn oracle_check(rep: &mut SuiteReport, what: &str, s: &PointSet) {
    let ctx = || format!("{what}: {s}");
    rep.check(ctx, Ok(cb_rank(s) == rank_from_order_type(s)));
}

/// `cb_rank` against the order-type oracle, plus the rank laws.
pub fn rank_oracle(cfg: &SuiteConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("rank-oracle");
    for a in oracle_ordinals() {
        rep.cases += 1;
        let s = witness_set(&a).expect("successor");
        oracle_check(&mut rep, "witness", &s);
        rep.check(|| format!("witness rank {a}"), Ok(cb_rank(&s) == a));
        let f = witness(&a, &zero(), &one(), cfg.alphabet).expect("successor");
        rep.check(|| format!("witness complexity {a}"), Ok(complexity(&f) == a));
        let d = derivative(&s);
        oracle_check(&mut rep, "derived witness", &d);
        let expect = if a.is_finite() { a.pred().unwrap() } else { a.clone() };
        rep.check(|| format!("derivative rank {a}"), Ok(cb_rank(&d) == expect));
    }
    let mut gen = Gen::new(cfg.seed ^ 0x524f, cfg.alphabet);
    for _ in 0..cfg.cases {
        rep.cases += 1;
        let f = gen.element();
        let p = jump_set(&f);
        oracle_check(&mut rep, "jump set", &p);
        let c = cb_rank(&p);
        rep.check(
            || format!("zero complexity iff ray: {}", show(&f)),
            Ok((c == Ordinal::zero()) == p.is_empty() && p.is_empty() == f.is_const_ray()),
        );
        rep.check(|| format!("successor complexity: {}", show(&f)), Ok(c.is_zero() || c.is_successor()));
        if c.is_finite() && !c.is_zero() {
            rep.check(
                || format!("derivative: {}", show(&f)),
                Ok(cb_rank(&derivative(&p)).succ() == c),
            );
        }
        let lo = f.tau() - gen.rat(0, 2);
        let hi = &lo + gen.rat(0, 6);
        let r = restrict_set(&p, &lo, &hi);
        oracle_check(&mut rep, "restriction", &r);
        rep.check(|| format!("monotone: {}", show(&f)), Ok(cb_rank(&r) <= c));
        // pair complexity and downward closure along a prefix
        let s = &lo + (f.rho() - &lo) * half();
        if s < *f.rho() {
            let a = f.prefix(&s).expect("below rho");
            let pr = pair_set(&a, &f);
            oracle_check(&mut rep, "pair restriction", &pr);
            rep.check(
                || format!("pair complexity: {}", show(&f)),
                pair_complexity(&a, &f).map(|x| x == cb_rank(&pr)),
            );
            let alpha = gen.successor();
            rep.check(
                || format!("downward closure: {}", show(&f)),
                Ok(!member(&f, &alpha) || member(&a, &alpha)),
            );
            rep.check(|| format!("prefix complexity: {}", show(&f)), Ok(complexity(&a) <= c));
        }
    }
    rep
}

/// `comp(x, lim) = β + 1` and `comp(lim) = max(comp(x), β + 1)`.
pub fn limit_law(cfg: &SuiteConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("limit");
    let bases = [
        Element::const_ray(zero(), cfg.alphabet),
        witness(&Ordinal::finite(3), &q(-1), &one(), cfg.alphabet).expect("successor"),
    ];
    let seqs = [
        BetaSeq::Constant(Ordinal::finite(1)),
        BetaSeq::Constant(Ordinal::finite(2)),
        BetaSeq::Constant(Ordinal::finite(3)),
        BetaSeq::Fundamental(Ordinal::omega()),
    ];
    for x in &bases {
        for seq in &seqs {
            rep.cases += 1;
            let ctx = || format!("{seq:?} from {}", show(x));
            let r = one();
            let lim = match limit_of_chain(x, seq, &r) {
                Ok(l) => l,
                Err(e) => {
                    rep.check(ctx, Err(e));
                    continue;
                }
            };
            let b1 = seq.sup().succ();
            rep.check(ctx, pair_complexity(x, &lim).map(|p| p == b1));
            rep.check(ctx, Ok(complexity(&lim) == std::cmp::max(complexity(x), b1.clone())));
            let p = restrict_set(&jump_set(&lim), x.rho(), lim.rho());
            rep.check(ctx, Ok(rank_from_order_type(&p) == b1));
            match escape_sequence(x, seq, &r, 12) {
                Ok(chain) => {
                    for (n, a) in chain.iter().enumerate() {
                        rep.check(ctx, (|| Ok(leq(a, &lim)? && dist(a, &lim)? <= pow(&half(), n as u64)))());
                    }
                }
                Err(e) => rep.check(ctx, Err(e)),
            }
        }
    }
    rep
}

/// Incompleteness demos for each `α` in the config (default `1, 2, ω`).
pub fn escape(cfg: &SuiteConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("escape");
    let alphas = if cfg.alphas.is_empty() {
        vec![Ordinal::finite(1), Ordinal::finite(2), Ordinal::omega()]
    } else {
        cfg.alphas.clone()
    };
    for a in &alphas {
        rep.cases += 1;
        rep.check(
            || format!("escape demo at {a}"),
            incompleteness_demo(a, cfg.alphabet, 10).map(|r| r.verified),
        );
    }
    rep
}

/// Valence: exactly κ directions at random points of `T^[1]` and `T^[2]`.
pub fn directions(cfg: &SuiteConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("directions");
    let Alphabet::Finite(m) = cfg.alphabet else {
        rep.check(|| "directions need a finite alphabet".into(), Ok(false));
        return rep;
    };
    let mut gen = Gen::new(cfg.seed ^ 0x4449, cfg.alphabet);
    for alpha in [Ordinal::finite(1), Ordinal::finite(2)] {
        let mut done = 0;
        while done < cfg.cases {
            let x = gen.element();
            if !member(&x, &alpha) {
                continue;
            }
            done += 1;
            rep.cases += 1;
            let ctx = || format!("at {} in level {alpha}", show(&x));
            let dirs = match enumerate_directions(&x) {
                Ok(d) => d,
                Err(e) => {
                    rep.check(ctx, Err(e));
                    continue;
                }
            };
            rep.check(ctx, Ok(dirs.len() as u64 == m + 1));
            let mut seen: Vec<DirectionId> = Vec::new();
            for (id, rep_elem) in &dirs {
                let got = classify_direction(&x, rep_elem);
                rep.check(ctx, got.as_ref().map(|g| g == id).map_err(Clone::clone));
                if let Ok(g) = got {
                    rep.check(ctx, Ok(!seen.contains(&g)));
                    seen.push(g);
                }
                rep.check(ctx, Ok(member(rep_elem, &alpha)));
            }
            // every probe falls in one of the enumerated directions
            let probe = gen.element();
            if !same_point(&probe, &x).unwrap_or(true) {
                rep.check(ctx, classify_direction(&x, &probe).map(|d| seen.contains(&d)));
            }
        }
    }
    rep
}
