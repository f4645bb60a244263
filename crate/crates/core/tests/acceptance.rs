//! Acceptance run: one PASS/FAIL line per criterion, exact arithmetic only.

use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use realtree::cbrank::{complexity, witness, witness_set};
use realtree::construct::incompleteness_demo;
use realtree::dot::hull_dot;
use realtree::element::{lim_block, pulse, step};
use realtree::gen::Gen;
use realtree::isometry::parse_isometry;
use realtree::metric::{dist, set_unfold_cap, wedge, DEFAULT_UNFOLD_CAP};
use realtree::rational::{fmt_q, half, q, q_frac};
use realtree::sexpr::{element_file, parse_element_file, parse_set};
use realtree::suites::{self, SuiteConfig, SuiteReport};
use realtree::{Alphabet, Element, Label, Ordinal};

const SEED: u64 = 20_240_601;

struct Verdict {
    ok: bool,
    detail: String,
    undecided: usize,
}

impl Verdict {
    fn from_reports(reports: &[SuiteReport]) -> Self {
        let ok = reports.iter().all(SuiteReport::passed);
        let detail = reports.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        let detail = match reports.iter().find_map(|r| r.first_failure.clone()) {
            Some(f) => format!("{detail}; first failure: {f}"),
            None => detail,
        };
        Verdict {
            ok,
            detail,
            undecided: reports.iter().map(|r| r.undecided).sum(),
        }
    }
}

fn cfg(cases: usize, kappa: u64) -> SuiteConfig {
    SuiteConfig {
        cases,
        seed: SEED,
        alphabet: Alphabet::for_valence(kappa).unwrap(),
        alphas: Vec::new(),
    }
}

fn suite(name: &str, c: &SuiteConfig) -> SuiteReport {
    suites::run(name, c).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn metric() -> Verdict {
    let c = cfg(10_000, 3);
    let (reports, t) = timed(|| vec![suite("metric", &c), suite("fourpoint", &c)]);
    let mut v = Verdict::from_reports(&reports);
    v.ok &= t < Duration::from_secs(60);
    v.detail += &format!("; {:.1}s", t.as_secs_f64());
    v
}

fn escape() -> Verdict {
    let mut ok = true;
    let mut lines = Vec::new();
    for kappa in [3, 4] {
        for alpha in ["1", "2", "w"] {
            let a: Ordinal = alpha.parse().unwrap();
            let (rep, t) = timed(|| incompleteness_demo(&a, Alphabet::for_valence(kappa).unwrap(), 10));
            let good = match &rep {
                Ok(r) => {
                    r.verified
                        && r.sequence.len() == 10
                        && r.chain_members
                        && r.limit_complexity == a.succ().to_string()
                        && !r.member_alpha
                        && r.member_alpha_plus_one
                        && t < Duration::from_secs(10)
                }
                Err(_) => false,
            };
            ok &= good;
            lines.push(format!("a={alpha} k={kappa} {:.2}s{}", t.as_secs_f64(), if good { "" } else { " BAD" }));
        }
    }
    Verdict {
        ok,
        detail: lines.join(", "),
        undecided: 0,
    }
}

fn valence() -> Verdict {
    let reports: Vec<SuiteReport> = [3, 4, 7].iter().map(|&k| suite("directions", &cfg(100, k))).collect();
    Verdict::from_reports(&reports)
}

fn e1() -> Element {
    Element::new(q(1), vec![step(q(0), 1)], Alphabet::Finite(3)).unwrap()
}

fn e2() -> Element {
    Element::new(q(1), vec![step(q(0), 2)], Alphabet::Finite(3)).unwrap()
}

fn e3() -> Element {
    Element::new(q(1), vec![lim_block(q(0), q(1), half(), pulse(), Some(Label(1)))], Alphabet::Finite(3)).unwrap()
}

fn golden() -> Verdict {
    let mut fails = Vec::new();
    let mut expect = |what: &str, got: String, want: &str| {
        if got != want {
            fails.push(format!("{what}: got {got:?}"));
        }
    };
    let c0 = Element::const_ray(q(0), Alphabet::Finite(3));
    let c72 = Element::const_ray(q_frac(7, 2), Alphabet::Finite(3));
    expect("dist c0 c7/2", fmt_q(&dist(&c0, &c72).unwrap()), "7/2");
    expect("dist E1 E2", fmt_q(&dist(&e1(), &e2()).unwrap()), "2");
    expect("dist E1 E3", fmt_q(&dist(&e1(), &e3()).unwrap()), "4");
    expect("rank c0", complexity(&c0).to_string(), "0");
    expect("rank E1", complexity(&e1()).to_string(), "1");
    expect("rank E3", complexity(&e3()).to_string(), "2");
    let w = witness(&"w+1".parse().unwrap(), &q(0), &q(1), Alphabet::Finite(3)).unwrap();
    expect("rank witness", complexity(&w).to_string(), "w + 1");
    expect(
        "wedge E1 E2",
        element_file(&wedge(&e1(), &e2()).unwrap()),
        "(alphabet finite 3)\n(elem :rho 0 :jumps [])\n",
    );
    expect(
        "E3 file",
        element_file(&e3()),
        "(alphabet finite 3)\n(elem :rho 1 :jumps [(lim :at 0 :off 1 :ratio 1/2 :body [(step 0 1) (step 1/2 0)] :label 1)])\n",
    );
    let names = ["c0", "E1", "E3"].map(String::from);
    expect(
        "dot",
        hull_dot(&names, &[c0.clone(), e1(), e3()]).unwrap(),
        "graph hull {\n  p0 [label=\"c0\", shape=ellipse];\n  p1 [label=\"E1\", shape=ellipse];\n  p2 [label=\"E3\", shape=ellipse];\n  w0 [label=\"rho -1\", shape=point];\n  w0 -- p0 [label=\"1\"];\n  p0 -- p1 [label=\"1\"];\n  w0 -- p2 [label=\"2\"];\n}\n",
    );

    // round trips: parse(show(x)) == x and show(parse(show(x))) == show(x)
    let mut trips = 0;
    for kappa in [3, 4, 7] {
        let mut gen = Gen::new(SEED, Alphabet::for_valence(kappa).unwrap());
        for _ in 0..1000 {
            let f = gen.element();
            let s = element_file(&f);
            match parse_element_file(&s) {
                Ok(g) if g == f && element_file(&g) == s => trips += 1,
                _ => fails.push(format!("element round trip: {s}")),
            }
        }
    }
    for a in suites::oracle_ordinals() {
        let s = witness_set(&a).unwrap();
        let shown = s.to_string();
        match parse_set(&shown) {
            Ok(t) if t == s && t.to_string() == shown => trips += 1,
            _ => fails.push(format!("set round trip: {shown}")),
        }
    }
    for src in [
        "(compose (branch-swap (elem :rho 1 :jumps [(step 0 1)])) (translate -3/2) (reflect))",
        "(dir-perm (elem :rho 0 :jumps []) (cycle 0 1 2))",
        "(relabel (cycle 1 2))",
        "(id)",
    ] {
        match parse_isometry(src, Alphabet::Finite(3)) {
            Ok(phi) if phi.to_string() == src => trips += 1,
            _ => fails.push(format!("isometry round trip: {src}")),
        }
    }
    Verdict {
        ok: fails.is_empty(),
        detail: if fails.is_empty() { format!("{trips} round trips") } else { fails.join("; ") },
        undecided: 0,
    }
}

fn main() -> ExitCode {
    set_unfold_cap(DEFAULT_UNFOLD_CAP);
    let t = Instant::now();
    let verdicts: Vec<(&str, Verdict)> = thread::scope(|s| {
        let jobs: Vec<(&str, thread::ScopedJoinHandle<Verdict>)> = vec![
            ("1 metric and four-point", s.spawn(metric)),
            ("2 greatest lower bound", s.spawn(|| Verdict::from_reports(&[suite("glb", &cfg(10_000, 3))]))),
            ("3 isometries", s.spawn(|| Verdict::from_reports(&[suite("isometry", &cfg(10_000, 3))]))),
            ("4 two-point transitivity", s.spawn(|| Verdict::from_reports(&[suite("two-point", &cfg(1_000, 3))]))),
            ("5 rank oracle", s.spawn(|| Verdict::from_reports(&[suite("rank-oracle", &cfg(2_000, 3))]))),
            (
                "6 limit law",
                s.spawn(|| Verdict::from_reports(&[suite("limit", &cfg(1, 3)), suite("limit", &cfg(1, 4))])),
            ),
            ("7 incompleteness", s.spawn(escape)),
            ("8 valence", s.spawn(valence)),
            ("9 golden output", s.spawn(golden)),
        ];
        jobs.into_iter().map(|(n, h)| (n, h.join().expect("criterion panicked"))).collect()
    });
    let mut all = true;
    let mut undecided = 0;
    for (name, v) in &verdicts {
        all &= v.ok;
        undecided += v.undecided;
        println!("{} criterion {name}: {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
    }
    let none = undecided == 0;
    all &= none;
    println!(
        "{} criterion 10 no undecided comparisons: {undecided} (cap {DEFAULT_UNFOLD_CAP})",
        if none { "PASS" } else { "FAIL" }
    );
    println!("acceptance {} in {:.1}s", if all { "passed" } else { "FAILED" }, t.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
