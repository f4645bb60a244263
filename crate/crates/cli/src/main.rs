use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use realtree::cbrank::{complexity, member, witness};
use realtree::construct::incompleteness_demo;
use realtree::dot::hull_dot;
use realtree::isometry::{apply, parse_isometry, two_point_map};
use realtree::metric::{self, enumerate_directions};
use realtree::rational::{fmt_q, parse_q};
use realtree::sexpr::{element_file, element_to_string, parse_element_file};
use realtree::suites::{self, SuiteConfig};
use realtree::{Alphabet, Element, Error, Ordinal};

/// Exact computations in the universal real tree and its complexity filtration.
#[derive(Parser)]
#[command(name = "realtree", version, about)]
struct Cli {
    /// Unfolding cap for comparisons (overrides RTREE_UNFOLD_CAP).
    #[arg(long, global = true)]
    cap: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two elements.
    Dist { f: PathBuf, g: PathBuf },
    /// Greatest lower bound of two elements.
    Wedge { f: PathBuf, g: PathBuf },
    /// Whether the first element is a prefix of the second.
    Leq { f: PathBuf, g: PathBuf },
    /// Complexity (Cantor–Bendixson rank of the jump set).
    #[command(alias = "complexity")]
    Rank { f: PathBuf },
    /// Membership in the filtration level of the given complexity.
    Member {
        f: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// A canonical element of the given complexity.
    Witness {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "0")]
        at: String,
        #[arg(long, default_value = "1")]
        width: String,
        #[arg(long, default_value_t = 3)]
        kappa: u64,
    },
    /// Applies an isometry to an element.
    Apply { isometry: PathBuf, f: PathBuf },
    /// An isometry taking a1 to b1 and a2 to b2.
    TwoPoint {
        a1: PathBuf,
        a2: PathBuf,
        b1: PathBuf,
        b2: PathBuf,
    },
    /// One representative per direction at an element.
    Directions { f: PathBuf },
    /// Builds an escaping Cauchy chain and reports on its limit.
    EscapeDemo {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 3)]
        kappa: u64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a property suite.
    Check {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(suites::SUITES))]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        kappa: u64,
        /// Level for the escape suite; repeatable.
        #[arg(long)]
        alpha: Vec<String>,
    },
    /// DOT drawing of the convex hull of the given elements.
    Dot { files: Vec<PathBuf> },
}

enum Failure {
    Usage(String),
    Lib(String, Error),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(String::new(), e)
    }
}

type Outcome = Result<String, Failure>;

fn read_elem(path: &Path) -> Result<Element, Failure> {
    let src = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_element_file(&src).map_err(|e| Failure::Lib(format!("{}: ", path.display()), e))
}

fn ordinal(s: &str) -> Result<Ordinal, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn rational(s: &str) -> Result<realtree::Q, Failure> {
    parse_q(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn alphabet(kappa: u64) -> Result<Alphabet, Failure> {
    Alphabet::for_valence(kappa).map_err(|e| Failure::Usage(e.to_string()))
}

fn same_alphabet(f: &Element, g: &Element) -> Result<(), Failure> {
    if f.alphabet() != g.alphabet() {
        return Err(Error::AlphabetMismatch(f.alphabet().to_string(), g.alphabet().to_string()).into());
    }
    Ok(())
}

fn pair(f: &Path, g: &Path) -> Result<(Element, Element), Failure> {
    let (f, g) = (read_elem(f)?, read_elem(g)?);
    same_alphabet(&f, &g)?;
    Ok((f, g))
}

fn text_or_json(format: Format, text: String, value: serde_json::Value) -> String {
    match format {
        Format::Json => format!("{value}\n"),
        _ => text,
    }
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    if format == Format::Dot && !matches!(cli.command, Command::Dot { .. }) {
        return Err(Failure::Usage("--format dot applies only to the dot command".into()));
    }
    match cli.command {
        Command::Dist { f, g } => {
            let (f, g) = pair(&f, &g)?;
            let d = fmt_q(&metric::dist(&f, &g)?);
            Ok(text_or_json(format, format!("{d}\n"), json!({ "dist": d })))
        }
        Command::Wedge { f, g } => {
            let (f, g) = pair(&f, &g)?;
            let w = metric::wedge(&f, &g)?;
            Ok(text_or_json(format, element_file(&w), json!({ "wedge": element_to_string(&w) })))
        }
        Command::Leq { f, g } => {
            let (f, g) = pair(&f, &g)?;
            let b = metric::leq(&f, &g)?;
            Ok(text_or_json(format, format!("{b}\n"), json!({ "leq": b })))
        }
        Command::Rank { f } => {
            let c = complexity(&read_elem(&f)?);
            Ok(text_or_json(format, format!("{c}\n"), json!({ "complexity": c.to_string() })))
        }
        Command::Member { f, alpha } => {
            let b = member(&read_elem(&f)?, &ordinal(&alpha)?);
            Ok(text_or_json(format, format!("{b}\n"), json!({ "member": b })))
        }
        Command::Witness {
            alpha,
            at,
            width,
            kappa,
        } => {
            let w = witness(&ordinal(&alpha)?, &rational(&at)?, &rational(&width)?, alphabet(kappa)?)?;
            Ok(text_or_json(format, element_file(&w), json!({ "witness": element_to_string(&w) })))
        }
        Command::Apply { isometry, f } => {
            let f = read_elem(&f)?;
            let src =
                fs::read_to_string(&isometry).map_err(|e| Failure::Usage(format!("{}: {e}", isometry.display())))?;
            let phi =
                parse_isometry(&src, f.alphabet()).map_err(|e| Failure::Lib(format!("{}: ", isometry.display()), e))?;
            let g = apply(&phi, &f)?;
            Ok(text_or_json(format, element_file(&g), json!({ "image": element_to_string(&g) })))
        }
        Command::TwoPoint { a1, a2, b1, b2 } => {
            let (a1, a2) = pair(&a1, &a2)?;
            let (b1, b2) = pair(&b1, &b2)?;
            same_alphabet(&a1, &b1)?;
            let phi = two_point_map(&a1, &a2, &b1, &b2)?;
            Ok(text_or_json(format, format!("{phi}\n"), json!({ "isometry": phi.to_string() })))
        }
        Command::Directions { f } => {
            let dirs = enumerate_directions(&read_elem(&f)?)?;
            let mut text = String::new();
            let mut items = Vec::new();
            for (id, rep) in &dirs {
                text.push_str(&format!("{id}\t{}\n", element_to_string(rep)));
                items.push(json!({ "direction": id.to_string(), "representative": element_to_string(rep) }));
            }
            Ok(text_or_json(format, text, json!(items)))
        }
        Command::EscapeDemo {
            alpha,
            kappa,
            steps,
            out,
        } => {
            let report = incompleteness_demo(&ordinal(&alpha)?, alphabet(kappa)?, steps)?;
            let body = serde_json::to_string_pretty(&report).expect("plain data") + "\n";
            let verified = report.verified;
            let shown = match out {
                Some(path) => {
                    fs::write(&path, &body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    format!(
                        "limit complexity {}; member(limit, {alpha}) = {}; wrote {}\n",
                        report.limit_complexity,
                        report.member_alpha,
                        path.display()
                    )
                }
                None => body,
            };
            if !verified {
                return Err(Failure::Property(shown));
            }
            Ok(shown)
        }
        Command::Check {
            suite,
            cases,
            seed,
            kappa,
            alpha,
        } => {
            let cfg = SuiteConfig {
                cases,
                seed,
                alphabet: alphabet(kappa)?,
                alphas: alpha.iter().map(|a| ordinal(a)).collect::<Result<_, _>>()?,
            };
            let report = suites::run(&suite, &cfg)?;
            let text = text_or_json(
                format,
                format!("{report}\n"),
                serde_json::to_value(&report).expect("plain data"),
            );
            if report.undecided > 0 {
                return Err(Failure::Lib(text, Error::Undecided { events: metric::unfold_cap() }));
            }
            if !report.passed() {
                return Err(Failure::Property(text));
            }
            Ok(text)
        }
        Command::Dot { files } => {
            if format == Format::Json {
                return Err(Failure::Usage("the dot command writes DOT only".into()));
            }
            if files.len() < 2 {
                return Err(Failure::Usage("dot needs at least two element files".into()));
            }
            let points = files.iter().map(|p| read_elem(p)).collect::<Result<Vec<_>, _>>()?;
            for p in &points[1..] {
                same_alphabet(&points[0], p)?;
            }
            let names: Vec<String> = files
                .iter()
                .map(|p| p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into()))
                .collect();
            Ok(hull_dot(&names, &points)?)
        }
    }
}

fn configure_cap(cli: &Cli) -> Result<(), Failure> {
    let cap = match cli.cap {
        Some(c) => Some(c),
        None => match std::env::var("RTREE_UNFOLD_CAP") {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("RTREE_UNFOLD_CAP must be a natural number, got `{v}`")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(c) = cap {
        if c == 0 {
            return Err(Failure::Usage("the unfolding cap must be at least 1".into()));
        }
        metric::set_unfold_cap(c);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_cap(&cli).and_then(|()| run(cli));
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Property(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(ctx, e @ Error::Undecided { .. })) => {
            if !ctx.is_empty() && !ctx.ends_with(": ") {
                print!("{ctx}");
                eprintln!("error: {e}");
            } else {
                eprintln!("error: {ctx}{e}");
            }
            ExitCode::from(3)
        }
        Err(Failure::Lib(ctx, e)) => {
            eprintln!("error: {ctx}{e}");
            ExitCode::from(2)
        }
    }
}
