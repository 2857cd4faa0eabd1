//! `vachi`: check vertex algebras and chiral algebras given as JSON spec
//! files, translate between them and run the delta-function identities.
//!
//! Exit status is 0 when everything passes, 1 when an axiom or identity
//! fails and 2 on parse or contract errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vachi::chiral::{chiral_checks, compose_left, compose_right, sigma12_triple, ChiralData, Diag3Section};
use vachi::equivalence::{chiral_to_va, roundtrip_chiral, roundtrip_va, va_to_chiral, va_to_chiral_unchecked};
use vachi::format::{canonical_json, chiral_to_json, spec_from_json, va_to_json, SpecFile};
use vachi::formal::{check_identity, parse_expr, suite, ExponentBox, IdentityReport, Var};
use vachi::report::{CheckReport, WindowOverride};
use vachi::vertex::{va_checks, CoeffRing, VAData};
use vachi::Error;

#[derive(Parser)]
#[command(name = "vachi", version, about = "Exact checks for vertex algebras without vacuum and chiral algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Output {
    /// Widen the computed window: `lo:hi` for every axis or `name=lo:hi`
    /// for one axis. Repeatable. Windows are never narrowed.
    #[arg(long, value_name = "RANGE", allow_hyphen_values = true)]
    window: Vec<String>,
    /// Also write the report to this file.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Check truncation, D-derivative, skew-symmetry and Jacobi.
    CheckVa {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check the D-module, skew-symmetry and Jacobi axioms.
    CheckChiral {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Translate a vertex algebra into its chiral family.
    ToChiral {
        file: PathBuf,
        /// Output path; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate a chiral family into a vertex algebra.
    ToVa {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate there and back and compare tablewise.
    Roundtrip {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check delta-function identities coefficientwise on a box.
    DeltaSuite {
        /// The box is `[-w, w]` in every variable.
        #[arg(long, default_value_t = 6)]
        half_width: i64,
        /// Extra identity `LHS = RHS`. Repeatable. When given, only these
        /// identities are checked.
        #[arg(long, value_name = "IDENTITY", allow_hyphen_values = true)]
        identity: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Print both sides of the Jacobi identity for one triple generator.
    ComposeDiff {
        file: PathBuf,
        /// Exponents `m1,m2,m3`.
        #[arg(long, value_name = "M1,M2,M3", allow_hyphen_values = true)]
        m: String,
        /// Basis names of `u`, `v`, `w`.
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
        #[command(flatten)]
        out: Output,
    },
}

/// A finished command: the report and whether everything passed.
struct Outcome {
    text: String,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(o) => {
            if o.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Error::AxiomFailed { axiom, witness }) => {
            eprintln!("error: axiom `{axiom}` fails: {witness}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::CheckVa { file, out } => {
            let over = parse_windows(&out.window)?;
            let va = read_va(&file)?;
            let (reports, verdicts) = va_checks(&va, &over);
            emit(&out, check_output(&reports, verdicts.all(), out.format))
        }
        Command::CheckChiral { file, out } => {
            let over = parse_windows(&out.window)?;
            let a = read_chiral(&file)?;
            let (reports, verdicts) = chiral_checks(&a, &over);
            emit(&out, check_output(&reports, verdicts.all(), out.format))
        }
        Command::ToChiral { file, output } => {
            let va = lift(read_va(&file)?)?;
            let text = chiral_to_json(&va_to_chiral(&va)?);
            write_or_print(output.as_deref(), &text)
        }
        Command::ToVa { file, output } => {
            let text = va_to_json(&chiral_to_va(&read_chiral(&file)?)?);
            write_or_print(output.as_deref(), &text)
        }
        Command::Roundtrip { file, out } => {
            let rep = match read_spec(&file)? {
                SpecFile::Va(v) => roundtrip_va(&v)?,
                SpecFile::Chiral(a) => roundtrip_chiral(&a)?,
            };
            let text = match out.format {
                Format::Json => canonical_json(&rep),
                Format::Text => {
                    let status = if rep.exact { "EXACT" } else { "MISMATCH" };
                    let mut s = format!("roundtrip: {status}\ndirection: {}\n", rep.direction);
                    if let Some(w) = &rep.witness {
                        let _ = writeln!(s, "first mismatch: {w}");
                    }
                    s
                }
            };
            emit(&out, Outcome { text, passed: rep.exact })
        }
        Command::DeltaSuite {
            half_width,
            identity,
            out,
        } => {
            let reports = if identity.is_empty() {
                suite::run(half_width)?
            } else {
                identity
                    .iter()
                    .map(|s| custom_identity(s, half_width))
                    .collect::<Result<_, _>>()?
            };
            let passed = reports.iter().all(IdentityReport::passed);
            let text = match out.format {
                Format::Json => canonical_json(&reports),
                Format::Text => {
                    let mut s = String::new();
                    for r in &reports {
                        let _ = writeln!(s, "{}", r.summary_line());
                    }
                    let _ = writeln!(s, "result: {}", if passed { "PASS" } else { "FAIL" });
                    s
                }
            };
            emit(&out, Outcome { text, passed })
        }
        Command::ComposeDiff { file, m, u, v, w, out } => {
            let a = match read_spec(&file)? {
                SpecFile::Va(x) => va_to_chiral_unchecked(&lift(x)?)?,
                SpecFile::Chiral(a) => a,
            };
            let ms = parse_triple(&m)?;
            emit(&out, compose_diff(&a, ms, [&u, &v, &w], out.format)?)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::contract(format!("cannot read {}: {e}", path.display())))
}

fn read_spec(path: &Path) -> Result<SpecFile, Error> {
    spec_from_json(&read_text(path)?)
}

fn read_va(path: &Path) -> Result<VAData, Error> {
    match read_spec(path)? {
        SpecFile::Va(v) => Ok(v),
        SpecFile::Chiral(_) => Err(Error::contract(format!("{} is a chiral spec file", path.display()))),
    }
}

fn read_chiral(path: &Path) -> Result<ChiralData, Error> {
    match read_spec(path)? {
        SpecFile::Chiral(a) => Ok(a),
        SpecFile::Va(_) => Err(Error::contract(format!("{} is a vertex algebra spec file", path.display()))),
    }
}

fn lift(v: VAData) -> Result<VAData, Error> {
    match v.coeff_ring() {
        CoeffRing::Q => v.tensor_with_ox(),
        CoeffRing::Qz => Ok(v),
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<Outcome, Error> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Error::contract(format!("cannot write {}: {e}", p.display())))?;
            Ok(Outcome {
                text: String::new(),
                passed: true,
            })
        }
        None => {
            print!("{text}");
            Ok(Outcome {
                text: String::new(),
                passed: true,
            })
        }
    }
}

/// Prints the report and writes it to `--report` when given.
fn emit(out: &Output, o: Outcome) -> Result<Outcome, Error> {
    print!("{}", o.text);
    if let Some(p) = &out.report {
        std::fs::write(p, &o.text).map_err(|e| Error::contract(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(o)
}

fn check_output(reports: &[CheckReport], passed: bool, format: Format) -> Outcome {
    let text = match format {
        Format::Json => canonical_json(&serde_json::json!({ "passed": passed, "reports": reports })),
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                s.push_str(&r.to_string());
            }
            let _ = writeln!(s, "result: {}", if passed { "PASS" } else { "FAIL" });
            s
        }
    };
    Outcome { text, passed }
}

fn parse_range(s: &str) -> Result<(i64, i64), Error> {
    let bad = || Error::contract(format!("window '{s}' is not of the form lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn parse_windows(specs: &[String]) -> Result<WindowOverride, Error> {
    let mut over = WindowOverride::none();
    for s in specs {
        match s.split_once('=') {
            Some((name, range)) => {
                over.axes.insert(name.trim().to_string(), parse_range(range)?);
            }
            None => over.all = Some(parse_range(s)?),
        }
    }
    Ok(over)
}

fn parse_triple(s: &str) -> Result<(i64, i64, i64), Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::contract(format!("'{s}' is not of the form m1,m2,m3"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let p = |x: &str| x.parse::<i64>().map_err(|_| bad());
    Ok((p(parts[0])?, p(parts[1])?, p(parts[2])?))
}

fn custom_identity(src: &str, half_width: i64) -> Result<IdentityReport, Error> {
    let (lhs, rhs) = src
        .split_once('=')
        .ok_or_else(|| Error::contract(format!("identity '{src}' has no '='")))?;
    let vars: Vec<Var> = Var::ALL.into_iter().filter(|v| src.contains(v.name())).collect();
    let bx = ExponentBox::cube(&vars, -half_width, half_width)?;
    check_identity(src.trim(), &parse_expr(lhs)?, &parse_expr(rhs)?, &bx)
}

fn section_lines(s: &mut String, title: &str, sec: &Diag3Section, names: &[String]) {
    let _ = writeln!(s, "{title}:");
    if sec.is_zero() {
        let _ = writeln!(s, "  (empty)");
    }
    for (&(k, l), v) in sec.layers() {
        let _ = writeln!(s, "  ({k},{l}): {}", v.display_with(names));
    }
}

fn compose_diff(a: &ChiralData, (m1, m2, m3): (i64, i64, i64), names: [&String; 3], format: Format) -> Result<Outcome, Error> {
    let idx = |n: &String| {
        a.basis_names()
            .iter()
            .position(|x| x == n)
            .ok_or_else(|| Error::contract(format!("unknown basis element '{n}'")))
    };
    let (u, v, w) = (a.basis(idx(names[0])?), a.basis(idx(names[1])?), a.basis(idx(names[2])?));
    let left = compose_left(a, m1, m2, m3, &u, &v, &w);
    let right = compose_right(a, m1, m2, m3, &u, &v, &w);
    let (sign, p1, p2, p3, su, sv, sw) = sigma12_triple(m1, m2, m3, &u, &v, &w);
    let swapped = compose_right(a, p1, p2, p3, &su, &sv, &sw).transpose().scale(&sign);
    let diff = left.sub(&right).add(&swapped);
    let passed = diff.is_zero();
    let bn = a.basis_names();
    let text = match format {
        Format::Json => {
            let table = |s: &Diag3Section| {
                s.layers()
                    .iter()
                    .map(|(&(k, l), x)| serde_json::json!({ "k": k, "l": l, "value": x.display_with(bn).to_string() }))
                    .collect::<Vec<_>>()
            };
            canonical_json(&serde_json::json!({
                "m": [m1, m2, m3],
                "basis": [names[0], names[1], names[2]],
                "left": table(&left),
                "right": table(&right),
                "right_swapped": table(&swapped),
                "difference": table(&diff),
            }))
        }
        Format::Text => {
            let mut s = format!(
                "compose-diff (m1,m2,m3)=({m1},{m2},{m3}), (u,v,w)=({},{},{})\n",
                names[0], names[1], names[2]
            );
            section_lines(&mut s, "left mu(mu(u,v),w)", &left, bn);
            section_lines(&mut s, "right mu(u,mu(v,w))", &right, bn);
            section_lines(&mut s, "right swapped (-1)^m1 mu(v,mu(u,w)), d1 and d2 exchanged", &swapped, bn);
            section_lines(&mut s, "difference left - right + swapped", &diff, bn);
            let _ = writeln!(s, "result: {}", if passed { "PASS" } else { "FAIL" });
            s
        }
    };
    Ok(Outcome { text, passed })
}
