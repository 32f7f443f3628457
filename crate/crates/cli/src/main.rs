//! Command-line surface: every library computation behind one binary that
//! prints a versioned JSON report on standard output.
//!
//! Exit codes: 0 for success (and, for certify/sweep, a fully certified
//! verdict); 2 when the pipeline ran but the answer is negative — a
//! NOT_CERTIFIED or DEGENERATE certificate, or an oracle relation; 1 for
//! usage, parse, and runtime errors. Progress and `--pretty` summaries go
//! to standard error, so reports stay byte-deterministic modulo timing.

use std::io::Read as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use schottky::building::apartment_intersection;
use schottky::burau::{braid_eval, burau_reduced, burau_unreduced, BraidWord, BurauKind};
use schottky::certify::{certify_family, sweep_family, CertStatus, Policy, Presentation};
use schottky::parse::parse_matrix;
use schottky::report::Report;
use schottky::words::{freeness_scan, reduced_word_count, ScanStrategy};
use schottky::{Error, Result};

#[derive(Parser)]
#[command(
    name = "schottky",
    version,
    about = "Exact free-group certificates for matrix pairs over Q(t)"
)]
struct Cli {
    /// Also print a human-readable summary to standard error.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify one parameter point of the two-parameter family.
    Certify {
        /// Exact rational, e.g. 2 or -7/3.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Exact rational, e.g. 3 or 1/2.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Chamber-matching policy: matched_ends or all_pairs.
        #[arg(long, default_value = "matched_ends")]
        policy: String,
    },
    /// Certify a rational grid of parameter points.
    Sweep {
        /// Comma-separated exact rationals, e.g. -2,0,1/2,3.
        #[arg(long, allow_hyphen_values = true)]
        alphas: String,
        /// Comma-separated exact rationals.
        #[arg(long, allow_hyphen_values = true)]
        betas: String,
        /// Chamber-matching policy: matched_ends or all_pairs.
        #[arg(long, default_value = "matched_ends")]
        policy: String,
    },
    /// Intersect the standard apartment with its image under a matrix.
    Intersect {
        /// Matrix file in the entry grammar ("-" reads standard input).
        #[arg(long)]
        matrix_file: PathBuf,
    },
    /// Print Burau generator matrices, or evaluate a braid word.
    Burau {
        /// Number of strands (at least 2).
        #[arg(long)]
        n: usize,
        /// Use the reduced (n-1)-dimensional representation.
        #[arg(long)]
        reduced: bool,
        /// Braid word such as "s3 s1^-1"; omit to list the generators.
        #[arg(long)]
        word: Option<String>,
    },
    /// Scan reduced words for relations in a family pair.
    Oracle {
        /// Exact rational.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Exact rational.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Longest word length to scan.
        #[arg(long)]
        max_len: usize,
        /// Evaluate every word exactly instead of screen-then-confirm.
        #[arg(long)]
        exact: bool,
    },
    /// Parse matrix text and echo its canonical rendering.
    Parse {
        /// Validate only; print no report.
        #[arg(long)]
        check: bool,
        /// Input file; omit to read standard input.
        file: Option<PathBuf>,
    },
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let bad = || Error::Invalid(format!("not an exact rational: '{s}'"));
    let pn: BigInt = num.parse().map_err(|_| bad())?;
    let pd: BigInt = den.parse().map_err(|_| bad())?;
    if pd == BigInt::from(0) {
        return Err(Error::Invalid(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(pn, pd))
}

fn parse_rational_list(s: &str) -> Result<Vec<BigRational>> {
    let vals: Result<Vec<BigRational>> = s.split(',').map(parse_rational).collect();
    let vals = vals?;
    if vals.is_empty() {
        return Err(Error::Invalid("empty rational list".into()));
    }
    Ok(vals)
}

fn read_source(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut src = String::new();
        std::io::stdin()
            .read_to_string(&mut src)
            .map_err(|e| Error::Invalid(format!("cannot read standard input: {e}")))?;
        return Ok(src);
    }
    std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

/// Builds and prints the report; stdout carries nothing else.
fn emit(command: &str, inputs: impl Serialize, result: impl Serialize, t0: Instant) -> Result<()> {
    let report = Report::new(command, inputs, result, t0.elapsed().as_millis() as u64)?;
    print!("{}", report.to_json()?);
    Ok(())
}

fn init_workers() {
    if let Ok(v) = std::env::var("SCHOTTKY_WORKERS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let t0 = Instant::now();
    match &cli.command {
        Command::Certify {
            alpha,
            beta,
            policy,
        } => {
            let a = parse_rational(alpha)?;
            let b = parse_rational(beta)?;
            let pol: Policy = policy.parse()?;
            let cert = certify_family(&a, &b, pol)?;
            let inputs = serde_json::json!({
                "alpha": a.to_string(),
                "beta": b.to_string(),
                "policy": pol,
            });
            let certified = cert.status == CertStatus::CertifiedFree;
            emit("certify", inputs, &cert, t0)?;
            if cli.pretty {
                eprintln!("{} at alpha={a}, beta={b}", cert.status);
                if let Some(v) = &cert.vertex {
                    eprintln!("  common vertex {v}");
                }
                for note in &cert.notes {
                    eprintln!("  note: {note}");
                }
            }
            Ok(if certified { 0 } else { 2 })
        }
        Command::Sweep {
            alphas,
            betas,
            policy,
        } => {
            let avals = parse_rational_list(alphas)?;
            let bvals = parse_rational_list(betas)?;
            let pol: Policy = policy.parse()?;
            let entries = sweep_family(&avals, &bvals, pol)?;
            let all_certified = entries
                .iter()
                .all(|e| e.certificate.status == CertStatus::CertifiedFree);
            let inputs = serde_json::json!({
                "alphas": avals.iter().map(BigRational::to_string).collect::<Vec<_>>(),
                "betas": bvals.iter().map(BigRational::to_string).collect::<Vec<_>>(),
                "policy": pol,
            });
            let result = serde_json::json!({
                "all_certified": all_certified,
                "entries": entries,
            });
            emit("sweep", inputs, result, t0)?;
            if cli.pretty {
                for e in &entries {
                    eprintln!(
                        "alpha={}, beta={}: {}",
                        e.alpha, e.beta, e.certificate.status
                    );
                }
                eprintln!(
                    "{} of {} certified",
                    entries
                        .iter()
                        .filter(|e| e.certificate.status == CertStatus::CertifiedFree)
                        .count(),
                    entries.len()
                );
            }
            Ok(if all_certified { 0 } else { 2 })
        }
        Command::Intersect { matrix_file } => {
            let src = read_source(matrix_file)?;
            let m = parse_matrix(&src)?;
            let inter = apartment_intersection(&m)?;
            let vertex = inter.unique_vertex();
            let inputs = serde_json::json!({ "matrix": m.to_string() });
            let result = serde_json::json!({
                "intersection": inter,
                "vertex": vertex,
            });
            emit("intersect", inputs, result, t0)?;
            if cli.pretty {
                eprintln!(
                    "status {:?}, {} solution(s)",
                    inter.status,
                    inter.solutions.len()
                );
                if let Some(v) = vertex {
                    eprintln!("  common vertex {v}");
                }
            }
            Ok(0)
        }
        Command::Burau { n, reduced, word } => {
            if *n < 2 {
                return Err(Error::Invalid("braid groups need at least 2 strands".into()));
            }
            let kind = if *reduced {
                BurauKind::Reduced
            } else {
                BurauKind::Unreduced
            };
            let kind_name = if *reduced { "reduced" } else { "unreduced" };
            let inputs = serde_json::json!({
                "n": n,
                "kind": kind_name,
                "word": word,
            });
            let result = match word {
                Some(src) => {
                    let w = BraidWord::parse(*n, src)?;
                    let m = braid_eval(&w, kind);
                    serde_json::json!({
                        "word": w.to_string(),
                        "matrix": m,
                        "det": m.det()?.to_string(),
                    })
                }
                None => {
                    let gens = match kind {
                        BurauKind::Reduced => burau_reduced(*n),
                        BurauKind::Unreduced => burau_unreduced(*n),
                    };
                    serde_json::json!({ "generators": gens })
                }
            };
            emit("burau", inputs, result, t0)?;
            if cli.pretty {
                match word {
                    Some(src) => eprintln!("evaluated {kind_name} Burau image of '{src}'"),
                    None => eprintln!("{} {kind_name} Burau generators of B_{n}", n - 1),
                }
            }
            Ok(0)
        }
        Command::Oracle {
            alpha,
            beta,
            max_len,
            exact,
        } => {
            if *max_len > 32 {
                return Err(Error::Invalid("max-len above 32 is not supported".into()));
            }
            let a = parse_rational(alpha)?;
            let b = parse_rational(beta)?;
            let strategy = if *exact {
                ScanStrategy::Exact
            } else {
                ScanStrategy::SpecializeThenConfirm
            };
            let (f, s) = schottky::burau::family_pair(&a, &b);
            let pair = Presentation::new(f, s)?.generators();
            let start = Instant::now();
            let progress = move |done: u64, total: u64, len: usize| {
                let ms = start.elapsed().as_millis().max(1) as u64;
                let rate = done.saturating_mul(1000) / ms;
                eprint!("\rlength {len}: {done}/{total} words, {rate} words/s   ");
            };
            let outcome = freeness_scan(&pair, *max_len, strategy, Some(&progress))?;
            eprintln!(
                "\rscanned {} of {} words                         ",
                outcome.words_checked,
                reduced_word_count(*max_len)
            );
            let inputs = serde_json::json!({
                "alpha": a.to_string(),
                "beta": b.to_string(),
                "max_len": max_len,
                "strategy": strategy,
            });
            let found = outcome.relation.is_some();
            emit("oracle", inputs, &outcome, t0)?;
            if cli.pretty {
                match &outcome.relation {
                    Some(w) => eprintln!("relation found: {w} (length {})", w.len()),
                    None => eprintln!("no relation up to length {max_len}"),
                }
            }
            Ok(if found { 2 } else { 0 })
        }
        Command::Parse { check, file } => {
            let src = match file {
                Some(p) => read_source(p)?,
                None => read_source(&PathBuf::from("-"))?,
            };
            let m = parse_matrix(&src)?;
            if !check {
                let inputs = serde_json::json!({
                    "source": file.as_ref().map(|p| p.display().to_string()),
                });
                let result = serde_json::json!({
                    "rows": m.nrows(),
                    "cols": m.ncols(),
                    "matrix": m,
                    "rendered": m.to_string(),
                });
                emit("parse", inputs, result, t0)?;
            }
            if cli.pretty {
                eprintln!("ok: {}x{} matrix", m.nrows(), m.ncols());
            }
            Ok(0)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version print normally; usage errors exit 1, not
            // clap's default 2, which this interface reserves for negative
            // verdicts.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    init_workers();
    match run(&cli) {
        Ok(code) => std::process::exit(code.into()),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
