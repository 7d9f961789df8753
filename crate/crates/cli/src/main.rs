//! Command line surface over the library: every query emits deterministic
//! CSV (default) or JSON on stdout, diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 invariant violation or method disagreement,
//! 2 usage error, 3 enumeration cap exceeded.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use cantor_kabelian::factors;
use cantor_kabelian::formulas::{self, KFastEvaluator, Method};
use cantor_kabelian::kabelian::{self, EquivalenceReport};
use cantor_kabelian::regularity::{guess_representation, verify_representation};
use cantor_kabelian::sequence;
use cantor_kabelian::word::Word;
use cantor_kabelian::Error as LibError;

/// Environment variable overriding the default enumeration cap.
const CAP_ENV: &str = "CANTOR_ENUM_CAP";

#[derive(Parser)]
#[command(
    name = "cantor-kabelian",
    version,
    about = "k-abelian complexity of the Cantor sequence, by enumeration and by formulas"
)]
struct Cli {
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Enumeration cap for brute-force queries
    /// (default 10000, or the CANTOR_ENUM_CAP environment variable).
    #[arg(long, global = true)]
    cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first N letters of the sequence.
    Prefix { n: usize },
    /// Print the letter at index N.
    Letter { n: u64 },
    /// List all factors of length N with a witness position each.
    Factors { n: usize },
    /// List the special factors of length N.
    Special {
        n: usize,
        #[arg(long, value_enum)]
        side: Side,
    },
    /// k-abelian complexity over a range of lengths.
    Complexity {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value = "both")]
        method: String,
    },
    /// Run one of the exhaustive identity sweeps.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        /// Parameter of the sweep: k for theorem-b, occurrence and
        /// linear-system; the block exponent i (at most 2) for delta.
        #[arg(long)]
        k: u64,
        #[arg(long)]
        max_len: usize,
    },
    /// Lengths of the first J zero-runs between consecutive 1s.
    Gaps {
        #[arg(long)]
        count: u64,
    },
    /// Residues modulo 3^LEVEL of the occurrence positions of WORD.
    Types {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        word: String,
    },
    /// Discover and verify a base-3 linear representation
    /// (emits the representation as JSON regardless of --format).
    Guess {
        /// Target sequence: mc, p1, p2, or pk:K for k-abelian complexity.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 20)]
        max_rank: usize,
        /// Training window length.
        #[arg(long, default_value_t = 2000)]
        train: usize,
        /// Verify on [0, TEST] after guessing.
        #[arg(long, default_value_t = 30_000)]
        test: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    /// Reduction of (k+1)-equivalence to equal 1-counts.
    TheoremB,
    /// Zero-run boundary-defect congruences.
    Delta,
    /// Occurrence-count identities through special factors.
    Occurrence,
    /// The four-equation window-count system at k = 3^i + 1.
    LinearSystem,
}

enum AppError {
    Lib(LibError),
    Usage(String),
    Failed(String),
}

impl From<LibError> for AppError {
    fn from(e: LibError) -> Self {
        AppError::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                LibError::CapExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
        Err(AppError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn effective_cap(cli: &Cli) -> Result<u64, AppError> {
    if let Some(cap) = cli.cap {
        return Ok(cap);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| AppError::Usage(format!("{CAP_ENV} must be an integer, got {v:?}"))),
        Err(_) => Ok(factors::DEFAULT_ENUM_CAP),
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let cap = effective_cap(cli)?;
    match &cli.command {
        Command::Prefix { n } => {
            if *n as u64 > cap {
                return Err(LibError::CapExceeded {
                    requested: *n as u64,
                    cap,
                }
                .into());
            }
            let word = sequence::prefix(*n);
            match cli.format {
                Format::Csv => println!("{word}"),
                Format::Json => println!("{}", json!({ "n": n, "prefix": word.to_string() })),
            }
            Ok(())
        }
        Command::Letter { n } => {
            let letter = sequence::cantor_letter(*n);
            match cli.format {
                Format::Csv => println!("{letter}"),
                Format::Json => println!("{}", json!({ "n": n, "letter": letter })),
            }
            Ok(())
        }
        Command::Factors { n } => {
            if *n == 0 {
                return Err(AppError::Usage("factor length must be at least 1".into()));
            }
            let set = factors::factors_capped(*n, cap)?;
            match cli.format {
                Format::Csv => {
                    let mut out = String::from("word,witness\n");
                    for (w, pos) in set.entries() {
                        writeln!(out, "{w},{pos}").unwrap();
                    }
                    print!("{out}");
                }
                Format::Json => {
                    let rows: Vec<_> = set
                        .entries()
                        .iter()
                        .map(|(w, pos)| json!({ "word": w.to_string(), "witness": pos }))
                        .collect();
                    println!("{}", json!({ "length": n, "factors": rows }));
                }
            }
            Ok(())
        }
        Command::Special { n, side } => {
            if *n as u64 > cap {
                return Err(LibError::CapExceeded {
                    requested: *n as u64,
                    cap,
                }
                .into());
            }
            let words = match side {
                Side::Right => factors::right_special(*n),
                Side::Left => factors::left_special(*n),
            };
            match cli.format {
                Format::Csv => {
                    let mut out = String::from("word\n");
                    for w in &words {
                        writeln!(out, "{w}").unwrap();
                    }
                    print!("{out}");
                }
                Format::Json => {
                    let side = match side {
                        Side::Right => "right",
                        Side::Left => "left",
                    };
                    let rows: Vec<String> = words.iter().map(|w| w.to_string()).collect();
                    println!("{}", json!({ "n": n, "side": side, "words": rows }));
                }
            }
            Ok(())
        }
        Command::Complexity { k, from, to, method } => {
            if *from > *to || *from == 0 {
                return Err(AppError::Usage(format!(
                    "range must be nonempty and start at 1, got {from}..{to}"
                )));
            }
            if *k == 0 {
                return Err(AppError::Usage("k must be at least 1".into()));
            }
            let method = Method::from_str(method).map_err(AppError::Usage)?;
            let mut table = formulas::ComplexityTable::new(*k);
            for n in *from..=*to {
                let (value, used) = formulas::k_abelian_complexity_capped(n, *k, method, cap)?;
                table.record(n, value, used)?;
            }
            if method == Method::Fast {
                let fallbacks: Vec<u64> = table
                    .entries
                    .iter()
                    .filter(|(_, (_, used))| *used == formulas::MethodUsed::Brute)
                    .map(|(n, _)| *n)
                    .collect();
                if !fallbacks.is_empty() {
                    table.note(format!(
                        "lengths below the formula threshold used brute force: {fallbacks:?}"
                    ));
                }
            }
            for note in &table.notes {
                eprintln!("note: {note}");
            }
            match cli.format {
                Format::Csv => {
                    let mut out = String::from("n,p_k,method\n");
                    for (n, (value, used)) in &table.entries {
                        writeln!(out, "{n},{value},{used}").unwrap();
                    }
                    print!("{out}");
                }
                Format::Json => {
                    let rows: Vec<_> = table
                        .entries
                        .iter()
                        .map(|(n, (value, used))| {
                            json!({ "n": n, "p_k": value, "method": used.to_string() })
                        })
                        .collect();
                    println!("{}", json!({ "k": k, "rows": rows, "notes": table.notes }));
                }
            }
            Ok(())
        }
        Command::Verify { kind, k, max_len } => {
            let report = run_verify(*kind, *k, *max_len)?;
            emit_verification(cli.format, *kind, &report);
            if report.is_clean() {
                Ok(())
            } else {
                Err(AppError::Failed(format!(
                    "{} counterexamples found",
                    report.counterexamples.len()
                )))
            }
        }
        Command::Gaps { count } => {
            match cli.format {
                Format::Csv => {
                    let mut out = String::from("j,d_j\n");
                    for j in 1..=*count {
                        writeln!(out, "{j},{}", formulas::gap(j)).unwrap();
                    }
                    print!("{out}");
                }
                Format::Json => {
                    let rows: Vec<_> = (1..=*count)
                        .map(|j| json!({ "j": j, "d_j": formulas::gap(j) }))
                        .collect();
                    println!("{}", json!({ "rows": rows }));
                }
            }
            Ok(())
        }
        Command::Types { level, word } => {
            if *level < 1 {
                return Err(AppError::Usage("level must be at least 1".into()));
            }
            let word: Word = word
                .parse()
                .map_err(|e: LibError| AppError::Usage(e.to_string()))?;
            let ts = factors::type_set(*level, &word)?;
            match cli.format {
                Format::Csv => {
                    let mut out = String::from("residue\n");
                    for r in &ts.residues {
                        writeln!(out, "{r}").unwrap();
                    }
                    print!("{out}");
                }
                Format::Json => {
                    let residues: Vec<u64> = ts.residues.iter().copied().collect();
                    println!(
                        "{}",
                        json!({ "level": level, "word": word.to_string(), "residues": residues })
                    );
                }
            }
            Ok(())
        }
        Command::Guess {
            target,
            max_rank,
            train,
            test,
        } => run_guess(target, *max_rank, *train, *test),
    }
}

fn run_verify(kind: VerifyKind, k: u64, max_len: usize) -> Result<EquivalenceReport, AppError> {
    if matches!(kind, VerifyKind::TheoremB | VerifyKind::Occurrence) && k == 0 {
        return Err(AppError::Usage("k must be at least 1".into()));
    }
    match kind {
        VerifyKind::TheoremB => {
            // Sweep every length up to the bound and merge the reports.
            let mut merged: Option<EquivalenceReport> = None;
            for n in 1..=max_len {
                let r = kabelian::verify_reduction(k as usize, n)?;
                merged = Some(match merged {
                    None => r,
                    Some(mut acc) => {
                        acc.checked += r.checked;
                        acc.counterexamples.extend(r.counterexamples);
                        acc.n = n as u64;
                        acc
                    }
                });
            }
            merged.ok_or_else(|| AppError::Usage("max-len must be at least 1".into()))
        }
        VerifyKind::Delta => {
            if k > 2 {
                return Err(AppError::Usage(
                    "delta sweeps support block exponents 0..=2".into(),
                ));
            }
            Ok(kabelian::verify_delta_congruences(k as u32, max_len)?)
        }
        VerifyKind::Occurrence => Ok(kabelian::verify_occurrence_identities(
            k as usize, max_len,
        )?),
        VerifyKind::LinearSystem => Ok(kabelian::verify_linear_system(k, max_len)?),
    }
}

fn emit_verification(format: Format, kind: VerifyKind, report: &EquivalenceReport) {
    let kind = match kind {
        VerifyKind::TheoremB => "theorem-b",
        VerifyKind::Delta => "delta",
        VerifyKind::Occurrence => "occurrence",
        VerifyKind::LinearSystem => "linear-system",
    };
    let status = if report.is_clean() { "ok" } else { "fail" };
    let first = report.counterexamples.first();
    match format {
        Format::Csv => {
            println!("status,count,first_counterexample");
            println!(
                "{status},{},{}",
                report.counterexamples.len(),
                first.map(|s| s.replace(',', ";")).unwrap_or_default()
            );
        }
        Format::Json => {
            println!(
                "{}",
                json!({
                    "kind": kind,
                    "k": report.k,
                    "max_len": report.n,
                    "status": status,
                    "count": report.counterexamples.len(),
                    "first_counterexample": first,
                    "checked": report.checked,
                })
            );
        }
    }
}

fn run_guess(target: &str, max_rank: usize, train: usize, test: u64) -> Result<(), AppError> {
    if train < 8 * max_rank {
        return Err(AppError::Usage(format!(
            "training window {train} is shorter than 8 * max_rank = {}",
            8 * max_rank
        )));
    }
    let oracle: Box<dyn Fn(u64) -> BigInt> = match target {
        "mc" => Box::new(|n| BigInt::from(formulas::max_sum(n))),
        "p1" => Box::new(|n| BigInt::from(formulas::abelian_complexity(n))),
        "p2" => Box::new(|n| BigInt::from(formulas::two_abelian(n))),
        other => match other.strip_prefix("pk:") {
            Some(kstr) => {
                let k: u64 = kstr.parse().map_err(|_| {
                    AppError::Usage(format!("bad k in target {other:?}"))
                })?;
                if k < 1 {
                    return Err(AppError::Usage("k must be at least 1".into()));
                }
                let eval = KFastEvaluator::new(k)?;
                Box::new(move |n| BigInt::from(eval.eval(n)))
            }
            None => {
                return Err(AppError::Usage(format!(
                    "unknown target {other:?} (expected mc, p1, p2 or pk:K)"
                )))
            }
        },
    };
    match guess_representation(oracle.as_ref(), 3, max_rank, train) {
        Ok(found) => {
            let report = verify_representation(&found.rep, oracle.as_ref(), 0, test);
            println!("{}", found.rep.to_json());
            match report.first_mismatch {
                None => {
                    eprintln!(
                        "target {target}: rank {} representation verified on [0, {test}]",
                        found.rep.rank
                    );
                    Ok(())
                }
                Some(m) => Err(AppError::Failed(format!(
                    "representation disagrees with {target} at n = {}: expected {}, got {}",
                    m.n, m.expected, m.got
                ))),
            }
        }
        Err(failure) => Err(AppError::Failed(format!("target {target}: {failure}"))),
    }
}
