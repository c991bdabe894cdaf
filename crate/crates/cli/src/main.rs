use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use g2zeta::batch::{parse_modp, process_prime, DEFAULT_SEED};
use g2zeta::curve::FP2_COUNT_CAP;
use g2zeta::field::is_prime;
use g2zeta::oracle::exact_lpoly_with;
use g2zeta::{CurveQ, Exec, ModPInput, Outcome, PrimeModulus, RangeConfig, Record};

/// Exact genus-2 L-polynomials from their reduction mod p.
#[derive(Parser)]
#[command(name = "g2zeta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lift one prime's mod-p data to the exact L-polynomial.
    Lift(LiftArgs),
    /// Lift every odd prime up to a bound.
    Range(RangeArgs),
    /// Count points to get the exact L-polynomial.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct CurveArg {
    /// Integer coefficients c0,...,c6 of f, lowest degree first.
    #[arg(long, allow_hyphen_values = true)]
    curve: String,
}

#[derive(Args)]
struct LiftArgs {
    #[command(flatten)]
    curve: CurveArg,
    #[arg(long)]
    prime: u64,
    /// a1 mod p.
    #[arg(long, requires = "a2", conflicts_with = "input")]
    a1: Option<u64>,
    /// a2 mod p.
    #[arg(long, requires = "a1")]
    a2: Option<u64>,
    /// Mod-p input file.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct RangeArgs {
    #[command(flatten)]
    curve: CurveArg,
    #[arg(long)]
    bound: u64,
    /// Mod-p input file; primes without a row are point-counted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write records here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest p handled by point counting.
    #[arg(long, default_value_t = FP2_COUNT_CAP)]
    oracle_cap: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    curve: CurveArg,
    #[arg(long)]
    prime: u64,
    /// Use the quadratic twist by the least non-residue.
    #[arg(long)]
    twist: bool,
    #[arg(long, default_value_t = FP2_COUNT_CAP)]
    cap: u64,
}

enum Failure {
    Usage(String),
    Run(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Lift(a) => cmd_lift(a),
        Command::Range(a) => cmd_range(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_curve(c: &CurveArg) -> Result<CurveQ, Failure> {
    c.curve.parse().map_err(|e| Failure::Usage(format!("--curve: {e}")))
}

fn check_prime(p: u64) -> Result<(), Failure> {
    if p < 3 || !is_prime(p) {
        return Err(Failure::Usage(format!("--prime {p} is not an odd prime")));
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<std::collections::BTreeMap<u64, ModPInput>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_modp(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_lift(a: LiftArgs) -> Result<(), Failure> {
    let curve = parse_curve(&a.curve)?;
    check_prime(a.prime)?;
    let input = match (a.a1, a.a2, &a.input) {
        (Some(a1), Some(a2), _) => Some(ModPInput { a1, a2 }),
        (_, _, Some(path)) => read_input(path)?.get(&a.prime).copied(),
        _ => None,
    };
    match process_prime(&curve, a.prime, input, a.seed, FP2_COUNT_CAP) {
        Outcome::Done(r) => {
            println!("{}", r.to_json());
            Ok(())
        }
        Outcome::Skipped(why) => Err(Failure::Run(why)),
        Outcome::Failed(why) => Err(Failure::Run(why)),
    }
}

fn cmd_range(a: RangeArgs) -> Result<(), Failure> {
    let curve = parse_curve(&a.curve)?;
    if a.bound < 3 {
        return Err(Failure::Usage("--bound must be at least 3".into()));
    }
    if a.jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let mut cfg = RangeConfig::new(curve, a.bound);
    cfg.input = a.input.as_deref().map(read_input).transpose()?;
    cfg.seed = a.seed;
    cfg.jobs = a.jobs;
    cfg.oracle_cap = a.oracle_cap;
    let out = g2zeta::run_range(&cfg);
    let text = out.to_jsonl();
    match &a.output {
        Some(path) => fs::write(path, &text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if out.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Run(format!("{} prime(s) failed", out.failures.len())))
    }
}

fn cmd_oracle(a: OracleArgs) -> Result<(), Failure> {
    let curve = parse_curve(&a.curve)?;
    check_prime(a.prime)?;
    let m = PrimeModulus::new(a.prime).map_err(|e| Failure::Usage(e.to_string()))?;
    let c = curve.reduce(m).map_err(|e| Failure::Run(e.to_string()))?;
    let c = if a.twist { c.quadratic_twist() } else { c };
    let r = exact_lpoly_with(&c, a.cap, Exec::default()).map_err(|e| Failure::Run(e.to_string()))?;
    println!("{}", Record::from_oracle(&r, true).to_json());
    Ok(())
}
