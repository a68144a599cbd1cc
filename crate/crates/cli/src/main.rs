//! `octacount`: exact rhombus-tiling counts for centro-symmetric octagons.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 method inapplicable, 4 budget exceeded.

mod record;
mod verify;

use std::io::{self, Write};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use octacount::{
    elnitsky_a1c1, elnitsky_ab11, entropy, hex_count, lower_bound, oracle, reference_count,
    theorem1_count, theorem1_count_with, CountOptions, CountReport, Method, OracleError, Sides,
};

use record::OutputRecord;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INAPPLICABLE: u8 = 3;
const EXIT_BUDGET: u8 = 4;

/// Term count above which `count` warns before starting.
const WARN_TERMS: u64 = 100_000_000;

#[derive(Parser)]
#[command(name = "octacount", version, about = "Exact rhombus tiling counts for centro-symmetric octagons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the tilings of the octagon with sides A B C D
    Count(CountArgs),
    /// Run the built-in consistency suites
    Verify(VerifyArgs),
    /// Tabulate the diagonal octagons (n,n,n,n)
    Table(TableArgs),
    /// Configurational entropy per tile, ln(T)/N_T
    Entropy(EntropyArgs),
    /// Hexagon tiling count, or the octagon lower bound with --bound
    Hex(HexArgs),
}

#[derive(Args, Clone, Copy)]
struct SideArgs {
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    a: u32,
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    b: u32,
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    c: u32,
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
}

impl SideArgs {
    fn sides(self) -> Sides {
        Sides::new(self.a, self.b, self.c, self.d).expect("clap enforces positive sides")
    }
}

#[derive(Args, Clone, Copy)]
struct WorkerArgs {
    /// Worker threads [default: available parallelism]
    #[arg(long, env = "OCTACOUNT_WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,
}

impl WorkerArgs {
    fn resolve(self) -> usize {
        self.workers
            .map(|w| w as usize)
            .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Det,
    Oracle,
    Elnitsky,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    sides: SideArgs,
    #[arg(long, value_enum, default_value = "det")]
    method: MethodArg,
    #[command(flatten)]
    workers: WorkerArgs,
    /// Emit a single JSON object
    #[arg(long)]
    json: bool,
    /// Report terms done on standard error, at most once per second
    #[arg(long)]
    progress: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    max_side: u32,
    #[command(flatten)]
    workers: WorkerArgs,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    diagonal: u32,
    #[arg(long)]
    csv: bool,
    /// Rows needing more terms than this are skipped
    #[arg(long, default_value_t = WARN_TERMS)]
    max_terms: u64,
    #[command(flatten)]
    workers: WorkerArgs,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    sides: SideArgs,
    /// Use this tiling count instead of computing it
    #[arg(long)]
    count: Option<BigUint>,
    /// Largest sum to evaluate before falling back to reference counts
    #[arg(long, default_value_t = WARN_TERMS)]
    max_terms: u64,
    #[command(flatten)]
    workers: WorkerArgs,
}

#[derive(Args)]
struct HexArgs {
    /// Hexagon sides P Q R
    #[arg(num_args = 3, value_names = ["P", "Q", "R"], required_unless_present = "bound", conflicts_with = "bound")]
    dims: Vec<u32>,
    /// Print the octagon lower bound T_hex(b,d,c)·T_hex(b,d,a) instead
    #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"])]
    bound: Option<Vec<u32>>,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Table(args) => cmd_table(args),
        Command::Entropy(args) => cmd_entropy(args),
        Command::Hex(args) => cmd_hex(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("octacount: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn term_estimate(sides: &Sides) -> BigUint {
    octacount::count_x(sides) * octacount::count_y(sides)
}

/// Runs the determinantal sum, optionally with a progress line on stderr.
fn run_det(sides: &Sides, workers: usize, progress: bool) -> Result<CountReport, Failure> {
    let terms = term_estimate(sides);
    if terms > BigUint::from(WARN_TERMS) {
        eprintln!("octacount: warning: {sides} needs {terms} terms; this may take a long time");
    }
    let counter = AtomicU64::new(0);
    let done = AtomicBool::new(false);
    let options = CountOptions { workers, progress: progress.then_some(&counter) };
    let report = thread::scope(|scope| {
        if progress {
            scope.spawn(|| {
                let mut last = Instant::now();
                while !done.load(Ordering::Relaxed) {
                    thread::sleep(Duration::from_millis(50));
                    if last.elapsed() >= Duration::from_secs(1) {
                        eprintln!("progress: {} / {terms} terms", counter.load(Ordering::Relaxed));
                        last = Instant::now();
                    }
                }
            });
        }
        let report = theorem1_count_with(sides, options);
        done.store(true, Ordering::Relaxed);
        report
    });
    report.map_err(|e| Failure::new(EXIT_VERIFY, e.to_string()))
}

/// A relabeling of `sides` that one of the closed forms covers.
fn closed_form(sides: &Sides) -> Option<(Method, BigUint, BigUint)> {
    let images = sides.symmetric_images();
    if let Some(s) = images.iter().find(|s| s.b() == 1 && s.d() == 1) {
        let summands = BigUint::from((s.a() + 1) as u64 * (s.c() + 1) as u64);
        return Some((Method::ElnitskyA1c1, elnitsky_a1c1(s.a(), s.c()), summands));
    }
    let s = images.iter().find(|s| s.c() == 1 && s.d() == 1)?;
    let value = elnitsky_ab11(s.a(), s.b()).ok()?;
    Some((Method::ElnitskyAb11, value, BigUint::from(1u32)))
}

fn cmd_count(args: CountArgs) -> CmdResult {
    let sides = args.sides.sides();
    let workers = args.workers.resolve();
    let report = match args.method {
        MethodArg::Det => run_det(&sides, workers, args.progress)?,
        MethodArg::Oracle => oracle::oracle_total(&sides).map_err(|e| match e {
            OracleError::ScaleExceeded { .. } => Failure::new(EXIT_BUDGET, e.to_string()),
            OracleError::Domain(_) => Failure::new(EXIT_USAGE, e.to_string()),
        })?,
        MethodArg::Elnitsky => {
            let start = Instant::now();
            let (method, count, terms) = closed_form(&sides).ok_or_else(|| {
                Failure::new(
                    EXIT_INAPPLICABLE,
                    format!("method inapplicable: {sides} is not (a,1,c,1) or (a,b,1,1) up to symmetry"),
                )
            })?;
            CountReport {
                sides,
                method,
                count,
                terms_evaluated: terms,
                elapsed: start.elapsed(),
                workers: 1,
                determinants_evaluated: 0,
                zero_determinants: 0,
            }
        }
    };
    let record = OutputRecord::from_report(&report);
    if args.json {
        println!("{}", record.to_json());
    } else {
        println!("{}", record.count);
        eprintln!(
            "sides {sides}  method {}  terms {}  tiles {}  {} ms  workers {}",
            record.method, record.terms, record.tiles, record.elapsed_ms, record.workers
        );
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let results = verify::run(args.max_side, args.workers.resolve());
    print!("{}", verify::summary(&results));
    match results.iter().find(|r| r.failure.is_some()) {
        Some(r) => Err(Failure::new(
            EXIT_VERIFY,
            format!("suite {} failed: {}", r.name, r.failure.as_deref().unwrap_or("")),
        )),
        None => {
            println!("all suites passed");
            Ok(())
        }
    }
}

fn cmd_table(args: TableArgs) -> CmdResult {
    let workers = args.workers.resolve();
    let mut out = io::stdout().lock();
    let write_err = |e: io::Error| Failure::new(EXIT_USAGE, e.to_string());
    if args.csv {
        writeln!(out, "n,count,tiles,entropy").map_err(write_err)?;
    } else {
        writeln!(out, "{:>3}  {:>28}  {:>6}  {:>9}", "n", "count", "tiles", "entropy").map_err(write_err)?;
    }
    for n in 1..=args.diagonal {
        let sides = Sides::new(n, n, n, n).expect("positive");
        let tiles = sides.tile_count();
        let row = if term_estimate(&sides) > BigUint::from(args.max_terms) {
            None
        } else {
            let report = theorem1_count(&sides, workers).map_err(|e| Failure::new(EXIT_VERIFY, e.to_string()))?;
            let s = entropy(&sides, &report.count).map_err(|e| Failure::new(EXIT_VERIFY, e.to_string()))?;
            Some((report.count, s))
        };
        let line = match (&row, args.csv) {
            (Some((count, s)), true) => format!("{n},{count},{tiles},{s:.6}"),
            (None, true) => format!("{n},skipped (budget),{tiles},"),
            (Some((count, s)), false) => format!("{n:>3}  {count:>28}  {tiles:>6}  {s:>9.6}"),
            (None, false) => format!("{n:>3}  {:>28}  {tiles:>6}  {:>9}", "skipped (budget)", "-"),
        };
        writeln!(out, "{line}").map_err(write_err)?;
        out.flush().map_err(write_err)?;
    }
    Ok(())
}

fn cmd_entropy(args: EntropyArgs) -> CmdResult {
    let sides = args.sides.sides();
    let count = if let Some(count) = args.count {
        count
    } else if term_estimate(&sides) <= BigUint::from(args.max_terms) {
        run_det(&sides, args.workers.resolve(), false)?.count
    } else if let Some(count) = reference_count(&sides) {
        eprintln!("octacount: using the built-in reference count for {sides}");
        count
    } else {
        return Err(Failure::new(
            EXIT_BUDGET,
            format!("{sides} needs {} terms, above --max-terms; pass --count", term_estimate(&sides)),
        ));
    };
    let s = entropy(&sides, &count).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    println!("{s:.6}");
    Ok(())
}

fn cmd_hex(args: HexArgs) -> CmdResult {
    match args.bound {
        Some(b) => {
            let sides = Sides::new(b[0], b[1], b[2], b[3]).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
            println!("{}", lower_bound(&sides));
        }
        None => println!("{}", hex_count(args.dims[0], args.dims[1], args.dims[2])),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn closed_form_matches_rotations() {
        let s = Sides::new(1, 3, 1, 2).unwrap();
        let (method, value, _) = closed_form(&s).unwrap();
        assert_eq!(method, Method::ElnitskyA1c1);
        assert_eq!(value, elnitsky_a1c1(3, 2));
        let s = Sides::new(1, 2, 3, 1).unwrap();
        let (method, value, _) = closed_form(&s).unwrap();
        assert_eq!(method, Method::ElnitskyAb11);
        assert_eq!(value, theorem1_count(&s, 1).unwrap().count);
        assert!(closed_form(&Sides::new(2, 2, 2, 2).unwrap()).is_none());
    }
}
