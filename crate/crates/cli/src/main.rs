//! `dyadic-fht` command-line front end.

use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dyadic_fht::error_analysis::{error_histogram, error_profile, global_max_error};
use dyadic_fht::ising::SCAN_CAP;
use dyadic_fht::lcg::Lcg;
use dyadic_fht::maximizer::search_maximizers;
use dyadic_fht::pattern::{cumulative_build, pattern_recursive, pattern_sum, shift_multiset};
use dyadic_fht::report::{
    accumulator_csv, histogram_csv, ising_csv, maximizer_summary_row, pattern_csv, profile_csv,
    summary_row, table_sums_csv, MAXIMIZER_SUMMARY_HEADER, SUMMARY_HEADER,
};
use dyadic_fht::verify::{self, Fault, VerifyOptions};
use dyadic_fht::{exhaustive_cap, fht_quadrant, pgm, Error, ImageGrid, PatternParams, Quadrant};

const EXIT_IO: u8 = 1;
const EXIT_PARAMETER: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "dyadic-fht", version, about = "Fast Hough transform over dyadic patterns, with exact error analysis")]
struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,

    /// Write the primary CSV to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hough accumulator of a PGM image (or a seeded random image).
    Fht {
        /// Square power-of-two PGM image (P2 or P5).
        input: Option<PathBuf>,
        /// Exponent of a seeded random image, used when no input is given.
        #[arg(long, conflicts_with = "input", requires = "seed")]
        p: Option<u32>,
        /// Seed of the random image.
        #[arg(long, requires = "p")]
        seed: Option<u64>,
        /// Largest pixel value of the random image.
        #[arg(long, default_value_t = 255, requires = "p")]
        maxval: u32,
        #[arg(long, value_enum, default_value_t = QuadrantArg::Hr)]
        quadrant: QuadrantArg,
    },
    /// Ordinates of one dyadic pattern as "x,y".
    Pattern {
        #[arg(long)]
        p: u32,
        /// Slope (vertical rise over the full width), 0 <= t < 2^p.
        #[arg(long)]
        t: u64,
        /// Intercept added to every ordinate.
        #[arg(long, default_value_t = 0)]
        intercept: u64,
        #[arg(long, value_enum, default_value_t = Method::BitSum)]
        method: Method,
    },
    /// Exact peak approximation error; summary to stdout, per-slope profile to --out.
    ErrorScan {
        #[arg(long)]
        p: u32,
    },
    /// Histogram of signed errors over all (slope, abscissa) pairs.
    ErrorHist {
        #[arg(long)]
        p: u32,
        /// Bin count (default 2p+1).
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Cyclic-table maximizer search; summary to stdout, argmax tables to --out.
    Maximizer {
        #[arg(long)]
        p: u32,
        /// Enumerate every word instead of skipping pruned templates.
        #[arg(long)]
        no_prune: bool,
    },
    /// Table functional and spin-ring energy for every word.
    Ising {
        #[arg(long)]
        p: u32,
    },
    /// Run the invariant suite over an exponent range.
    Verify {
        /// Exponent `A` or inclusive range `A..B`.
        #[arg(long, value_parser = parse_range)]
        p: RangeSpec,
        /// Deliberately break an internal step to exercise the suite.
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum QuadrantArg {
    Hr,
    Hl,
    Vr,
    Vl,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Recursive,
    BitSum,
    Cumulative,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    Rounding,
}

#[derive(Clone, Debug)]
struct RangeSpec(u32, u32);

impl RangeSpec {
    fn range(&self) -> RangeInclusive<u32> {
        self.0..=self.1
    }
}

fn parse_range(s: &str) -> std::result::Result<RangeSpec, String> {
    let num = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("invalid exponent {v:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(RangeSpec(num(a)?, num(b.trim_start_matches('='))?)),
        None => num(s).map(|p| RangeSpec(p, p)),
    }
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Format(_) => EXIT_IO,
            Error::Parameter(_) | Error::Capability(_) => EXIT_PARAMETER,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_IO, message: e.to_string() }
    }
}

fn parameter(message: String) -> Failure {
    Failure { code: EXIT_PARAMETER, message }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w as usize).build_global() {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_PARAMETER);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Fht { input, p, seed, maxval, quadrant } => {
            let image = match (input, p, seed) {
                (Some(path), _, _) => pgm::read_grid(path).map_err(|e| {
                    let f = Failure::from(e);
                    Failure { code: f.code, message: format!("{}: {}", path.display(), f.message) }
                })?,
                (None, Some(p), Some(seed)) => Lcg::new(*seed).image(*p, *maxval)?,
                _ => return Err(parameter("fht needs an input PGM or --p with --seed".into())),
            };
            emit(out, &fht_csv(&image, *quadrant))
        }
        Command::Pattern { p, t, intercept, method } => {
            let params = PatternParams::new(*p, *t, *intercept)?;
            let pattern = match method {
                Method::Recursive => pattern_recursive(params),
                Method::BitSum => pattern_sum(params),
                Method::Cumulative => cumulative_build(*p, &shift_multiset(params), *intercept)?,
            };
            emit(out, &pattern_csv(&pattern))
        }
        Command::ErrorScan { p } => {
            if let Some(path) = out {
                write_file(path, &profile_csv(&error_profile(*p, false)?))?;
            }
            let max = global_max_error(*p)?;
            emit(None, &format!("{SUMMARY_HEADER}\n{}\n", summary_row(*p, &max)))
        }
        Command::ErrorHist { p, bins } => {
            let bins = bins.unwrap_or(2 * *p as usize + 1);
            emit(out, &histogram_csv(&error_histogram(*p, bins)?))
        }
        Command::Maximizer { p, no_prune } => {
            let rep = search_maximizers(*p, !no_prune)?;
            if let Some(path) = out {
                write_file(path, &table_sums_csv(*p, rep.argmax_xs.iter().copied()))?;
            }
            emit(None, &format!("{MAXIMIZER_SUMMARY_HEADER}\n{}\n", maximizer_summary_row(&rep)))
        }
        Command::Ising { p } => {
            let cap = exhaustive_cap().min(SCAN_CAP);
            if *p > cap {
                return Err(parameter(format!("ising table capped at p = {cap}, got {p}")));
            }
            emit(out, &ising_csv(*p)?)
        }
        Command::Verify { p, inject_fault } => {
            let opts = VerifyOptions { fault: inject_fault.map(|FaultArg::Rounding| Fault::Rounding) };
            let report = verify::run(p.range(), &opts)?;
            let mut table = String::new();
            for outcome in &report.outcomes {
                table.push_str(&outcome.to_string());
                table.push('\n');
            }
            emit(out, &table)?;
            match report.first_failure() {
                None => Ok(()),
                Some(f) => Err(Failure {
                    code: EXIT_VERIFICATION,
                    message: format!(
                        "check {} failed at p={}: {}",
                        f.name,
                        f.p,
                        f.failure.as_deref().unwrap_or_default()
                    ),
                }),
            }
        }
    }
}

fn fht_csv(image: &ImageGrid, quadrant: QuadrantArg) -> String {
    let single = |q: Quadrant| accumulator_csv(&fht_quadrant(&q.prepare(image)));
    match quadrant {
        QuadrantArg::Hr => single(Quadrant::HRight),
        QuadrantArg::Hl => single(Quadrant::HLeft),
        QuadrantArg::Vr => single(Quadrant::VRight),
        QuadrantArg::Vl => single(Quadrant::VLeft),
        QuadrantArg::All => {
            let mut csv = String::from("quadrant,t,s,value\n");
            for q in Quadrant::ALL {
                for line in single(q).lines().skip(1) {
                    csv.push_str(q.tag());
                    csv.push(',');
                    csv.push_str(line);
                    csv.push('\n');
                }
            }
            csv
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) })
}

fn emit(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(path) => write_file(path, contents),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
