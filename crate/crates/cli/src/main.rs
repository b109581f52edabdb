//! `geocycle`: quadratic forms, theta series, mock modular forms and cycle integrals
//! from the command line, with verification drivers for the two central identities.

mod cache;
mod commands;
mod output;
mod parse;
mod verify;

use clap::{Args, Parser, Subcommand};
use output::{code, Format, Output};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "geocycle", version, about = "Cycle integrals along closed geodesics of the modular curve")]
#[command(after_help = "Exit codes: 0 all checks pass, 2 verification failure, 3 invalid input, 4 precision or order insufficient.")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Settings shared by every subcommand; all of them are embedded in reports.
#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    pub prec: u32,
    /// Series order in exponent units (default depends on the command).
    #[arg(long, global = true)]
    pub order: Option<i64>,
    /// Largest denominator accepted by rational recognition.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub den_bound: u64,
    /// Pass/fail tolerance (default depends on the command).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for cached exact expansions; caching is off when absent.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomly drawn test points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Experimental principal value through poles on the cycle, by δ-extrapolation.
    #[arg(long, global = true)]
    pub pv: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Binary quadratic forms.
    #[command(subcommand)]
    Forms(commands::FormsCmd),
    /// Closed geodesics.
    #[command(subcommand)]
    Geodesic(commands::GeodesicCmd),
    /// The lattice splitting attached to a form.
    #[command(subcommand)]
    Lattice(commands::LatticeCmd),
    /// Exact q-expansions.
    #[command(subcommand)]
    Series(commands::SeriesCmd),
    /// Numerical evaluation.
    #[command(subcommand)]
    Eval(commands::EvalCmd),
    /// Verification drivers.
    #[command(subcommand)]
    Verify(verify::VerifyCmd),
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<geocycle::Error> for Failure {
    fn from(e: geocycle::Error) -> Self {
        Failure { code: output::exit_code(&e), message: e.to_string() }
    }
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure { code: code::INVALID, message: message.into() }
    }
}

pub struct Ctx {
    pub global: Global,
    pub cache: cache::Cache,
}

fn run(cli: Cli) -> Result<Output, Failure> {
    if cli.global.prec < 53 {
        return Err(Failure::invalid("--prec must be at least 53 bits"));
    }
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::invalid(format!("cannot start {n} threads: {e}")))?;
    }
    let cache = cache::Cache::new(cli.global.cache_dir.as_deref())
        .map_err(|e| Failure::invalid(format!("cache directory unusable: {e}")))?;
    let ctx = Ctx { global: cli.global, cache };
    match cli.cmd {
        Cmd::Forms(c) => commands::forms(&ctx, c),
        Cmd::Geodesic(c) => commands::geodesic(&ctx, c),
        Cmd::Lattice(c) => commands::lattice(&ctx, c),
        Cmd::Series(c) => commands::series(&ctx, c),
        Cmd::Eval(c) => commands::eval(&ctx, c),
        Cmd::Verify(c) => verify::verify(&ctx, c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(code::INVALID as u8),
            };
        }
    };
    let fmt = cli.global.format;
    match run(cli) {
        Ok(out) => {
            print!("{}", out.render(fmt));
            if out.passed {
                ExitCode::from(code::PASS as u8)
            } else {
                ExitCode::from(code::VERIFY_FAILED as u8)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
