//! The `gapforge` command-line driver. `run` parses arguments, dispatches to
//! gapforge-core and writes a JSON report; it never calls `process::exit`, so
//! it can be driven from tests.

mod commands;
mod selftest;
mod walkcfg;

use clap::{Args, Parser, Subcommand};
use gapforge_core::rat::parse_rat;
use gapforge_core::{Error, Rat};
use serde_json::Value;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub use gapforge_core::serial::SCHEMA;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
    /// A check ran to completion and failed (verify, selftest).
    Rejected(Value),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Domain(e)
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "gapforge", version, about = "Exact invariants and ping-pong certificates for linear groups over Q")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Width of numeric enclosures, as a positive rational.
    #[arg(long, global = true, value_parser = positive_rat)]
    pub tol: Option<Rat>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Global {
    pub fn tol(&self) -> Rat {
        self.tol.clone().unwrap_or_else(gapforge_core::interval::default_tol)
    }
}

fn positive_rat(s: &str) -> Result<Rat, String> {
    let q = parse_rat(s).map_err(|e| e.to_string())?;
    if q <= Rat::from_integer(0.into()) {
        return Err("must be positive".into());
    }
    Ok(q)
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn place_arg(s: &str) -> Result<gapforge_core::Place, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weil height of a rational, height of a matrix, or Arakelov height of a subspace.
    Height(commands::HeightArgs),
    /// h(S^n)/n for n = 1..N and the spectral-radius lower bound.
    Hhat(commands::HhatArgs),
    /// Joint spectral radius bounds at one place.
    Jsr(commands::JsrArgs),
    /// Escape from a subvariety: orbit, matrix variety, or coset test.
    Escape(commands::EscapeArgs),
    /// Conjugators putting two subspaces in weak general position.
    Wgp(commands::WgpArgs),
    /// Search for (or directly check) a ping-pong certificate.
    Certify(commands::CertifyArgs),
    /// Re-check a certificate from scratch.
    Verify(commands::VerifyArgs),
    /// Bracket the norm of a random walk operator on an orbit.
    Qrnorm(commands::QrnormArgs),
    /// Monte-Carlo experiments on random matrix products.
    Walk(walkcfg::WalkArgs),
    /// Projective distances between subspaces at a place.
    Distances(commands::DistancesArgs),
    /// Run the built-in invariant suites.
    Selftest(selftest::SelftestArgs),
}

fn init_threads() {
    if let Some(n) = std::env::var("GAPFORGE_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        if n > 0 {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code: 0 success, 1 usage error, 2 domain error or failed check.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    init_threads();
    let g = cli.global.clone();
    let result = match cli.command {
        Command::Height(a) => commands::height(&a, &g),
        Command::Hhat(a) => commands::hhat(&a, &g),
        Command::Jsr(a) => commands::jsr(&a, &g),
        Command::Escape(a) => commands::escape(&a, &g),
        Command::Wgp(a) => commands::wgp(&a, &g),
        Command::Certify(a) => commands::certify(&a, &g),
        Command::Verify(a) => commands::verify(&a, &g),
        Command::Qrnorm(a) => commands::qrnorm(&a, &g),
        Command::Walk(a) => walkcfg::walk(&a, &g),
        Command::Distances(a) => commands::distances(&a, &g),
        Command::Selftest(a) => selftest::selftest(&a, &g),
    };
    match result {
        Ok(report) => match emit(&report, g.out.as_deref()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Domain(e)) => {
            let report = serde_json::json!({
                "schema": SCHEMA,
                "error": { "kind": e.kind(), "message": e.to_string() },
            });
            eprintln!("{}: {e}", e.kind());
            let _ = emit(&report, g.out.as_deref());
            EXIT_DOMAIN
        }
        Err(CliError::Rejected(report)) => {
            let _ = emit(&report, g.out.as_deref());
            EXIT_DOMAIN
        }
    }
}

fn emit(report: &Value, out: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize");
    match out {
        Some(p) => std::fs::write(p, text + "\n"),
        None => {
            use std::io::Write;
            writeln!(std::io::stdout().lock(), "{text}")
        }
    }
}

pub(crate) fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Report skeleton with the schema tag and command name.
pub(crate) fn report(command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), Value::String(SCHEMA.into()));
    m.insert("command".into(), Value::String(command.into()));
    m
}

pub(crate) fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialize")
}
