//! Command-line front end: runs the verification suites of `heckelab-core`
//! and emits tables on stdout, CSV files, and SVG histograms.
//!
//! Exit codes: 0 success, 1 assertion failure (a verified identity did not
//! hold, a witness is printed), 2 usage or configuration error.

mod commands;
mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
    pub fn svg(self) -> bool {
        matches!(self, Format::Svg | Format::Both)
    }
}

/// Verification laboratory for the Hecke operators of PGL2 over the dual
/// numbers of a p-adic field.
///
/// CSV schemas (fixed column order, UTF-8, LF, '.' decimal):
///   operators.csv: case,params,n,dim_formula,dim_oracle,max_entry_deviation,status
///   spectrum.csv:  family,n,index,eigenvalue
///   weil.csv:      family,q,n,degree,totally_real,bound_ok,distinct_real_roots,pass
///   measure.csv:   row,k_or_n,exact,reference,status
///   algebra.csv:   check,psi_u,x,status
#[derive(Parser)]
#[command(name = "heckelab", version, about, verbatim_doc_comment)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Odd prime p (the residue field size q = p); the `weil` command also
    /// accepts prime powers, it only uses q as an integer matrix parameter
    #[arg(long, global = true, default_value_t = 3)]
    prime: i64,

    /// Working ϖ-adic precision (digits), at least 6
    #[arg(long, global = true, default_value_t = 12)]
    precision: u32,

    /// Matrix size / truncation for the spectral and measure commands
    #[arg(long, global = true, default_value_t = 200)]
    n: usize,

    /// Largest v(c) in the split-case sweep
    #[arg(long, global = true, default_value_t = 4)]
    vc: u32,

    /// Largest v(d) in the nonsplit-case sweep
    #[arg(long, global = true, default_value_t = 5)]
    vd: u32,

    /// Largest character conductor in the sweeps
    #[arg(long, global = true, default_value_t = 2)]
    conductor: u32,

    /// χ(ϖ) for the integer-spec families: 1 or -1
    #[arg(long = "chi-pi", global = true, default_value_t = 1, allow_hyphen_values = true)]
    chi_pi: i64,

    /// Output directory for CSV/SVG artifacts
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    format: Format,

    /// Seed for the randomized spot-checks (echoed in the output)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convolution structure constants and T_x ⋆ T_y coefficients
    Structure,
    /// Closed-form operator matrices vs the brute-force action oracle
    Operators,
    /// Eigenvalues, spectral bounds, and the arcsine histogram
    Spectrum,
    /// Weil-number certification of the characteristic polynomials
    Weil,
    /// Exact moments and the semicircle limit of the nilpotent case
    Measure,
    /// Evaluation-morphism identities of the commutative algebra
    Algebra,
    /// Run every suite with the current configuration
    All,
}

fn is_odd_prime(p: i64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub struct Config {
    pub prime: i64,
    pub precision: u32,
    pub n: usize,
    pub vc: u32,
    pub vd: u32,
    pub conductor: u32,
    pub chi_pi: i64,
    pub out: PathBuf,
    pub format: Format,
    pub seed: u64,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.chi_pi != 1 && cli.chi_pi != -1 {
        return usage_error("--chi-pi must be 1 or -1");
    }
    if cli.precision < 6 {
        return usage_error("--precision must be at least 6");
    }
    if cli.n == 0 {
        return usage_error("--n must be positive");
    }
    let needs_odd_prime = !matches!(cli.cmd, Cmd::Weil);
    if needs_odd_prime && !is_odd_prime(cli.prime) {
        return usage_error("--prime must be an odd prime (residue characteristic 2 is excluded)");
    }
    if matches!(cli.cmd, Cmd::Structure | Cmd::All) && !matches!(cli.prime, 3 | 5 | 7) {
        return usage_error("the structure suite supports --prime 3, 5, or 7");
    }
    if matches!(cli.cmd, Cmd::Weil) && cli.prime < 2 {
        return usage_error("--prime must be at least 2 for the weil suite");
    }

    if let Ok(threads) = std::env::var("HECKELAB_THREADS") {
        match threads.parse::<usize>() {
            Ok(k) if k >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => return usage_error("HECKELAB_THREADS must be a positive integer"),
        }
    }

    let cfg = Config {
        prime: cli.prime,
        precision: cli.precision,
        n: cli.n,
        vc: cli.vc,
        vd: cli.vd,
        conductor: cli.conductor,
        chi_pi: cli.chi_pi,
        out: cli.out,
        format: cli.format,
        seed: cli.seed,
    };

    let result = match cli.cmd {
        Cmd::Structure => commands::structure(&cfg),
        Cmd::Operators => commands::operators(&cfg),
        Cmd::Spectrum => commands::spectrum(&cfg),
        Cmd::Weil => commands::weil(&cfg),
        Cmd::Measure => commands::measure(&cfg),
        Cmd::Algebra => commands::algebra(&cfg),
        Cmd::All => commands::all(&cfg),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
