//! `hilbertnorm`: apply the Hilbert matrix operator, evaluate norms and
//! bounds, and run the inequality sweeps from the command line.
//!
//! Results go to stdout (or `--out`) as JSON by default, or as CSV with
//! `--format csv`. Exit codes: 0 on success, 1 on invalid input, 2 when a
//! quadrature or sweep failed to reach its tolerance.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "hilbertnorm", version, about = "Norm computations for the Hilbert matrix operator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Options,
}

/// Flags shared by every command; each command reads the ones it needs.
#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Target space: the Bergman space A^p or the Korenblum space H^∞_α.
    #[arg(long, global = true, value_enum)]
    pub space: Option<Space>,

    /// Weight exponent α of H^∞_α.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    /// Exponent p of A^p.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p: Option<f64>,

    /// Parameter t of the weighted composition operator T_t.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t: Option<f64>,

    /// Evaluation point as `re,im`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub at: Option<String>,

    /// Route for applying H.
    #[arg(long, global = true, value_enum, default_value_t = Method::Integral)]
    pub method: Method,

    /// Taylor coefficients as a JSON array of numbers or `[re, im]` pairs.
    #[arg(long, global = true)]
    pub coeffs: Option<PathBuf>,

    /// Use the closed form f(z) = (1 - z)^(-γ) as the input function.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub falpha: Option<f64>,

    /// Absolute tolerance for every quadrature.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Refinement levels allowed per quadrature (3 to 20).
    #[arg(long, global = true)]
    pub max_levels: Option<usize>,

    /// Number of coefficients kept on the coefficient route.
    #[arg(long, global = true)]
    pub order: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    /// Bergman space A^p.
    Ap,
    /// Korenblum growth space H^∞_α.
    Hinf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Truncated Hilbert matrix acting on the Taylor coefficients.
    Coeffs,
    /// Average of the weighted composition operators over t.
    Integral,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate H f (or T_t f with --t) at one point.
    Apply,
    /// Norm of the input function in A^p or H^∞_α.
    Norm,
    /// Norm of T_t on H^∞_α.
    Tnorm,
    /// Lower and upper bound for the norm of H.
    Bound,
    /// Sweep one inequality over its default grid.
    Verify {
        /// beta_bound, beta_2p or Fp_nonpositive.
        lemma: String,
    },
    /// Tabulate a quantity over a parameter range.
    Sweep {
        #[arg(value_enum)]
        quantity: commands::SweepQuantity,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        step: f64,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("HILBERTNORM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("HILBERTNORM_THREADS must be a positive integer, got '{raw}'"))?;
    if n == 0 {
        anyhow::bail!("HILBERTNORM_THREADS must be a positive integer, got '{raw}'");
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }

    let outcome = commands::run(&cli.command, &cli.opts);
    let code = outcome.exit_code();
    if let Some(doc) = outcome.document() {
        if let Err(e) = output::emit(doc, cli.opts.format, cli.opts.out.as_deref()) {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    }
    if let Some(msg) = outcome.message() {
        eprintln!("error: {msg}");
    }
    ExitCode::from(code)
}
