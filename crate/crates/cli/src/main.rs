//! `netsec`: command-line surface for the equilibrium solvers. Reads
//! game configurations, runs the solvers and comparative analyses, and
//! emits machine-readable reports (JSON) and plot-ready tables (CSV).
//!
//! Data goes to stdout (or `--out`); diagnostics go to stderr, with
//! verbosity controlled by the `NETSEC_LOG` environment variable. Exit
//! codes: 0 success, 2 flag or configuration problems, 3 solver
//! failures, 4 when a profile was produced but failed verification.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::SweepParam;

/// Errors carrying their exit code: 2 usage, 3 solver, 4 verification.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Best-response sweeps from the empty profile.
    Brd,
    /// Complementarity pivoting.
    Lcp,
    /// Direct solve of the all-interior linear system.
    Interior,
    /// Best-response sweeps, falling back to pivoting when unverified.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "netsec",
    version,
    about = "Equilibrium analysis for interdependent security games on networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical points, thresholds, and the regularity window for one
    /// parameter set, as JSON on stdout.
    CriticalPoints {
        /// Prelec curvature, in (0, 1].
        #[arg(long)]
        alpha: f64,
        /// Protection cost per unit of investment.
        #[arg(long, default_value_t = 0.45)]
        c: f64,
        /// Loss on a successful attack.
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        /// Extended neighborhood size (1 + degree).
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Solve the configured game and write the equilibrium report.
    Solve {
        /// Game configuration (JSON).
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Randomize the sweep order of the dynamics with this seed
        /// (default: fixed round-robin order).
        #[arg(long)]
        seed: Option<u64>,
        /// Sweep budget for the dynamics.
        #[arg(long, default_value_t = netsec_core::total_effort::DEFAULT_MAX_SWEEPS)]
        max_sweeps: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the equilibria of two curvatures across densities, as
    /// CSV on stdout with a density-threshold trailer.
    CompareWeighting {
        /// Lower curvature (more pronounced weighting).
        #[arg(long)]
        alpha1: f64,
        /// Higher curvature; must exceed --alpha1.
        #[arg(long)]
        alpha2: f64,
        #[arg(long)]
        c: f64,
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        /// Inclusive extended-neighborhood range, `lo..hi` or one value.
        #[arg(long, default_value = "2..10")]
        d_range: String,
    },
    /// Re-solve the configured game across a parameter range and emit
    /// plot-ready CSV, one row per point.
    Sweep {
        /// Game configuration (JSON); total-effort games only.
        config: PathBuf,
        /// What to vary: alpha, c, or d_avg (k-regular graphs only).
        #[arg(long)]
        param: SweepParam,
        /// `start:end:steps`, both ends included.
        #[arg(long)]
        range: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the weighting function (or its slope) on a grid, one
    /// column per curvature, as CSV on stdout.
    Curve {
        /// Curvature value; repeat the flag for several columns.
        #[arg(long = "alpha", required = true)]
        alphas: Vec<f64>,
        /// Number of interior grid points.
        #[arg(long, default_value_t = 199)]
        points: usize,
        /// Emit the derivative instead of the function value.
        #[arg(long)]
        deriv: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::CriticalPoints { alpha, c, l, d } => {
            commands::cmd_critical_points(alpha, c, l, d)
        }
        Command::Solve {
            config,
            method,
            seed,
            max_sweeps,
            format,
            out,
        } => commands::cmd_solve(config, method, seed, max_sweeps, format, out),
        Command::CompareWeighting {
            alpha1,
            alpha2,
            c,
            l,
            d_range,
        } => commands::cmd_compare_weighting(alpha1, alpha2, c, l, d_range),
        Command::Sweep {
            config,
            param,
            range,
            method,
            out,
        } => commands::cmd_sweep(config, param, range, method, out),
        Command::Curve {
            alphas,
            points,
            deriv,
        } => commands::cmd_curve(alphas, points, deriv),
    }
}

fn main() {
    env_logger::Builder::from_env(
        env_logger::Env::new()
            .filter("NETSEC_LOG")
            .write_style("NETSEC_LOG_STYLE"),
    )
    .init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}
