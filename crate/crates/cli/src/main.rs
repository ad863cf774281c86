mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "fusionframe", version, about = "Certify, construct and search for tight p-fusion frames")]
pub struct Cli {
    /// Seed for every random choice (Monte-Carlo, probes, restarts).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a certification on a frame file and print a JSON report.
    Check(CheckArgs),
    /// Build a frame and write it as JSON.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Tabulate the Grassmannian moments T_{k,l,d}(p) as CSV.
    Moments(MomentsArgs),
    /// Minimize the frame potential of n equally weighted k-planes.
    Optimize(OptimizeArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Tight,
    Cubature,
    Equiangular,
    Bounds,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Frame JSON file.
    pub frame: PathBuf,
    #[arg(long)]
    pub p: usize,
    #[arg(long, value_enum, default_value_t = Mode::Tight)]
    pub mode: Mode,
    /// Tolerance of the selected check (default depends on the mode).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Monte-Carlo samples per moment that needs them.
    #[arg(long, default_value_t = 100_000.0)]
    pub mc_budget: f64,
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// A built-in frame, e.g. `mercedes` or `equispaced-lines(5)`.
    Catalog {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Orbit of a seed subspace under the group generated by a list of matrices.
    Orbit {
        #[arg(long)]
        generators: PathBuf,
        /// Seed line at this angle in degrees (plane groups only).
        #[arg(long, conflicts_with = "seed_dim")]
        seed_angle: Option<f64>,
        /// Haar-random seed subspace of this dimension.
        #[arg(long)]
        seed_dim: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        max_order: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Inner frame placed inside every subspace of the outer frame.
    Extend {
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        outer: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Real 2-planes of a set of complex lines.
    Realify {
        #[arg(long)]
        lines: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub p: usize,
    /// Monte-Carlo samples per entry without a closed form or quadrature.
    #[arg(long, default_value_t = 100_000.0)]
    pub mc_budget: f64,
    /// Gauss nodes per axis for quadrature entries.
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol_grad: f64,
    /// Relative excess over the moment still counted as success.
    #[arg(long, default_value_t = 1e-5)]
    pub margin: f64,
    /// Where to write the best frame.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Where to write the `iteration,ffp` trace.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
