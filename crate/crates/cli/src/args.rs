use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "fade",
    version,
    about = "Spline differential quadrature solvers for fractional advection-diffusion equations",
    args_override_self = true,
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and write `solution.csv` and `errors.json`.
    Run(RunArgs),
    /// Run a problem on several grids and write the error table to `sweep.csv`.
    Converge(ConvergeArgs),
    /// Resolvent-norm sweep over one parameter; writes `sweep.csv`.
    Stability(StabilityArgs),
    /// Dump a DQ weight matrix to `weights.csv`.
    Weights(WeightsArgs),
}

/// Shared by every subcommand; the file itself is merged before parsing.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// key = value file (TOML); flags on the command line take precedence.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProblemArgs {
    /// ex61 ... ex67.
    #[arg(long)]
    pub problem: String,
    /// Temporal order.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Spatial order along x (ex67).
    #[arg(long)]
    pub beta1: Option<f64>,
    /// Spatial order along y (ex67).
    #[arg(long)]
    pub beta2: Option<f64>,
    /// Domain `A B` on each axis.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub domain: Option<Vec<f64>>,
    /// soliton | collision (ex65).
    #[arg(long)]
    pub nls_initial: Option<String>,
    /// frac-implicit | rk-gill | cn-fracspace.
    #[arg(long)]
    pub scheme: Option<String>,
    /// gl1 | ho3.
    #[arg(long)]
    pub weights: Option<String>,
    /// ctb | cubic-b.
    #[arg(long)]
    pub basis: Option<String>,
    /// Newton residual tolerance (implicit Schrodinger runs).
    #[arg(long, default_value_t = 1e-12)]
    pub newton_tol: f64,
    #[arg(long, default_value_t = 50)]
    pub newton_max_iter: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TimeArgs {
    #[arg(long)]
    pub tau: f64,
    #[arg(long)]
    pub t_end: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Cells per axis.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub mx: Option<usize>,
    #[arg(long)]
    pub my: Option<usize>,
    /// Write every k-th level; 0 writes only the initial and final levels.
    #[arg(long, default_value_t = 0)]
    pub snapshot_every: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConvergeArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Cells per axis for each run, e.g. `8,16,32`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub grids: Vec<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StabilityArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// kappa | eps | M | domain_extent | tau.
    #[arg(long)]
    pub param: String,
    /// Sweep values, e.g. `0.5,1,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<f64>,
    /// Advection coefficient on both axes.
    #[arg(long, default_value_t = 0.0)]
    pub kappa: f64,
    /// Diffusion coefficient on both axes.
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Side length `L` of the square `[0, L]²`.
    #[arg(long, default_value_t = 1.0)]
    pub extent: f64,
    /// ctb | cubic-b.
    #[arg(long, default_value = "ctb")]
    pub basis: String,
    /// Also write the spectrum of -K at each point to `spectrum.csv`.
    #[arg(long)]
    pub spectrum: bool,
    /// Also locate the critical kappa/eps in `[LO, HI]` at the base point.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    pub critical: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WeightsArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    /// ctb | cubic-b.
    #[arg(long, default_value = "ctb")]
    pub basis: String,
    /// Integer derivative order.
    #[arg(long, conflicts_with = "beta")]
    pub order: Option<u32>,
    /// Fractional order in (1, 2] (cubic B-spline basis).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Second-order weights by direct collocation instead of recursion.
    #[arg(long)]
    pub direct: bool,
    #[arg(long)]
    pub m: usize,
    #[arg(long, num_args = 2, value_names = ["A", "B"], default_values_t = [0.0, 1.0])]
    pub domain: Vec<f64>,
}
