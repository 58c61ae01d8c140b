use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use thicksum::geometry::{Tolerance, DEFAULT_POINT_CAP};

#[derive(Debug, Parser)]
#[command(
    name = "thicksum",
    version,
    about = "Certificates for sums of thick compact sets"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for every sampling oracle; recorded in the report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT)]
    pub tol: f64,
    /// Largest number of points a discretization may produce.
    #[arg(long, global = true, default_value_t = DEFAULT_POINT_CAP)]
    pub point_cap: usize,
    /// Largest Minkowski sum enumerated by brute force.
    #[arg(long, global = true, default_value_t = DEFAULT_POINT_CAP)]
    pub sum_cap: usize,
    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit aligned text instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shapley-Folkman decomposition of a convex combination of sum points.
    SfDecompose(SumInput),
    /// Round a convex combination to an exact sum point within R sqrt(min(n, d)).
    Round(SumInput),
    /// Certify a thickness lower bound for a discretized set.
    Thickness(ThicknessArgs),
    /// Build and verify an interior certificate for a sum of thick sets.
    Certify(CertifyArgs),
    /// Closed-form thresholds on the number of summands.
    Threshold(ThresholdArgs),
    /// Brute-force oracles, each reported next to its theoretical bound.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

impl Command {
    pub fn prints_json_with_text(&self) -> bool {
        matches!(self, Command::Threshold(_))
    }
}

#[derive(Debug, Args)]
pub struct SumInput {
    /// Point cloud files, one per summand.
    #[arg(long, num_args = 1.., required = true)]
    pub clouds: Vec<PathBuf>,
    /// Convex weights file `{"coeffs": [[...], ...]}`.
    #[arg(long)]
    pub coeffs: PathBuf,
}

#[derive(Debug, Args)]
pub struct SetArgs {
    /// Iteration depth used when a set file describes an IFS.
    #[arg(long = "disc-depth", default_value_t = 14)]
    pub disc_depth: usize,
}

#[derive(Debug, Args)]
pub struct ThicknessArgs {
    /// IFS file or point cloud file.
    #[arg(long)]
    pub set: PathBuf,
    /// Iteration depth for an IFS set.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Required certified thickness.
    #[arg(long)]
    pub target: f64,
    /// Scale ratio between consecutive examined scales.
    #[arg(long, default_value_t = 0.9)]
    pub ratio: f64,
    /// Smallest scale examined (default: two IFS levels above the depth, or 1% of the diameter).
    #[arg(long)]
    pub floor: Option<f64>,
    /// Examine every s-th point as a center.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Include every cell witness in the report.
    #[arg(long)]
    pub witnesses: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// IFS or point cloud files, one per summand.
    #[arg(long, num_args = 1.., required = true)]
    pub sets: Vec<PathBuf>,
    #[arg(long)]
    pub alpha: f64,
    /// Defaults to the minimizer sqrt(1 + alpha) - 1.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Tree depth K.
    #[arg(long, conflicts_with = "gap")]
    pub depth: Option<usize>,
    /// Choose the least depth whose residual gap is at most this value.
    #[arg(long)]
    pub gap: Option<f64>,
    /// Repeat the list of sets this many times.
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    #[command(flatten)]
    pub set: SetArgs,
    /// Points of the certified ball checked by the interval oracle (d = 1).
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Exhaustive distance from a point to the Minkowski sum.
    SumDistance(SumDistanceArgs),
    /// Sampled distance from hull points to the Minkowski sum.
    Residual(ResidualArgs),
    /// One-dimensional interval check of absorption and of the certified ball.
    Absorption(AbsorptionArgs),
}

#[derive(Debug, Args)]
pub struct SumDistanceArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub clouds: Vec<PathBuf>,
    /// Query point coordinates.
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub clouds: Vec<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
}

#[derive(Debug, Args)]
pub struct AbsorptionArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub sets: Vec<PathBuf>,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    #[command(flatten)]
    pub set: SetArgs,
    /// Samples per depth and in the certified ball.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}
