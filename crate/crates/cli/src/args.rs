use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const RUN_AFTER_HELP: &str = "\
Step CSV columns: step, phase (1, 2, 3a, 3b; `total` on the closing row),
direction (radians in the plane, coordinates otherwise), rho_in, rho_out,
mean_width, raddist (sup-distance to the unit ball), net (net containment at
the internal accuracy, empty before it applies), tau (raster tolerance of the
step; the closing row holds the largest). Floats have 12 significant digits.

Exit codes: 0 success, 1 usage, 2 invariant violation, 3 budget exhaustion.";

const SWEEP_AFTER_HELP: &str = "\
Sweep CSV columns: n, eps, seed, status, n1, n2, n3a, n3b, total, budget_a,
budget_b, final_rho_in, final_rho_out, max_tau, warnings, fit_slope,
fit_intercept. The last row has status `fit` and holds the least-squares fit
of total steps against n·|ln eps| (theorem mode) or of n1 against n
(interval mode).";

#[derive(Debug, Parser)]
#[command(name = "minksym", version, about = "Minkowski symmetrization experiments")]
pub struct Cli {
    /// Directory for outputs written without an explicit --out.
    #[arg(long, global = true, env = "MINKSYM_OUT_DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a shape file and print its radii and mean width.
    Gen(GenArgs),
    /// Symmetrize one shape down to a near-ball and write the step CSV.
    #[command(after_help = RUN_AFTER_HELP)]
    Run(RunArgs),
    /// Runs over a grid of accuracies, dimensions and seeds.
    #[command(after_help = SWEEP_AFTER_HELP)]
    Sweep(SweepArgs),
    /// Property batteries with one PASS/FAIL line per property.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Disc,
    Segment,
    Spiky,
    Cross,
    Random,
    /// Spiky star whose convex hull lies between (1 − eps) and (1 + eps) balls.
    Sandwiched,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,

    /// Disc radius.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,

    /// Segment length.
    #[arg(long = "R", default_value_t = 1.0)]
    pub seg_len: f64,

    /// Segment angle in degrees; must fall on the angle grid.
    #[arg(long, default_value_t = 0.0)]
    pub angle: f64,

    #[arg(long, default_value_t = 12)]
    pub spikes: usize,

    /// Spike length.
    #[arg(long, default_value_t = 1.0)]
    pub len: f64,

    /// Radius of the disc under the spikes.
    #[arg(long, default_value_t = 0.2)]
    pub base: f64,

    /// Cross half-length.
    #[arg(long, default_value_t = 1.0)]
    pub arm: f64,

    /// Cross bar width.
    #[arg(long, default_value_t = 0.1)]
    pub width: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Radius bounds for random stars.
    #[arg(long, default_value_t = 0.2)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,

    /// Hull accuracy for sandwiched shapes.
    #[arg(long, default_value_t = 0.04)]
    pub eps: f64,

    /// Dimension; above 2 only `disc` and `segment` exist, as support shapes.
    #[arg(long, default_value_t = 2)]
    pub n: usize,

    /// Direction cloud for support shapes: grid:M, fibonacci:M or random:M[:SEED].
    #[arg(long)]
    pub cloud: Option<String>,

    #[arg(long = "grid-m", default_value_t = 720)]
    pub grid_m: usize,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    /// Uniform over the angle grid (planar only).
    GridRandom,
    /// Uniform on the sphere.
    Uniform,
    /// Grid angles in bisection order (planar only).
    Halving,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub shape: PathBuf,

    /// Target accuracy, in (0, 1/2).
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Direction strategy; planar shapes default to grid-random, others to uniform.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyName>,

    /// Resample a radial shape onto this many angles.
    #[arg(long = "grid-m")]
    pub grid_m: Option<usize>,

    /// FFT raster side for Minkowski sums.
    #[arg(long = "raster-G", default_value_t = minksym_core::star2d::DEFAULT_RASTER_G)]
    pub raster_g: usize,

    /// Seed-ball constant: phase 1 stops at inner radius c2/√n.
    #[arg(long, default_value_t = minksym_core::pipeline::DEFAULT_C2)]
    pub c2: f64,

    /// Stop phase 1 on the symmetrized inscribed interval instead of the body.
    #[arg(long)]
    pub via_interval: bool,

    /// Step budget per phase.
    #[arg(long, default_value_t = minksym_core::pipeline::DEFAULT_PHASE_BUDGET)]
    pub budget: usize,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepShape {
    Cross,
    Spiky,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    /// Full planar runs on a star body (n = 2).
    Theorem,
    /// Phase 1 on the interval [0, e1] in support form, any n.
    Interval,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05")]
    pub eps: Vec<f64>,

    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub n: Vec<usize>,

    /// Seeds per grid point.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,

    #[arg(long, default_value_t = 0)]
    pub seed_start: u64,

    #[arg(long, value_enum, default_value_t = SweepMode::Theorem)]
    pub mode: SweepMode,

    /// Shape file for theorem mode; overrides --gen.
    #[arg(long)]
    pub shape: Option<PathBuf>,

    #[arg(long = "gen", value_enum, default_value_t = SweepShape::Cross)]
    pub gen: SweepShape,

    /// Interval mode cloud size per dimension.
    #[arg(long, default_value_t = 512)]
    pub cloud_factor: usize,

    #[arg(long, value_enum)]
    pub strategy: Option<StrategyName>,

    #[arg(long = "raster-G", default_value_t = minksym_core::star2d::DEFAULT_RASTER_G)]
    pub raster_g: usize,

    #[arg(long, default_value_t = minksym_core::pipeline::DEFAULT_C2)]
    pub c2: f64,

    #[arg(long, default_value_t = minksym_core::pipeline::DEFAULT_PHASE_BUDGET)]
    pub budget: usize,

    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Sandwiched hulls imply net containment.
    Lemma2,
    /// Per-step growth inequalities of the ball-growing phase.
    Lemma4,
    /// Mean width, radii and hull commutation over random steps.
    Conservation,
    /// Raster sums against the brute-force oracle.
    Oracle,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,

    /// Cases per property; each suite has its own default.
    #[arg(long)]
    pub count: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long = "raster-G", default_value_t = minksym_core::star2d::DEFAULT_RASTER_G)]
    pub raster_g: usize,
}
