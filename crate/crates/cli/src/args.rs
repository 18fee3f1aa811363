use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hilbertlab",
    version,
    about = "Hilbert transforms and their operator norms, with orthogonal martingale experiments",
    arg_required_else_help = true,
    after_help = "Exit status: 0 on success, 1 on invalid input, 2 when a numerical gate fails.\n\
                  Every run that writes --out also writes <out>.manifest."
)]
pub struct Cli {
    /// File of `key = value` lines used as defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a transform of a step function at given points.
    #[command(after_help = "CSV columns:\n  \
        x1..xd  evaluation point\n  \
        v1..vn  transform value, one column per value coordinate\n  \
        error   quadrature error estimate (riesz only)\n\
        Numbers carry 17 significant digits.")]
    Transform(TransformArgs),

    /// Lower bounds for an operator norm on growing finite sections.
    #[command(after_help = "CSV columns:\n  \
        operator    ht, hr or hdis\n  \
        p           exponent\n  \
        gauges      phi/psi pair, or `norm` for the plain L^p operator norm\n  \
        constraint  none or zero-mean\n  \
        size        truncation size\n  \
        estimate    lower bound attained by a witness (norm, or ratio for gauge pairs)\n  \
        pichorides  cot(pi/(2p*))\n  \
        ceiling     closed-form upper value on the scale of `estimate`, empty if unknown\n  \
        iterations  iterations spent at this size\n  \
        residual    relative change of the estimate over the last iteration\n  \
        converged   true when the stopping tolerance was met\n  \
        pass        estimate does not exceed the ceiling, empty without a ceiling")]
    NormEstimate(NormArgs),

    /// Monte Carlo experiments with Brownian motion.
    #[command(after_help = "CSV columns:\n  \
        experiment  experiment name\n  \
        quantity    measured quantity\n  \
        estimate    point estimate\n  \
        std_error   standard error (bootstrap for ratios), empty if not applicable\n  \
        ci_low      estimate - 3 std_error\n  \
        ci_high     estimate + 3 std_error\n  \
        target      reference value, empty if none\n  \
        pass        outcome of the 3-sigma gate against target, empty if none")]
    Simulate(SimulateArgs),

    /// Closed-form constants at an exponent p.
    #[command(after_help = "CSV columns (with --out):\n  \
        p             exponent\n  \
        p_star        max(p, p/(p-1))\n  \
        pichorides    cot(pi/(2p*))\n  \
        beta_hilbert  p* - 1\n  \
        wds_bound     beta_hilbert + pichorides")]
    Constants(ConstantsArgs),

    /// Merge run manifests into a summary table and convergence plots.
    #[command(after_help = "Reads the CSV each manifest points to. Report manifests pass their rows through.\n\
        CSV columns:\n  \
        id          manifest id\n  \
        experiment  subcommand and its main parameters\n  \
        target      reference constant, empty if none\n  \
        estimate    headline estimate\n  \
        gap         target - estimate\n  \
        pass        all gates of the run passed, empty if the run has no gate")]
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformOp {
    /// Periodic Hilbert transform (torus input).
    Ht,
    /// Hilbert transform on the line.
    Hr,
    /// Discrete Hilbert transform (integer input and points).
    Hdis,
    /// Semidiscrete transform with step --eps.
    Hsemi,
    /// Half-line operator T (d = 1).
    T,
    /// Directional Hilbert transform along --theta (box input).
    Dir,
    /// Half-space operator T_j (box input).
    Tj,
    /// Riesz transform R_j by the method of rotations (box input).
    Riesz,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub op: TransformOp,

    /// Step function file (torus/real/integers format, or boxes for dir, tj, riesz).
    #[arg(long)]
    pub input: PathBuf,

    /// Evaluation points: a file with one point per line, a grid `lo:hi:n`,
    /// or a list (`0.5,1,2` in one dimension, `0.5,1;2,2` in several).
    #[arg(long, allow_hyphen_values = true)]
    pub points: String,

    #[arg(long)]
    pub eps: Option<f64>,

    /// Unit direction for `dir`, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,

    /// Coordinate index for `tj` and `riesz` (1-based).
    #[arg(long, default_value_t = 1)]
    pub j: usize,

    /// Angular nodes for `riesz` (the value uses the doubled rule).
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,

    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Manifest id (derived from the configuration when absent).
    #[arg(long)]
    pub id: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormOp {
    Ht,
    Hr,
    Hdis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstraintArg {
    None,
    ZeroMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[value(name = "csv+svg")]
    CsvSvg,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long, value_enum)]
    pub op: NormOp,

    #[arg(long, default_value_t = 2.0)]
    pub p: f64,

    /// Comma separated truncation sizes (powers of two for ht).
    #[arg(long, default_value = "512,1024")]
    pub size: String,

    /// Gauge pair `phi/psi` (e.g. `power:3/llogl`); switches to ratio ascent.
    #[arg(long)]
    pub gauges: Option<String>,

    #[arg(long, value_enum, default_value_t = ConstraintArg::None)]
    pub constraint: ConstraintArg,

    /// Random starting vectors besides the odd-symmetric one (plain norm only).
    #[arg(long, default_value_t = 2)]
    pub random_starts: usize,

    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,

    #[arg(long, default_value_t = 3000)]
    pub max_iter: usize,

    #[arg(long, env = "HILBERTLAB_SEED", default_value_t = 1)]
    pub seed: u64,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[arg(long)]
    pub id: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Inequality,
    Orthogonality,
    Decoupling,
    Tau,
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Disc,
    Square,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub experiment: Experiment,

    /// Torus step function (a real-line step function giving the integrand for
    /// decoupling). Defaults: sign step, or a trigonometric polynomial for
    /// orthogonality, or four cells for decoupling.
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, default_value_t = 2.0)]
    pub p: f64,

    /// Gauge pair `phi/psi`; `power:p/power:p` when absent.
    #[arg(long)]
    pub gauges: Option<String>,

    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,

    #[arg(long, default_value_t = 1000)]
    pub paths: usize,

    #[arg(long, env = "HILBERTLAB_SEED", default_value_t = 1)]
    pub seed: u64,

    /// Stopping distance from the boundary (default 4√dt).
    #[arg(long)]
    pub boundary_tol: Option<f64>,

    /// Exit domain for the harmonic experiment.
    #[arg(long, value_enum, default_value_t = DomainArg::Disc)]
    pub domain: DomainArg,

    /// Second boundary function for the harmonic experiment (conjugate of
    /// the input when absent).
    #[arg(long)]
    pub companion: Option<PathBuf>,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long)]
    pub id: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub p: f64,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long)]
    pub id: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Run manifests to merge.
    #[arg(required = true)]
    pub manifests: Vec<PathBuf>,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[arg(long)]
    pub id: Option<String>,
}
