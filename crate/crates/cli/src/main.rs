mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "flr", version, about = "Functional principal components prediction in the functional linear model")]
struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for replicate loops; output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// File of `key=value` lines supplying flags of the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory receiving output files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit the slope function to curves and responses.
    Fit(FitArgs),
    /// Predict responses for new curves from a stored fit.
    Predict(PredictArgs),
    /// Run the threshold-sweep Monte Carlo studies.
    Simulate(SimulateArgs),
    /// Measure the decay exponent of the prediction error in n.
    Rates(RatesArgs),
    /// Evaluate the two-point lower-bound construction.
    Lowerbound(LowerboundArgs),
    /// Eigendecomposition of an empirical or given covariance.
    Eigen(EigenArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RuleKind {
    /// Keep components with eigenvalue at least `--threshold`.
    Threshold,
    /// Threshold `scale * n^-exponent`.
    Scaled,
    /// Rate-optimal `m_0(n)` for `--alpha`, `--beta`, `--gamma`.
    Deterministic,
    /// Exactly `--m` components.
    Fixed,
}

#[derive(Args, Debug)]
struct RegimeArgs {
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 4.0)]
    beta: f64,
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Curves, one per CSV row.
    #[arg(long)]
    x: PathBuf,
    /// Responses, one per line.
    #[arg(long)]
    y: PathBuf,
    #[arg(long, value_enum, default_value_t = RuleKind::Threshold)]
    rule: RuleKind,
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 0.5)]
    exponent: f64,
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    regime: RegimeArgs,
    /// Value of the truncated slope when `|b_hat| > c4 n^c5`.
    #[arg(long, default_value_t = 0.0)]
    c3: f64,
    /// Scale of the truncation bound.
    #[arg(long, default_value_t = 1.0)]
    c4: f64,
    /// Exponent of the truncation bound.
    #[arg(long, default_value_t = 2.0)]
    c5: f64,
}

#[derive(Args, Debug)]
struct PredictArgs {
    /// Directory written by `flr fit`; defaults to `--out-dir`.
    #[arg(long)]
    fit_dir: Option<PathBuf>,
    /// Curves to predict at, one per CSV row.
    #[arg(long)]
    x: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ArmKind {
    Continuous,
    Noisy,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TargetKind {
    /// Error of `int b_hat x`.
    Slope,
    /// Error of `a_hat + int b_hat x`.
    Mean,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    study: u8,
    /// n = 100, 500 replicates, the published thresholds and smoother order.
    #[arg(long)]
    paper_defaults: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = ArmKind::Both)]
    arm: ArmKind,
    /// Observation grid size of the noisy arm.
    #[arg(long)]
    obs_points: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    obs_noise_sd: f64,
    #[arg(long)]
    smoothing_order: Option<usize>,
    /// Draw the noisy arm's curves independently of the continuous arm.
    #[arg(long)]
    separate_paths: bool,
    #[arg(long, value_enum, default_value_t = TargetKind::Slope)]
    target: TargetKind,
    #[arg(long, default_value_t = flr_core::funcgrid::DEFAULT_GRID_POINTS)]
    grid_points: usize,
}

#[derive(Args, Debug)]
struct RatesArgs {
    #[command(flatten)]
    regime: RegimeArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 400, 800, 1600])]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    #[arg(long, default_value_t = 1.0)]
    noise_sd: f64,
    #[arg(long, default_value_t = flr_core::funcgrid::DEFAULT_GRID_POINTS)]
    grid_points: usize,
    #[arg(long, default_value_t = flr_core::funcgrid::DEFAULT_SERIES_TERMS)]
    terms: usize,
}

#[derive(Args, Debug)]
struct LowerboundArgs {
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [1_000, 10_000, 100_000])]
    n_list: Vec<usize>,
}

#[derive(Args, Debug)]
struct EigenArgs {
    /// Curves, one per CSV row; the empirical covariance is decomposed.
    #[arg(long, conflicts_with = "kernel", required_unless_present = "kernel")]
    x: Option<PathBuf>,
    /// A `P x P` covariance kernel.
    #[arg(long)]
    kernel: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    components: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FLR_LOG", "warn")).init();

    let args = match config::merge_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(commands::EXIT_USER);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_USER } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
