use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use flr_core::io::{self, StoredFit};
use flr_core::simlab::{
    lower_bound_construct, run_rate_experiment, run_study1, run_study2, Arms, McConfig,
    PredictionTarget, RateConfig,
};
use flr_core::{
    eigendecompose, empirical_covariance, fit, CutoffRule, Dataset, FlrError, RegimeParams,
    Validation,
};

use crate::{
    ArmKind, Cli, Command, EigenArgs, FitArgs, LowerboundArgs, PredictArgs, RatesArgs,
    RegimeArgs, RuleKind, SimulateArgs, TargetKind,
};

pub const EXIT_USER: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    message: String,
    numeric: bool,
}

impl CliError {
    fn user(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            numeric: false,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.numeric {
            EXIT_NUMERIC
        } else {
            EXIT_USER
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<FlrError> for CliError {
    fn from(e: FlrError) -> Self {
        CliError {
            numeric: e.is_numeric(),
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn with_path<T>(path: &Path, r: flr_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::user(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::user(format!("{}: {e}", path.display())))
}

pub fn run(cli: Cli) -> CliResult<()> {
    let out = cli.out_dir.as_path();
    match &cli.command {
        Command::Fit(a) => cmd_fit(a, out),
        Command::Predict(a) => cmd_predict(a, out),
        Command::Simulate(a) => cmd_simulate(a, &cli, out),
        Command::Rates(a) => cmd_rates(a, &cli, out),
        Command::Lowerbound(a) => cmd_lowerbound(a, out),
        Command::Eigen(a) => cmd_eigen(a, out),
    }
}

fn regime(a: &RegimeArgs) -> RegimeParams {
    RegimeParams::new(a.alpha, a.beta, a.gamma)
}

fn cutoff_rule(a: &FitArgs) -> CliResult<CutoffRule> {
    let rule = match a.rule {
        RuleKind::Threshold => CutoffRule::Threshold { t: a.threshold },
        RuleKind::Scaled => CutoffRule::ThresholdScaled {
            scale: a.scale,
            exponent: a.exponent,
        },
        RuleKind::Deterministic => CutoffRule::Deterministic {
            alpha: a.regime.alpha,
            beta: a.regime.beta,
            gamma: a.regime.gamma,
        },
        RuleKind::Fixed => CutoffRule::Fixed {
            m: a.m.ok_or_else(|| CliError::user("--rule fixed needs --m"))?,
        },
    };
    rule.validate()?;
    Ok(rule)
}

fn cmd_fit(a: &FitArgs, out: &Path) -> CliResult<()> {
    let curves = with_path(&a.x, io::read_curves_file(&a.x))?;
    let y = with_path(&a.y, io::read_responses_file(&a.y))?;
    if curves.len() != y.len() {
        return Err(CliError::user(format!(
            "{} has {} curves but {} has {} responses",
            a.x.display(),
            curves.len(),
            a.y.display(),
            y.len()
        )));
    }
    let data = Dataset::new(curves, y)?;
    let params = RegimeParams {
        c3: a.c3,
        c4: a.c4,
        c5: a.c5,
        ..regime(&a.regime)
    };
    params.validate(Validation::Lenient)?;
    let slope = fit(&data, &cutoff_rule(a)?, &params)?;
    io::write_fit(out, &slope)?;
    print!("{}", io::FitSummary::of(&slope).to_key_values());
    Ok(())
}

fn cmd_predict(a: &PredictArgs, out: &Path) -> CliResult<()> {
    let dir = a.fit_dir.as_deref().unwrap_or(out);
    let stored = with_path(dir, StoredFit::load(dir))?;
    let curves = with_path(&a.x, io::read_curves_file(&a.x))?;
    let predictions = curves
        .iter()
        .map(|x| stored.predict(x))
        .collect::<flr_core::Result<Vec<f64>>>()?;
    let csv = io::responses_to_csv(&predictions);
    write_file(out, "predictions.csv", &csv)?;
    print!("{csv}");
    Ok(())
}

fn mc_config(a: &SimulateArgs, cli: &Cli) -> McConfig {
    let base = if a.paper_defaults {
        McConfig::paper()
    } else {
        McConfig::default()
    };
    McConfig {
        n: a.n.unwrap_or(base.n),
        reps: a.reps.unwrap_or(base.reps),
        seed: cli.seed,
        thresholds: a.thresholds.clone().unwrap_or(base.thresholds),
        grid_points: a.grid_points,
        obs_points: a.obs_points,
        obs_noise_sd: a.obs_noise_sd,
        smoothing_order: a.smoothing_order.or(base.smoothing_order),
        arms: match a.arm {
            ArmKind::Continuous => Arms::Continuous,
            ArmKind::Noisy => Arms::Noisy,
            ArmKind::Both => Arms::Both,
        },
        share_paths: !a.separate_paths,
        target: match a.target {
            TargetKind::Slope => PredictionTarget::SlopeFunctional,
            TargetKind::Mean => PredictionTarget::ConditionalMean,
        },
        threads: cli.threads,
    }
}

fn cmd_simulate(a: &SimulateArgs, cli: &Cli, out: &Path) -> CliResult<()> {
    let cfg = mc_config(a, cli);
    let report = match a.study {
        1 => run_study1(&cfg)?,
        _ => run_study2(&cfg)?,
    };
    for (arm, table) in [("continuous", &report.continuous), ("noisy", &report.noisy)] {
        if let Some(table) = table {
            let csv = io::mc_table_to_csv(table);
            write_file(out, &format!("study{}_{arm}.csv", a.study), &csv)?;
            println!("# study {} {arm}", a.study);
            print!("{csv}");
        }
    }
    Ok(())
}

fn cmd_rates(a: &RatesArgs, cli: &Cli, out: &Path) -> CliResult<()> {
    let cfg = RateConfig {
        noise_sd: a.noise_sd,
        grid_points: a.grid_points,
        terms: a.terms,
        threads: cli.threads,
        ..RateConfig::new(regime(&a.regime), a.n_list.clone(), a.reps, cli.seed)
    };
    let report = run_rate_experiment(&cfg)?;
    let csv = io::rate_table_to_csv(&report);
    let summary = io::rate_summary(&report);
    write_file(out, "rates.csv", &csv)?;
    write_file(out, "rates_summary.txt", &summary)?;
    print!("{csv}{summary}");
    Ok(())
}

const LOWER_BOUND_HEADER: &str = "n,status,nu,t_b0,t_b1,v_n,n_v_n,chi_sq_mean,scaling_check";

fn cmd_lowerbound(a: &LowerboundArgs, out: &Path) -> CliResult<()> {
    if a.n_list.is_empty() {
        return Err(CliError::user("--n-list is empty"));
    }
    let params = RegimeParams::new(a.alpha, a.beta, a.gamma);
    let mut csv = format!("{LOWER_BOUND_HEADER}\n");
    let mut text = String::new();
    for &n in &a.n_list {
        match lower_bound_construct(&params, n, a.sigma) {
            Ok(r) => {
                writeln!(
                    csv,
                    "{n},ok,{},{},{},{},{},{},{}",
                    r.nu, r.t_b0, r.t_b1, r.v_n, r.n_v_n, r.chi_sq_mean, r.scaling_check
                )
                .unwrap();
                writeln!(text, "[n={n}]\nstatus=ok\n{}", r.to_key_values()).unwrap();
            }
            Err(FlrError::DivergentDistance { two_v, sigma_sq }) => {
                log::warn!("n = {n}: 2 V_n = {two_v:e} >= sigma^2 = {sigma_sq:e}; construction diverges");
                writeln!(csv, "{n},divergent,,,,,,,").unwrap();
                writeln!(
                    text,
                    "[n={n}]\nstatus=divergent\ntwo_v={two_v}\nsigma_sq={sigma_sq}\n"
                )
                .unwrap();
            }
            Err(e) => return Err(e.into()),
        }
    }
    write_file(out, "lowerbound.csv", &csv)?;
    write_file(out, "lowerbound.txt", &text)?;
    print!("{csv}");
    Ok(())
}

fn cmd_eigen(a: &EigenArgs, out: &Path) -> CliResult<()> {
    let op = match (&a.x, &a.kernel) {
        (Some(x), _) => {
            let curves = with_path(x, io::read_curves_file(x))?;
            empirical_covariance(&curves)?
        }
        (None, Some(k)) => {
            let file = fs::File::open(k).map_err(|e| CliError::user(format!("{}: {e}", k.display())))?;
            with_path(k, io::read_kernel(file))?
        }
        (None, None) => return Err(CliError::user("one of --x or --kernel is required")),
    };
    if a.components == 0 {
        return Err(CliError::user("--components must be at least 1"));
    }
    let sys = eigendecompose(&op, a.components)?;
    let values = io::eigenvalues_to_csv(&sys);
    write_file(out, "eigenvalues.csv", &values)?;
    write_file(out, "eigenfunctions.csv", &io::eigenfunctions_to_csv(&sys))?;
    print!("{values}");
    Ok(())
}
