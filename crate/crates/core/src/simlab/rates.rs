use rayon::prelude::*;

use super::population::PopulationSpec;
use super::rng::{replicate_stream, StreamRole};
use super::with_threads;
use crate::error::{FlrError, Result};
use crate::funcgrid::{Grid, DEFAULT_GRID_POINTS, DEFAULT_SERIES_TERMS};
use crate::regression::{rate_tau, CutoffRule, RateRegime, RegimeParams, SpectralEstimate, Validation};

/// Settings for measuring how the error of `int b_tilde x` decays with `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateConfig {
    pub regime: RegimeParams,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    /// Cut-off rule; `None` uses the deterministic `m_0(n)` of the regime.
    pub rule: Option<CutoffRule>,
    pub noise_sd: f64,
    pub grid_points: usize,
    pub terms: usize,
    pub threads: Option<usize>,
}

impl RateConfig {
    pub fn new(regime: RegimeParams, n_list: Vec<usize>, reps: usize, seed: u64) -> Self {
        RateConfig {
            regime,
            n_list,
            reps,
            seed,
            rule: None,
            noise_sd: 1.0,
            grid_points: DEFAULT_GRID_POINTS,
            terms: DEFAULT_SERIES_TERMS,
            threads: None,
        }
    }

    fn rule(&self) -> CutoffRule {
        self.rule.unwrap_or(CutoffRule::Deterministic {
            alpha: self.regime.alpha,
            beta: self.regime.beta,
            gamma: self.regime.gamma,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub n: usize,
    /// Average number of retained components.
    pub mean_cutoff: f64,
    pub mse: f64,
    pub mc_se: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub regime: RateRegime,
    pub rows: Vec<RateRow>,
    /// Least-squares slope of `log mse` on `log n`.
    pub fitted_exponent: f64,
    /// Least-squares slope of `log tau(n)` on `log n` over the same `n`;
    /// exact for the two power-law branches.
    pub theoretical_exponent: f64,
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Estimates `E(int b_tilde x - int b x)^2` at each `n` under the power-law
/// population of the regime and fits the log-log decay exponent.
pub fn run_rate_experiment(cfg: &RateConfig) -> Result<RateReport> {
    if cfg.n_list.len() < 3 {
        return Err(FlrError::invalid(format!(
            "need at least 3 sample sizes, got {}",
            cfg.n_list.len()
        )));
    }
    if cfg.n_list.iter().any(|&n| n < 2) {
        return Err(FlrError::invalid("every sample size must be at least 2"));
    }
    if cfg.reps == 0 {
        return Err(FlrError::invalid("reps must be at least 1"));
    }
    cfg.regime.validate(Validation::Lenient)?;
    let rule = cfg.rule();
    rule.validate()?;

    let grid = Grid::uniform(cfg.grid_points)?;
    let spec = PopulationSpec::power_law(&cfg.regime, cfg.noise_sd, &grid, cfg.terms)?;
    let truth = spec.slope_functional_oracle();
    let x = spec.predictand();

    let mut rows = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        let outcomes: Vec<(f64, usize)> = with_threads(cfg.threads, || {
            (0..cfg.reps as u64)
                .into_par_iter()
                .map(|rep| {
                    let (_, data) = spec.sample_dataset_split(
                        n,
                        &mut replicate_stream(cfg.seed, n as u64, rep, StreamRole::Curves),
                        &mut replicate_stream(cfg.seed, n as u64, rep, StreamRole::ResponseNoise),
                    )?;
                    let est = SpectralEstimate::new(&data)?;
                    let fit = est.slope_fit(&rule, &cfg.regime)?;
                    let err = fit.slope_functional(x)? - truth;
                    Ok((err * err, fit.cutoff()))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        let reps = outcomes.len() as f64;
        let mse = outcomes.iter().map(|o| o.0).sum::<f64>() / reps;
        let mc_se = if outcomes.len() > 1 {
            (outcomes.iter().map(|o| (o.0 - mse).powi(2)).sum::<f64>() / (reps - 1.0) / reps).sqrt()
        } else {
            0.0
        };
        let mean_cutoff = outcomes.iter().map(|o| o.1 as f64).sum::<f64>() / reps;
        log::info!("n = {n}: mse = {mse:.4e} (se {mc_se:.2e}), mean cut-off {mean_cutoff}");
        rows.push(RateRow {
            n,
            mean_cutoff,
            mse,
            mc_se,
            tau: rate_tau(&cfg.regime, n),
        });
    }

    let log_n: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let log_mse: Vec<f64> = rows.iter().map(|r| r.mse.ln()).collect();
    let log_tau: Vec<f64> = rows.iter().map(|r| r.tau.ln()).collect();
    Ok(RateReport {
        regime: cfg.regime.regime(),
        fitted_exponent: loglog_slope(&log_n, &log_mse),
        theoretical_exponent: loglog_slope(&log_n, &log_tau),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let x: Vec<f64> = [100.0f64, 200.0, 400.0].iter().map(|v| v.ln()).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 0.75 * v).collect();
        assert!((loglog_slope(&x, &y) + 0.75).abs() < 1e-12);
    }

    #[test]
    fn theoretical_exponents() {
        let cfg = RateConfig {
            grid_points: 51,
            terms: 20,
            ..RateConfig::new(RegimeParams::new(2.0, 3.0, 1.0), vec![50, 100, 200], 2, 1)
        };
        let rep = run_rate_experiment(&cfg).unwrap();
        assert_eq!(rep.regime, RateRegime::Polynomial);
        assert!((rep.theoretical_exponent + 6.0 / 7.0).abs() < 1e-12);

        let cfg = RateConfig { regime: RegimeParams::new(2.0, 4.0, 2.0), ..cfg };
        let rep = run_rate_experiment(&cfg).unwrap();
        assert_eq!(rep.regime, RateRegime::Parametric);
        assert!((rep.theoretical_exponent + 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_sample_sizes() {
        let cfg = RateConfig::new(RegimeParams::default(), vec![100, 200], 2, 1);
        assert!(matches!(run_rate_experiment(&cfg), Err(FlrError::InvalidArgument(_))));
    }

    #[test]
    fn reruns_are_identical() {
        let cfg = RateConfig {
            grid_points: 51,
            terms: 20,
            ..RateConfig::new(RegimeParams::default(), vec![30, 60, 120], 5, 9)
        };
        assert_eq!(run_rate_experiment(&cfg).unwrap(), run_rate_experiment(&cfg).unwrap());
    }
}
