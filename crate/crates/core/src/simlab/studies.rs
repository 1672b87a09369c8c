use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::population::PopulationSpec;
use super::rng::{replicate_stream, StreamRole};
use super::with_threads;
use crate::error::{FlrError, Result};
use crate::funcgrid::{quad, CosineTable, Grid};
use crate::presmooth::{default_smoothing_order, SeriesSmoother};
use crate::regression::{predict, CutoffRule, Dataset, RegimeParams, SpectralEstimate};

/// Thresholds of the published comparison table.
pub const PAPER_THRESHOLDS: [f64; 6] = [0.001, 0.01, 0.05, 0.1, 0.15, 0.2];

/// Smoother order used to reproduce the published noisy-arm table: one
/// cosine per term of the generating expansion. The published order is not
/// stated; smaller orders give visibly lower errors at the smallest threshold.
pub const PAPER_SMOOTHING_ORDER: usize = crate::funcgrid::DEFAULT_SERIES_TERMS;

/// Which estimation error a study reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PredictionTarget {
    /// `(int b_hat x - int b x)^2`: the slope part of the prediction, which
    /// is what the published averages measure.
    #[default]
    SlopeFunctional,
    /// `(a_hat + int b_hat x - a - int b x)^2`; includes the `sigma^2 / n`
    /// variance of the intercept.
    ConditionalMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arms {
    Continuous,
    Noisy,
    #[default]
    Both,
}

impl Arms {
    fn continuous(self) -> bool {
        matches!(self, Arms::Continuous | Arms::Both)
    }

    fn noisy(self) -> bool {
        matches!(self, Arms::Noisy | Arms::Both)
    }
}

/// Monte Carlo settings shared by both studies.
#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub thresholds: Vec<f64>,
    /// Analysis grid size.
    pub grid_points: usize,
    /// Observation grid size for the noisy arm; `None` uses the study default.
    pub obs_points: Option<usize>,
    pub obs_noise_sd: f64,
    /// Series smoother order; `None` uses `floor(k^{1/3})`.
    pub smoothing_order: Option<usize>,
    pub arms: Arms,
    /// Whether the noisy arm observes the same curves and errors as the
    /// continuous arm in each replicate.
    pub share_paths: bool,
    pub target: PredictionTarget,
    pub threads: Option<usize>,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n: 100,
            reps: 500,
            seed: 0,
            thresholds: PAPER_THRESHOLDS.to_vec(),
            grid_points: crate::funcgrid::DEFAULT_GRID_POINTS,
            obs_points: None,
            obs_noise_sd: 1.0,
            smoothing_order: None,
            arms: Arms::Both,
            share_paths: true,
            target: PredictionTarget::SlopeFunctional,
            threads: None,
        }
    }
}

impl McConfig {
    /// `n = 100`, 500 replicates, the published thresholds and
    /// [`PAPER_SMOOTHING_ORDER`].
    pub fn paper() -> Self {
        McConfig {
            smoothing_order: Some(PAPER_SMOOTHING_ORDER),
            ..McConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(FlrError::invalid("reps must be at least 1"));
        }
        if self.n < 2 {
            return Err(FlrError::invalid("sample size must be at least 2"));
        }
        if self.thresholds.is_empty() || self.thresholds.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(FlrError::invalid("thresholds must be a non-empty list of positive values"));
        }
        if self.grid_points < 2 {
            return Err(FlrError::invalid("analysis grid needs at least 2 points"));
        }
        if !(self.obs_noise_sd >= 0.0 && self.obs_noise_sd.is_finite()) {
            return Err(FlrError::invalid("observation noise sd must be nonnegative"));
        }
        Ok(())
    }
}

/// One row of a Monte Carlo table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McRow {
    pub threshold: f64,
    /// Average squared error of the prediction target.
    pub ase: f64,
    /// Monte Carlo standard error of `ase`.
    pub mc_se: f64,
    /// Mean integrated squared error of `b_hat`.
    pub mise: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct McTable {
    pub rows: Vec<McRow>,
}

impl McTable {
    pub fn row(&self, threshold: f64) -> Option<&McRow> {
        self.rows.iter().find(|r| r.threshold == threshold)
    }
}

/// Tables for whichever arms were run.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub continuous: Option<McTable>,
    pub noisy: Option<McTable>,
}

/// Per-threshold `(squared prediction error, integrated squared error)`.
type ArmOutcome = Vec<(f64, f64)>;

struct StudyContext<'a> {
    spec: &'a PopulationSpec,
    cfg: &'a McConfig,
    experiment: u64,
    regime: RegimeParams,
    noisy: Option<NoisyArm>,
}

struct NoisyArm {
    obs_table: CosineTable,
    smoother: SeriesSmoother,
}

impl StudyContext<'_> {
    fn evaluate(&self, data: &Dataset) -> Result<ArmOutcome> {
        let est = SpectralEstimate::new(data)?;
        let x = self.spec.predictand();
        let b = self.spec.slope();
        self.cfg
            .thresholds
            .iter()
            .map(|&t| {
                let fit = est.slope_fit(&CutoffRule::Threshold { t }, &self.regime)?;
                let err = match self.cfg.target {
                    PredictionTarget::SlopeFunctional => {
                        fit.slope_functional(x)? - self.spec.slope_functional_oracle()
                    }
                    PredictionTarget::ConditionalMean => {
                        predict(&fit, x)? - self.spec.prediction_oracle()
                    }
                };
                let d = fit.b_hat() - b;
                let ise = quad(b.grid(), d.values(), d.values());
                Ok((err * err, ise))
            })
            .collect()
    }

    fn replicate(&self, rep: u64) -> Result<(Option<ArmOutcome>, Option<ArmOutcome>)> {
        let stream = |role| replicate_stream(self.cfg.seed, self.experiment, rep, role);
        let n = self.cfg.n;
        let mut shared = None;
        let continuous = if self.cfg.arms.continuous() || self.cfg.share_paths {
            let (scores, data) = self.spec.sample_dataset_split(
                n,
                &mut stream(StreamRole::Curves),
                &mut stream(StreamRole::ResponseNoise),
            )?;
            let out = if self.cfg.arms.continuous() {
                Some(self.evaluate(&data)?)
            } else {
                None
            };
            shared = Some((scores, data));
            out
        } else {
            None
        };

        let noisy = match &self.noisy {
            None => None,
            Some(arm) => {
                let (scores, data) = match shared {
                    Some(s) if self.cfg.share_paths => s,
                    _ => self.spec.sample_dataset_split(
                        n,
                        &mut stream(StreamRole::NoisyArmCurves),
                        &mut stream(StreamRole::NoisyArmResponseNoise),
                    )?,
                };
                let mut obs_rng = stream(StreamRole::ObservationNoise);
                let sd = self.cfg.obs_noise_sd;
                let curves = scores
                    .iter()
                    .map(|z| {
                        let mut v = arm.obs_table.synthesize(z);
                        for o in v.iter_mut() {
                            let e: f64 = StandardNormal.sample(&mut obs_rng);
                            *o += sd * e;
                        }
                        arm.smoother.smooth_values(&v)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let smoothed = Dataset::new(curves, data.responses().to_vec())?;
                Some(self.evaluate(&smoothed)?)
            }
        };
        Ok((continuous, noisy))
    }
}

fn aggregate(thresholds: &[f64], outcomes: &[&ArmOutcome]) -> McTable {
    let reps = outcomes.len() as f64;
    let rows = thresholds
        .iter()
        .enumerate()
        .map(|(k, &threshold)| {
            let ase = outcomes.iter().map(|o| o[k].0).sum::<f64>() / reps;
            let mise = outcomes.iter().map(|o| o[k].1).sum::<f64>() / reps;
            let mc_se = if outcomes.len() > 1 {
                let var = outcomes.iter().map(|o| (o[k].0 - ase).powi(2)).sum::<f64>() / (reps - 1.0);
                (var / reps).sqrt()
            } else {
                0.0
            };
            McRow {
                threshold,
                ase,
                mc_se,
                mise,
            }
        })
        .collect();
    McTable { rows }
}

fn run_study(spec: &PopulationSpec, cfg: &McConfig, experiment: u64, default_k: usize) -> Result<StudyReport> {
    cfg.validate()?;
    let noisy = if cfg.arms.noisy() {
        let k = cfg.obs_points.unwrap_or(default_k);
        let obs_grid = Grid::uniform(k)?;
        let order = match cfg.smoothing_order {
            Some(o) => o,
            None => default_smoothing_order(k)?,
        };
        Some(NoisyArm {
            obs_table: CosineTable::new(&obs_grid, spec.terms()),
            smoother: SeriesSmoother::new(&obs_grid, order, spec.grid())?,
        })
    } else {
        None
    };
    let ctx = StudyContext {
        spec,
        cfg,
        experiment,
        regime: RegimeParams::default(),
        noisy,
    };

    let outcomes: Vec<_> = with_threads(cfg.threads, || {
        (0..cfg.reps as u64)
            .into_par_iter()
            .map(|rep| ctx.replicate(rep))
            .collect::<Result<Vec<_>>>()
    })?;

    let continuous = cfg.arms.continuous().then(|| {
        let arm: Vec<&ArmOutcome> = outcomes.iter().filter_map(|o| o.0.as_ref()).collect();
        aggregate(&cfg.thresholds, &arm)
    });
    let noisy = cfg.arms.noisy().then(|| {
        let arm: Vec<&ArmOutcome> = outcomes.iter().filter_map(|o| o.1.as_ref()).collect();
        aggregate(&cfg.thresholds, &arm)
    });
    Ok(StudyReport { continuous, noisy })
}

/// Threshold sweep for the first study (smooth slope, noisy arm on 200 points).
pub fn run_study1(cfg: &McConfig) -> Result<StudyReport> {
    let grid = Grid::uniform(cfg.grid_points)?;
    run_study(&PopulationSpec::study1(&grid), cfg, 1, 200)
}

/// Threshold sweep for the second study (rougher slope and predictand,
/// noisy arm on 500 points).
pub fn run_study2(cfg: &McConfig) -> Result<StudyReport> {
    let grid = Grid::uniform(cfg.grid_points)?;
    run_study(&PopulationSpec::study2(&grid), cfg, 2, 500)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(arms: Arms) -> McConfig {
        McConfig {
            n: 40,
            reps: 6,
            seed: 5,
            grid_points: 101,
            arms,
            ..Default::default()
        }
    }

    #[test]
    fn tables_have_one_row_per_threshold() {
        let rep = run_study1(&small(Arms::Both)).unwrap();
        for table in [rep.continuous.unwrap(), rep.noisy.unwrap()] {
            assert_eq!(table.rows.len(), 6);
            for r in &table.rows {
                assert!(r.ase >= 0.0 && r.mc_se >= 0.0 && r.mise >= 0.0);
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mut a = small(Arms::Both);
        a.threads = Some(1);
        let mut b = a.clone();
        b.threads = Some(3);
        assert_eq!(run_study2(&a).unwrap(), run_study2(&b).unwrap());
    }

    #[test]
    fn shared_paths_make_arms_see_the_same_responses() {
        // With zero observation noise and a smoother that spans the whole
        // truncated series, the noisy arm reproduces the continuous one.
        let mut cfg = small(Arms::Both);
        cfg.obs_noise_sd = 0.0;
        cfg.smoothing_order = Some(50);
        let rep = run_study1(&cfg).unwrap();
        let (c, n) = (rep.continuous.unwrap(), rep.noisy.unwrap());
        for (x, y) in c.rows.iter().zip(&n.rows) {
            assert!((x.ase - y.ase).abs() < 1e-8 * x.ase.max(1e-12), "{x:?} {y:?}");
        }
        cfg.share_paths = false;
        let rep = run_study1(&cfg).unwrap();
        assert_ne!(rep.continuous.unwrap().rows[3].ase, rep.noisy.unwrap().rows[3].ase);
    }

    #[test]
    fn single_replicate_has_zero_standard_error() {
        let mut cfg = small(Arms::Continuous);
        cfg.reps = 1;
        let t = run_study1(&cfg).unwrap().continuous.unwrap();
        assert!(t.rows.iter().all(|r| r.mc_se == 0.0));
    }

    #[test]
    fn invalid_config_rejected() {
        let mut cfg = small(Arms::Continuous);
        cfg.reps = 0;
        assert!(run_study1(&cfg).is_err());
        let mut cfg = small(Arms::Continuous);
        cfg.thresholds = vec![0.1, -1.0];
        assert!(run_study1(&cfg).is_err());
    }
}
