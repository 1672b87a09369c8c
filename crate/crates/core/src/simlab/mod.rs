//! Monte Carlo experiments: generative models, the threshold-sweep studies,
//! convergence-rate experiments and the two-point lower-bound numerics.
//!
//! Every replicate draws from its own random streams keyed by
//! `(master seed, experiment, replicate, role)`, and results are aggregated
//! in replicate order, so output does not depend on thread count.

mod lower_bound;
mod population;
mod rates;
mod rng;
mod studies;

pub use lower_bound::{lower_bound_construct, LowerBoundReport};
pub use population::{sample_dataset, sample_x, PopulationSpec};
pub use rates::{loglog_slope, run_rate_experiment, RateConfig, RateReport, RateRow};
pub use rng::{replicate_stream, StreamRole};
pub use studies::{
    run_study1, run_study2, Arms, McConfig, McRow, McTable, PredictionTarget, StudyReport,
    PAPER_SMOOTHING_ORDER, PAPER_THRESHOLDS,
};

/// Runs `f` on a dedicated pool of `threads` workers, or the global pool.
pub(crate) fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(t) if t > 0 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(f),
            Err(e) => {
                log::warn!("could not build a {t}-thread pool ({e}); using the global pool");
                f()
            }
        },
        _ => f(),
    }
}
