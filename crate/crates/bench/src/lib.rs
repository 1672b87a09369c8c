//! Shared inputs for the criterion benchmarks.

use flr_core::simlab::{replicate_stream, sample_dataset, PopulationSpec, StreamRole};
use flr_core::{Dataset, Grid};

/// A first-study sample of `n` curves on a `p`-point grid.
pub fn study1_dataset(p: usize, n: usize, seed: u64) -> Dataset {
    let spec = PopulationSpec::study1(&Grid::uniform(p).expect("grid"));
    let mut rng = replicate_stream(seed, 0, 0, StreamRole::Curves);
    sample_dataset(&spec, n, &mut rng).expect("sample")
}

/// Noisy observations of a smooth curve on a `k`-point grid.
pub fn noisy_values(k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| {
            let t = i as f64 / (k - 1) as f64;
            (3.0 * t).sin() + 0.3 * ((i * 7919) % 13) as f64 / 13.0
        })
        .collect()
}
