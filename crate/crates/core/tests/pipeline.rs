use flr_core::fpca::EigenSystem;
use flr_core::io::{self, StoredFit};
use flr_core::simlab::{
    run_rate_experiment, run_study1, sample_dataset, Arms, McConfig, PopulationSpec, RateConfig,
};
use flr_core::{
    eigendecompose, empirical_covariance, fit, perturbation_report, population_covariance,
    predict, CutoffRule, Dataset, Grid, RegimeParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn study1_data(p: usize, n: usize, seed: u64) -> (PopulationSpec, Dataset) {
    let spec = PopulationSpec::study1(&Grid::uniform(p).unwrap());
    let data = sample_dataset(&spec, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    (spec, data)
}

#[test]
fn dumped_dataset_refits_identically() {
    let (_, data) = study1_data(101, 100, 3);
    let x = io::read_curves(io::curves_to_csv(data.curves()).as_bytes()).unwrap();
    let y = io::read_responses(io::responses_to_csv(data.responses()).as_bytes()).unwrap();
    let reloaded = Dataset::new(x, y).unwrap();
    let rule = CutoffRule::Threshold { t: 0.1 };
    let reg = RegimeParams::default();
    let a = fit(&data, &rule, &reg).unwrap();
    let b = fit(&reloaded, &rule, &reg).unwrap();
    assert_eq!(a.cutoff(), b.cutoff());
    for (u, v) in a.b_coeffs().iter().zip(b.b_coeffs()) {
        assert!((u - v).abs() < 1e-9);
    }
}

#[test]
fn stored_fit_predicts_like_the_fit() {
    let (spec, data) = study1_data(101, 80, 4);
    let slope = fit(&data, &CutoffRule::Threshold { t: 0.05 }, &RegimeParams::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    io::write_fit(dir.path(), &slope).unwrap();
    let stored = StoredFit::load(dir.path()).unwrap();
    assert_eq!(stored.summary, io::FitSummary::of(&slope));
    let x = spec.predictand();
    assert!((stored.predict(x).unwrap() - predict(&slope, x).unwrap()).abs() < 1e-12);
    // a_hat + int b_hat Xbar = Ybar
    assert!((stored.predict(slope.x_mean()).unwrap() - slope.y_mean()).abs() < 1e-9);

    let coeffs =
        io::read_coefficients(io::coefficients_to_csv(&slope).as_bytes()).unwrap();
    assert_eq!(coeffs.len(), slope.cutoff());
    for (j, (k, _, b)) in coeffs.iter().enumerate() {
        assert_eq!(*k, j + 1);
        assert_eq!(*b, slope.b_coeffs()[j]);
    }
}

#[test]
fn kernel_and_eigen_files_round_trip() {
    let (_, data) = study1_data(31, 40, 5);
    let k = empirical_covariance(data.curves()).unwrap();
    let back = io::read_kernel(io::kernel_to_csv(&k).as_bytes()).unwrap();
    assert_eq!(back.kernel(), k.kernel());

    let sys = eigendecompose(&k, 6).unwrap();
    let back: EigenSystem = io::read_eigensystem(
        io::eigenvalues_to_csv(&sys).as_bytes(),
        io::eigenfunctions_to_csv(&sys).as_bytes(),
    )
    .unwrap();
    assert_eq!(back.eigenvalues(), sys.eigenvalues());
    assert_eq!(back.eigenfunctions(), sys.eigenfunctions());
}

#[test]
fn mc_table_round_trips() {
    let cfg = McConfig {
        reps: 3,
        grid_points: 51,
        arms: Arms::Continuous,
        ..McConfig::default()
    };
    let table = run_study1(&cfg).unwrap().continuous.unwrap();
    assert_eq!(io::read_mc_table(io::mc_table_to_csv(&table).as_bytes()).unwrap(), table);
}

#[test]
fn perturbation_bounds_hold_on_every_replicate() {
    let grid = Grid::uniform(101).unwrap();
    let spec = PopulationSpec::study1(&grid);
    let ktrue = population_covariance(spec.theta(), &grid, spec.terms()).unwrap();
    let truth = EigenSystem::cosine_population(spec.theta(), &grid).unwrap();
    for seed in 0..20 {
        let data = sample_dataset(&spec, 100, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let khat = empirical_covariance(data.curves()).unwrap();
        let sys = eigendecompose(&khat, 6).unwrap();
        let r = perturbation_report(&khat, &ktrue, &sys, &truth, 5).unwrap();
        assert!(r.eigenvalue_bound_holds(1e-6), "seed {seed}: {r:?}");
        assert!(r.eigenfunction_bound_holds(1e-6), "seed {seed}: {r:?}");
    }
}

#[test]
fn prediction_oracles_agree() {
    let spec = PopulationSpec::study1(&Grid::uniform(201).unwrap());
    assert!((spec.prediction_oracle() - spec.coefficient_oracle()).abs() < 1e-6);
}

#[test]
fn smoother_regimes_predict_better() {
    // Matched constants, beta = 4: x smoother relative to K gives smaller error.
    let mse = |gamma: f64| {
        let cfg = RateConfig {
            grid_points: 51,
            terms: 20,
            rule: Some(CutoffRule::Fixed { m: 3 }),
            ..RateConfig::new(RegimeParams::new(2.0, 4.0, gamma), vec![100, 150, 200], 500, 11)
        };
        run_rate_experiment(&cfg).unwrap().rows[0].mse
    };
    let (parametric, boundary, polynomial) = (mse(2.0), mse(1.5), mse(1.0));
    assert!(parametric <= boundary, "{parametric} > {boundary}");
    assert!(boundary <= polynomial, "{boundary} > {polynomial}");
}
