//! Functional principal components prediction for the functional linear
//! model `Y = a + int b X + e` on `[0, 1]`.
//!
//! * [`funcgrid`]: uniform grids, trapezoid quadrature and the cosine basis
//! * [`fpca`]: empirical and population covariance operators, their
//!   eigendecomposition and eigen-perturbation diagnostics
//! * [`regression`]: slope and intercept estimation, cut-off rules,
//!   prediction and the convergence-rate function
//! * [`presmooth`]: series smoothing of noisy, discretely observed curves
//! * [`simlab`]: Monte Carlo studies, rate experiments and lower-bound numerics
//! * [`io`]: CSV and key/value file formats

pub mod error;
pub mod fpca;
pub mod funcgrid;
pub mod io;
pub mod presmooth;
pub mod regression;
pub mod simlab;

pub use error::{FlrError, Result};
pub use fpca::{
    eigendecompose, empirical_covariance, perturbation_report, population_covariance, sign_align,
    CovOperator, EigenSystem, PerturbationReport,
};
pub use funcgrid::{
    cosine_basis, inner_product, make_uniform_grid, project, synthesize, CoefVector, Grid,
    GridFunction,
};
pub use presmooth::{default_smoothing_order, series_smooth, NoisyCurve, SeriesSmoother};
pub use regression::{
    cutoff, estimate_g, fit, predict, rate_tau, CutoffRule, Dataset, RateRegime, RegimeParams,
    SlopeFit, SpectralEstimate, Validation,
};
