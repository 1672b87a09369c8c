//! Principal-components estimation of the slope function and prediction.
//!
//! Given curves `X_i` and responses `Y_i`, the slope `b` is estimated by
//! `b_hat = sum_{j <= m} (g_hat_j / theta_hat_j) phi_hat_j`, where
//! `g_hat(t) = n^{-1} sum_i (X_i(t) - Xbar(t)) (Y_i - Ybar)` and
//! `(theta_hat_j, phi_hat_j)` are the empirical covariance eigenpairs. The
//! cut-off `m` comes from a [`CutoffRule`].

use std::fmt;
use std::sync::Arc;

use crate::error::{FlrError, Result};
use crate::fpca::{column_means, covariance_from_matrix, eigendecompose, sample_matrix, EigenSystem};
use crate::funcgrid::{inner_product, quad, Grid, GridFunction};

/// Eigenvalues below this multiple of the leading one are not inverted.
pub const ILL_CONDITIONING_TOL: f64 = 1e-12;

/// Paired curves and scalar responses.
#[derive(Debug, Clone)]
pub struct Dataset {
    curves: Vec<GridFunction>,
    responses: Vec<f64>,
}

impl Dataset {
    pub fn new(curves: Vec<GridFunction>, responses: Vec<f64>) -> Result<Self> {
        if curves.len() != responses.len() {
            return Err(FlrError::invalid(format!(
                "{} curves but {} responses",
                curves.len(),
                responses.len()
            )));
        }
        if curves.len() < 2 {
            return Err(FlrError::invalid(format!(
                "need at least 2 observations, got {}",
                curves.len()
            )));
        }
        if responses.iter().any(|y| !y.is_finite()) {
            return Err(FlrError::invalid("responses must be finite"));
        }
        let grid = curves[0].grid();
        for c in &curves {
            grid.check(c.grid())?;
        }
        Ok(Dataset { curves, responses })
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn grid(&self) -> &Grid {
        self.curves[0].grid()
    }

    pub fn curves(&self) -> &[GridFunction] {
        &self.curves
    }

    pub fn responses(&self) -> &[f64] {
        &self.responses
    }
}

/// Which branch of the rate function applies, by comparing `alpha + 1` with `2 gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateRegime {
    /// `alpha + 1 < 2 gamma`: parametric `1/n` rate.
    Parametric,
    /// `alpha + 1 = 2 gamma`: `log(n)/n`.
    Boundary,
    /// `alpha + 1 > 2 gamma`: polynomial rate slower than `1/n`.
    Polynomial,
}

impl RateRegime {
    pub fn classify(alpha: f64, gamma: f64) -> Self {
        let diff = (alpha + 1.0) - 2.0 * gamma;
        if diff.abs() <= 1e-9 * (alpha + 1.0).abs().max(1.0) {
            RateRegime::Boundary
        } else if diff < 0.0 {
            RateRegime::Parametric
        } else {
            RateRegime::Polynomial
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RateRegime::Parametric => "alpha+1 < 2*gamma",
            RateRegime::Boundary => "alpha+1 = 2*gamma",
            RateRegime::Polynomial => "alpha+1 > 2*gamma",
        }
    }
}

impl fmt::Display for RateRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How strictly [`RegimeParams::validate`] treats values outside the
/// range where the upper-bound theory applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validation {
    Strict,
    /// Log a warning and continue; for exploratory runs.
    Lenient,
}

/// Smoothness exponents and constants of the model classes.
///
/// `theta_j ~ c j^-alpha`, `|b_j| <= c1 j^-beta`, `|x_j| <= c2 j^-gamma`;
/// `c3`, `c4`, `c5` govern the norm truncation of the slope estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
}

impl Default for RegimeParams {
    fn default() -> Self {
        RegimeParams {
            alpha: 2.0,
            beta: 4.0,
            gamma: 2.0,
            c: 1.0,
            c1: 1.0,
            c2: 1.0,
            c3: 0.0,
            c4: 1.0,
            c5: 2.0,
        }
    }
}

impl RegimeParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        RegimeParams {
            alpha,
            beta,
            gamma,
            ..Default::default()
        }
    }

    pub fn regime(&self) -> RateRegime {
        RateRegime::classify(self.alpha, self.gamma)
    }

    /// Checks the parameter ranges. Returns the list of conditions that are
    /// violated; in strict mode any violation is an error.
    pub fn validate(&self, mode: Validation) -> Result<Vec<String>> {
        let all = [
            self.alpha, self.beta, self.gamma, self.c, self.c1, self.c2, self.c3, self.c4,
            self.c5,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(FlrError::invalid("regime parameters must be finite"));
        }
        if self.c <= 0.0 || self.c1 <= 0.0 || self.c2 <= 0.0 || self.c4 <= 0.0 || self.c5 <= 0.0 {
            return Err(FlrError::invalid("constants C, C1, C2, C4, C5 must be positive"));
        }
        if self.c3 < 0.0 {
            return Err(FlrError::invalid("constant C3 must be nonnegative"));
        }
        let mut issues = Vec::new();
        if self.alpha <= 1.0 {
            issues.push(format!("alpha = {} must exceed 1", self.alpha));
        }
        if self.beta <= 1.0 {
            issues.push(format!("beta = {} must exceed 1", self.beta));
        }
        if self.gamma <= 0.5 {
            issues.push(format!("gamma = {} must exceed 1/2", self.gamma));
        }
        if self.beta < self.alpha + 2.0 {
            issues.push(format!(
                "beta = {} is below alpha + 2 = {}; the upper-bound rate is not guaranteed here",
                self.beta,
                self.alpha + 2.0
            ));
        }
        match mode {
            Validation::Strict if !issues.is_empty() => {
                Err(FlrError::invalid(issues.join("; ")))
            }
            _ => {
                for issue in &issues {
                    log::warn!("{issue}");
                }
                Ok(issues)
            }
        }
    }
}

/// Rule for choosing the number of retained components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffRule {
    /// Keep every component with `theta_hat_j >= t`.
    Threshold { t: f64 },
    /// Threshold `t = scale * n^-exponent`, `0 < exponent <= 1/2`.
    ThresholdScaled { scale: f64, exponent: f64 },
    /// The rate-optimal deterministic cut-off `m_0(n)`.
    Deterministic { alpha: f64, beta: f64, gamma: f64 },
    Fixed { m: usize },
}

impl CutoffRule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CutoffRule::Threshold { t } if !(t > 0.0 && t.is_finite()) => {
                Err(FlrError::invalid(format!("threshold t = {t} must be positive")))
            }
            CutoffRule::ThresholdScaled { scale, exponent } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    Err(FlrError::invalid(format!("threshold scale {scale} must be positive")))
                } else if !(exponent > 0.0 && exponent <= 0.5) {
                    Err(FlrError::invalid(format!(
                        "threshold exponent {exponent} must lie in (0, 1/2]"
                    )))
                } else {
                    Ok(())
                }
            }
            CutoffRule::Deterministic { alpha, beta, gamma } => {
                if [alpha, beta, gamma].iter().all(|v| v.is_finite())
                    && alpha + 2.0 * beta > 1.0
                    && beta + gamma > 1.0
                {
                    Ok(())
                } else {
                    Err(FlrError::invalid("invalid smoothness exponents for m_0"))
                }
            }
            _ => Ok(()),
        }
    }
}

/// Real-valued `m_0(n)` before rounding.
pub fn deterministic_cutoff_raw(alpha: f64, beta: f64, gamma: f64, n: usize) -> f64 {
    let n = n as f64;
    match RateRegime::classify(alpha, gamma) {
        RateRegime::Parametric => n.powf(1.0 / (2.0 * (beta + gamma - 1.0))),
        RateRegime::Boundary => (n / n.ln()).powf(1.0 / (alpha + 2.0 * beta - 1.0)),
        RateRegime::Polynomial => n.powf(1.0 / (alpha + 2.0 * beta - 1.0)),
    }
}

/// `m_0(n)` rounded half-up, at least 1.
pub fn deterministic_cutoff(alpha: f64, beta: f64, gamma: f64, n: usize) -> usize {
    let raw = deterministic_cutoff_raw(alpha, beta, gamma, n);
    ((raw + 0.5).floor() as usize).max(1)
}

/// Number of components the rule keeps for a sample of size `n`.
pub fn cutoff(sys: &EigenSystem, rule: &CutoffRule, n: usize) -> usize {
    let count_above = |t: f64| sys.eigenvalues().iter().take_while(|&&v| v >= t).count();
    match *rule {
        CutoffRule::Threshold { t } => count_above(t),
        CutoffRule::ThresholdScaled { scale, exponent } => {
            count_above(scale * (n as f64).powf(-exponent))
        }
        CutoffRule::Deterministic { alpha, beta, gamma } => {
            deterministic_cutoff(alpha, beta, gamma, n).min(sys.len())
        }
        CutoffRule::Fixed { m } => m.min(sys.len()),
    }
}

/// `tau(n)`, the order of the mean-squared error for estimating `int b x`.
pub fn rate_tau(regime: &RegimeParams, n: usize) -> f64 {
    let nf = n as f64;
    match regime.regime() {
        RateRegime::Parametric => 1.0 / nf,
        RateRegime::Boundary => nf.ln() / nf,
        RateRegime::Polynomial => nf.powf(
            -2.0 * (regime.beta + regime.gamma - 1.0) / (regime.alpha + 2.0 * regime.beta - 1.0),
        ),
    }
}

/// `g_hat(t) = n^{-1} sum_i (X_i(t) - Xbar(t)) (Y_i - Ybar)`.
pub fn estimate_g(data: &Dataset) -> Result<GridFunction> {
    let (grid, x) = sample_matrix(&data.curves)?;
    Ok(cross_covariance(&grid, &x, &data.responses))
}

fn cross_covariance(grid: &Grid, x: &nalgebra::DMatrix<f64>, y: &[f64]) -> GridFunction {
    let n = y.len() as f64;
    let ybar = y.iter().sum::<f64>() / n;
    let xbar = column_means(x);
    let values = (0..grid.point_count())
        .map(|q| {
            let s: f64 = y
                .iter()
                .enumerate()
                .map(|(i, yi)| (x[(i, q)] - xbar[q]) * (yi - ybar))
                .sum();
            s / n
        })
        .collect();
    GridFunction::from_parts(grid, values)
}

/// Everything about a dataset that does not depend on the cut-off: the
/// eigensystem of the empirical covariance, `g_hat` and its coefficients,
/// and the sample means. One of these serves any number of cut-off rules.
#[derive(Debug, Clone)]
pub struct SpectralEstimate {
    eigensystem: Arc<EigenSystem>,
    g_hat: GridFunction,
    g_coeffs: Vec<f64>,
    x_mean: GridFunction,
    y_mean: f64,
    n: usize,
}

impl SpectralEstimate {
    pub fn new(data: &Dataset) -> Result<Self> {
        let (grid, x) = sample_matrix(&data.curves)?;
        let n = data.len();
        let op = covariance_from_matrix(&grid, &x);
        let sys = eigendecompose(&op, n.min(grid.point_count()))?;
        let g_hat = cross_covariance(&grid, &x, &data.responses);
        let g_coeffs = sys
            .eigenfunctions()
            .iter()
            .map(|phi| quad(&grid, g_hat.values(), phi.values()))
            .collect();
        let x_mean = GridFunction::from_parts(&grid, column_means(&x));
        let y_mean = data.responses.iter().sum::<f64>() / n as f64;
        Ok(SpectralEstimate {
            eigensystem: Arc::new(sys),
            g_hat,
            g_coeffs,
            x_mean,
            y_mean,
            n,
        })
    }

    pub fn eigensystem(&self) -> &EigenSystem {
        &self.eigensystem
    }

    pub fn g_hat(&self) -> &GridFunction {
        &self.g_hat
    }

    /// `g_hat_j = int g_hat phi_hat_j` for every available component.
    pub fn g_coeffs(&self) -> &[f64] {
        &self.g_coeffs
    }

    pub fn sample_size(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self, rule: &CutoffRule) -> usize {
        cutoff(&self.eigensystem, rule, self.n)
    }

    /// Builds the slope estimate for the cut-off chosen by `rule`.
    pub fn slope_fit(&self, rule: &CutoffRule, regime: &RegimeParams) -> Result<SlopeFit> {
        rule.validate()?;
        let m = self.cutoff(rule);
        self.slope_fit_with_cutoff(m, regime)
    }

    pub fn slope_fit_with_cutoff(&self, m: usize, regime: &RegimeParams) -> Result<SlopeFit> {
        let sys = &self.eigensystem;
        let m = m.min(sys.len());
        let theta = sys.eigenvalues();
        let floor = ILL_CONDITIONING_TOL * theta.first().copied().unwrap_or(0.0);
        let mut b_coeffs = Vec::with_capacity(m);
        for (j, (&th, &g)) in theta.iter().zip(&self.g_coeffs).take(m).enumerate() {
            if !(th > 0.0 && th >= floor) {
                return Err(FlrError::IllConditioned {
                    component: j + 1,
                    eigenvalue: th,
                    relative_tol: ILL_CONDITIONING_TOL,
                });
            }
            b_coeffs.push(g / th);
        }

        let grid = sys.grid();
        let mut b_values = vec![0.0; grid.point_count()];
        for (bj, phi) in b_coeffs.iter().zip(sys.eigenfunctions()) {
            for (o, v) in b_values.iter_mut().zip(phi.values()) {
                *o += bj * v;
            }
        }
        let b_hat = GridFunction::from_parts(grid, b_values);
        let slope_norm = b_hat.norm();
        let limit = regime.c4 * (self.n as f64).powf(regime.c5);
        let truncated = slope_norm.is_nan() || slope_norm > limit;
        let b_tilde = if truncated {
            GridFunction::constant(grid, regime.c3)
        } else {
            b_hat.clone()
        };
        let intercept = self.y_mean - quad(grid, b_hat.values(), self.x_mean.values());

        Ok(SlopeFit {
            eigensystem: Arc::clone(&self.eigensystem),
            m,
            b_coeffs,
            intercept,
            b_hat,
            b_tilde,
            slope_norm,
            truncated,
            y_mean: self.y_mean,
            x_mean: self.x_mean.clone(),
            n: self.n,
        })
    }
}

/// A fitted slope function with its intercept.
#[derive(Debug, Clone)]
pub struct SlopeFit {
    eigensystem: Arc<EigenSystem>,
    m: usize,
    b_coeffs: Vec<f64>,
    intercept: f64,
    b_hat: GridFunction,
    b_tilde: GridFunction,
    slope_norm: f64,
    truncated: bool,
    y_mean: f64,
    x_mean: GridFunction,
    n: usize,
}

impl SlopeFit {
    pub fn eigensystem(&self) -> &EigenSystem {
        &self.eigensystem
    }

    /// Number of components retained.
    pub fn cutoff(&self) -> usize {
        self.m
    }

    /// `b_hat_j`, `j = 1..=m`.
    pub fn b_coeffs(&self) -> &[f64] {
        &self.b_coeffs
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn b_hat(&self) -> &GridFunction {
        &self.b_hat
    }

    /// The norm-truncated slope: `b_hat`, or the constant `C3` when
    /// `||b_hat|| > C4 n^C5`.
    pub fn b_tilde(&self) -> &GridFunction {
        &self.b_tilde
    }

    pub fn slope_norm(&self) -> f64 {
        self.slope_norm
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn y_mean(&self) -> f64 {
        self.y_mean
    }

    pub fn x_mean(&self) -> &GridFunction {
        &self.x_mean
    }

    pub fn sample_size(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &Grid {
        self.b_hat.grid()
    }

    /// `int b_tilde x`, via `sum_j b_hat_j xbar_j` with `xbar_j = int x phi_hat_j`
    /// unless truncation fired.
    pub fn slope_functional(&self, x: &GridFunction) -> Result<f64> {
        self.grid().check(x.grid())?;
        if self.truncated {
            return inner_product(&self.b_tilde, x);
        }
        Ok(self
            .b_coeffs
            .iter()
            .zip(self.eigensystem.eigenfunctions())
            .map(|(bj, phi)| bj * quad(self.grid(), x.values(), phi.values()))
            .sum())
    }

    /// `a_hat + int b_tilde x` by direct quadrature against the slope function.
    pub fn predict_quadrature(&self, x: &GridFunction) -> Result<f64> {
        Ok(self.intercept + inner_product(&self.b_tilde, x)?)
    }
}

/// Runs the full pipeline: covariance, eigendecomposition, cut-off, slope.
pub fn fit(data: &Dataset, rule: &CutoffRule, regime: &RegimeParams) -> Result<SlopeFit> {
    rule.validate()?;
    SpectralEstimate::new(data)?.slope_fit(rule, regime)
}

/// `p_hat(x) = a_hat + int b_tilde x`.
pub fn predict(fit: &SlopeFit, x: &GridFunction) -> Result<f64> {
    Ok(fit.intercept + fit.slope_functional(x)?)
}
