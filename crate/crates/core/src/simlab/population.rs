use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{FlrError, Result};
use crate::funcgrid::{quad, CosineTable, Grid, GridFunction, DEFAULT_SERIES_TERMS};
use crate::regression::{Dataset, RegimeParams};

/// Gaussian generative model in the cosine basis:
/// `X = sum_j Z_j phi_j` with `Z_j ~ N(0, theta_j)` and
/// `Y = a + int b X + sigma e`, all series truncated at `J` terms.
#[derive(Debug, Clone)]
pub struct PopulationSpec {
    theta: Vec<f64>,
    b_coeffs: Vec<f64>,
    x_coeffs: Vec<f64>,
    intercept: f64,
    noise_sd: f64,
    table: CosineTable,
    slope: GridFunction,
    predictand: GridFunction,
}

impl PopulationSpec {
    pub fn new(
        grid: &Grid,
        terms: usize,
        theta: impl Fn(usize) -> f64,
        b: impl Fn(usize) -> f64,
        x: impl Fn(usize) -> f64,
        intercept: f64,
        noise_sd: f64,
    ) -> Result<Self> {
        if terms == 0 {
            return Err(FlrError::invalid("series truncation J must be positive"));
        }
        let theta: Vec<f64> = (1..=terms).map(theta).collect();
        let b_coeffs: Vec<f64> = (1..=terms).map(b).collect();
        let x_coeffs: Vec<f64> = (1..=terms).map(x).collect();
        if theta.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(FlrError::invalid("eigenvalues must be finite and nonnegative"));
        }
        if theta.windows(2).any(|w| w[1] > w[0] || (w[0] > 0.0 && w[1] == w[0])) {
            return Err(FlrError::invalid(
                "eigenvalues must be strictly decreasing while positive",
            ));
        }
        if b_coeffs.iter().chain(&x_coeffs).any(|c| !c.is_finite())
            || !intercept.is_finite()
            || !(noise_sd >= 0.0 && noise_sd.is_finite())
        {
            return Err(FlrError::invalid(
                "coefficients, intercept and noise level must be finite (noise >= 0)",
            ));
        }
        let table = CosineTable::new(grid, terms);
        let slope = GridFunction::from_parts(grid, table.synthesize(&b_coeffs));
        let predictand = GridFunction::from_parts(grid, table.synthesize(&x_coeffs));
        Ok(PopulationSpec {
            theta,
            b_coeffs,
            x_coeffs,
            intercept,
            noise_sd,
            table,
            slope,
            predictand,
        })
    }

    /// First threshold study: `theta_j = 4 j^-2`, `b_j = j^-4`,
    /// `x_j = j^-2`, errors `N(0, 4)`, intercept 0.
    pub fn study1(grid: &Grid) -> Self {
        Self::new(
            grid,
            DEFAULT_SERIES_TERMS,
            |j| 4.0 * (j as f64).powi(-2),
            |j| (j as f64).powi(-4),
            |j| (j as f64).powi(-2),
            0.0,
            2.0,
        )
        .expect("study 1 parameters are valid")
    }

    /// Second study: as the first but `b_j = 10 j^-2` and `x_j = j^-1.6`.
    pub fn study2(grid: &Grid) -> Self {
        Self::new(
            grid,
            DEFAULT_SERIES_TERMS,
            |j| 4.0 * (j as f64).powi(-2),
            |j| 10.0 * (j as f64).powi(-2),
            |j| (j as f64).powf(-1.6),
            0.0,
            2.0,
        )
        .expect("study 2 parameters are valid")
    }

    /// Power-law population `theta_j = C j^-alpha`, `b_j = C1 j^-beta`,
    /// `x_j = C2 j^-gamma`, intercept 0.
    pub fn power_law(regime: &RegimeParams, noise_sd: f64, grid: &Grid, terms: usize) -> Result<Self> {
        let r = *regime;
        Self::new(
            grid,
            terms,
            move |j| r.c * (j as f64).powf(-r.alpha),
            move |j| r.c1 * (j as f64).powf(-r.beta),
            move |j| r.c2 * (j as f64).powf(-r.gamma),
            0.0,
            noise_sd,
        )
    }

    pub fn grid(&self) -> &Grid {
        self.table.grid()
    }

    pub fn terms(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn b_coeffs(&self) -> &[f64] {
        &self.b_coeffs
    }

    pub fn x_coeffs(&self) -> &[f64] {
        &self.x_coeffs
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }

    /// The slope function `b` on the grid.
    pub fn slope(&self) -> &GridFunction {
        &self.slope
    }

    /// The fixed predictand `x` on the grid.
    pub fn predictand(&self) -> &GridFunction {
        &self.predictand
    }

    /// `int b x` by quadrature on the grid.
    pub fn slope_functional_oracle(&self) -> f64 {
        quad(self.grid(), self.slope.values(), self.predictand.values())
    }

    /// `a + int b x` by quadrature on the grid.
    pub fn prediction_oracle(&self) -> f64 {
        self.intercept + self.slope_functional_oracle()
    }

    /// `a + sum_j b_j x_j`, the same quantity in coefficient space.
    pub fn coefficient_oracle(&self) -> f64 {
        self.intercept
            + self
                .b_coeffs
                .iter()
                .zip(&self.x_coeffs)
                .map(|(b, x)| b * x)
                .sum::<f64>()
    }

    /// `Var(Y) = sum_j theta_j b_j^2 + sigma^2`.
    pub fn response_variance(&self) -> f64 {
        self.theta
            .iter()
            .zip(&self.b_coeffs)
            .map(|(t, b)| t * b * b)
            .sum::<f64>()
            + self.noise_sd * self.noise_sd
    }

    /// Karhunen-Loeve scores `Z_j ~ N(0, theta_j)`.
    pub fn sample_scores<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.theta
            .iter()
            .map(|t| {
                let z: f64 = StandardNormal.sample(rng);
                z * t.sqrt()
            })
            .collect()
    }

    /// `sum_j scores[j] phi_{j+1}` on the population grid.
    pub fn curve_from_scores(&self, scores: &[f64]) -> GridFunction {
        GridFunction::from_parts(self.grid(), self.table.synthesize(scores))
    }

    /// `a + int b X + sigma e` for a curve on the population grid.
    pub fn response(&self, curve: &GridFunction, standard_normal: f64) -> f64 {
        self.intercept
            + quad(self.grid(), self.slope.values(), curve.values())
            + self.noise_sd * standard_normal
    }

    /// Samples `n` curves from `curve_rng` and `n` errors from `noise_rng`.
    pub(crate) fn sample_dataset_split<R1, R2>(
        &self,
        n: usize,
        curve_rng: &mut R1,
        noise_rng: &mut R2,
    ) -> Result<(Vec<Vec<f64>>, Dataset)>
    where
        R1: Rng + ?Sized,
        R2: Rng + ?Sized,
    {
        let scores: Vec<Vec<f64>> = (0..n).map(|_| self.sample_scores(curve_rng)).collect();
        let curves: Vec<GridFunction> = scores.iter().map(|s| self.curve_from_scores(s)).collect();
        let y = curves
            .iter()
            .map(|c| self.response(c, StandardNormal.sample(noise_rng)))
            .collect();
        Ok((scores, Dataset::new(curves, y)?))
    }
}

/// One draw of the predictor process.
pub fn sample_x<R: Rng + ?Sized>(spec: &PopulationSpec, rng: &mut R) -> GridFunction {
    let scores = spec.sample_scores(rng);
    spec.curve_from_scores(&scores)
}

/// `n` independent pairs `(X_i, Y_i)`; curves are drawn first, then errors.
pub fn sample_dataset<R: Rng + ?Sized>(spec: &PopulationSpec, n: usize, rng: &mut R) -> Result<Dataset> {
    if n < 2 {
        return Err(FlrError::invalid(format!("sample size {n} must be at least 2")));
    }
    let curves: Vec<GridFunction> = (0..n).map(|_| sample_x(spec, rng)).collect();
    let y = curves
        .iter()
        .map(|c| spec.response(c, StandardNormal.sample(rng)))
        .collect();
    Dataset::new(curves, y)
}
