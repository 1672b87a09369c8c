//! Functions on the unit interval sampled on a uniform grid.
//!
//! Integrals are computed with the trapezoid rule. On a uniform grid of
//! `P` points the cosine functions `sqrt(2) cos(j pi t)` for `1 <= j < P - 1`
//! are orthonormal under this rule up to roundoff (discrete cosine
//! transform of type I), which is what makes the discrete covariance
//! operator share its eigenfunctions with the continuous one.

use std::f64::consts::{PI, SQRT_2};
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use crate::error::{FlrError, Result};

/// Default number of terms kept when synthesizing an infinite cosine series.
pub const DEFAULT_SERIES_TERMS: usize = 50;

/// Default analysis grid size; odd so that `t = 0.5` is a grid point.
pub const DEFAULT_GRID_POINTS: usize = 201;

#[derive(Debug)]
struct GridData {
    points: Vec<f64>,
    weights: Vec<f64>,
}

/// Uniform grid `t_p = p / (P - 1)` on `[0, 1]` with trapezoid weights.
///
/// Cloning is cheap; the points and weights are shared.
#[derive(Debug, Clone)]
pub struct Grid(Arc<GridData>);

impl Grid {
    pub fn uniform(point_count: usize) -> Result<Self> {
        if point_count < 2 {
            return Err(FlrError::invalid(format!(
                "grid needs at least 2 points, got {point_count}"
            )));
        }
        let intervals = (point_count - 1) as f64;
        let points = (0..point_count).map(|p| p as f64 / intervals).collect();
        let mut weights = vec![1.0 / intervals; point_count];
        weights[0] = 0.5 / intervals;
        weights[point_count - 1] = 0.5 / intervals;
        Ok(Grid(Arc::new(GridData { points, weights })))
    }

    pub fn point_count(&self) -> usize {
        self.0.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.0.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.0.weights
    }

    /// Uniform grids are determined by their size alone.
    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.point_count() == other.point_count()
    }

    pub(crate) fn check(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(FlrError::GridMismatch {
                expected: self.point_count(),
                found: other.point_count(),
            })
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// Builds the uniform grid with `point_count` points.
pub fn make_uniform_grid(point_count: usize) -> Result<Grid> {
    Grid::uniform(point_count)
}

/// A real function sampled at the points of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.point_count() {
            return Err(FlrError::GridMismatch {
                expected: grid.point_count(),
                found: values.len(),
            });
        }
        if let Some(p) = values.iter().position(|v| !v.is_finite()) {
            return Err(FlrError::invalid(format!(
                "non-finite function value at grid index {p}"
            )));
        }
        Ok(Self::from_parts(grid, values))
    }

    pub(crate) fn from_parts(grid: &Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.point_count());
        GridFunction {
            grid: grid.clone(),
            values,
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_parts(grid, vec![0.0; grid.point_count()])
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        Self::from_parts(grid, vec![value; grid.point_count()])
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_parts(grid, grid.points().iter().map(|&t| f(t)).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scale(&self, factor: f64) -> GridFunction {
        Self::from_parts(
            &self.grid,
            self.values.iter().map(|v| v * factor).collect(),
        )
    }

    /// Quadrature norm `sqrt(int f^2)`.
    pub fn norm(&self) -> f64 {
        quad(&self.grid, &self.values, &self.values).sqrt()
    }

    /// Quadrature integral `int f`.
    pub fn integral(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v)
            .sum()
    }

    fn zip_with(&self, other: &GridFunction, op: impl Fn(f64, f64) -> f64) -> GridFunction {
        assert!(
            self.grid.same_as(&other.grid),
            "grid mismatch in pointwise arithmetic"
        );
        Self::from_parts(
            &self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        )
    }
}

impl Add for &GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: &GridFunction) -> GridFunction {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: &GridFunction) -> GridFunction {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &GridFunction {
    type Output = GridFunction;
    fn mul(self, rhs: f64) -> GridFunction {
        self.scale(rhs)
    }
}

#[inline]
pub(crate) fn quad(grid: &Grid, f: &[f64], g: &[f64]) -> f64 {
    grid.weights()
        .iter()
        .zip(f.iter().zip(g))
        .map(|(w, (a, b))| w * a * b)
        .sum()
}

/// Trapezoid approximation of `int f g` over `[0, 1]`.
pub fn inner_product(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    f.grid.check(&g.grid)?;
    Ok(quad(&f.grid, &f.values, &g.values))
}

/// Value of basis function `j` at `t`: `1` for `j = 0`, else `sqrt(2) cos(j pi t)`.
#[inline]
pub fn cosine_value(j: usize, t: f64) -> f64 {
    if j == 0 {
        1.0
    } else {
        SQRT_2 * (j as f64 * PI * t).cos()
    }
}

pub fn cosine_basis(j: usize, grid: &Grid) -> GridFunction {
    GridFunction::from_fn(grid, |t| cosine_value(j, t))
}

/// Coefficients in the cosine basis; `coeffs[k]` multiplies `phi_{k+1}` and
/// the optional `constant` multiplies the constant function.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefVector {
    pub constant: Option<f64>,
    pub coeffs: Vec<f64>,
}

impl CoefVector {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        Self::with_constant(None, coeffs)
    }

    pub fn with_constant(constant: Option<f64>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(FlrError::invalid("coefficient vector must be non-empty"));
        }
        if coeffs.iter().chain(constant.iter()).any(|c| !c.is_finite()) {
            return Err(FlrError::invalid("coefficients must be finite"));
        }
        Ok(CoefVector { constant, coeffs })
    }

    /// `c_j = f(j)` for `j = 1..=terms`.
    pub fn from_fn(terms: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new((1..=terms).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `phi_j`, `j >= 1`; zero beyond the stored range.
    pub fn get(&self, j: usize) -> f64 {
        if j == 0 {
            self.constant.unwrap_or(0.0)
        } else {
            self.coeffs.get(j - 1).copied().unwrap_or(0.0)
        }
    }

    /// Coefficient-space inner product, `c0 d0 + sum_j c_j d_j`.
    pub fn dot(&self, other: &CoefVector) -> f64 {
        self.constant.unwrap_or(0.0) * other.constant.unwrap_or(0.0)
            + self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }
}

/// Evaluates `c0 + sum_j c_j phi_j` at every grid point.
pub fn synthesize(c: &CoefVector, grid: &Grid) -> GridFunction {
    let c0 = c.constant.unwrap_or(0.0);
    GridFunction::from_fn(grid, |t| {
        c.coeffs
            .iter()
            .enumerate()
            .fold(c0, |acc, (k, &cj)| acc + cj * cosine_value(k + 1, t))
    })
}

/// Inner products of `f` with every function in `basis`.
pub fn project(f: &GridFunction, basis: &[GridFunction]) -> Result<Vec<f64>> {
    basis.iter().map(|phi| inner_product(f, phi)).collect()
}

/// Projection onto `phi_1..phi_J` returned as a [`CoefVector`].
pub fn project_cosine(f: &GridFunction, terms: usize) -> Result<CoefVector> {
    let basis: Vec<_> = (1..=terms).map(|j| cosine_basis(j, f.grid())).collect();
    CoefVector::new(project(f, &basis)?)
}

/// Row-major table of basis values `phi_j(t_p)`, `j = 0..=max_index`, for
/// repeated synthesis on one grid.
#[derive(Debug, Clone)]
pub struct CosineTable {
    grid: Grid,
    max_index: usize,
    values: Vec<f64>,
}

impl CosineTable {
    pub fn new(grid: &Grid, max_index: usize) -> Self {
        let p = grid.point_count();
        let mut values = Vec::with_capacity((max_index + 1) * p);
        for j in 0..=max_index {
            values.extend(grid.points().iter().map(|&t| cosine_value(j, t)));
        }
        CosineTable {
            grid: grid.clone(),
            max_index,
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let p = self.grid.point_count();
        &self.values[j * p..(j + 1) * p]
    }

    /// `sum_j coeffs[j] phi_j` with `coeffs[0]` on the constant function.
    pub fn synthesize_with_constant(&self, coeffs: &[f64]) -> Vec<f64> {
        assert!(coeffs.len() <= self.max_index + 1);
        let mut out = vec![0.0; self.grid.point_count()];
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                for (o, v) in out.iter_mut().zip(self.row(j)) {
                    *o += c * v;
                }
            }
        }
        out
    }

    /// `sum_{j>=1} coeffs[j-1] phi_j`.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        assert!(coeffs.len() <= self.max_index);
        let mut out = vec![0.0; self.grid.point_count()];
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                for (o, v) in out.iter_mut().zip(self.row(k + 1)) {
                    *o += c * v;
                }
            }
        }
        out
    }

    /// Quadrature projections onto `phi_0..phi_max_index`.
    pub fn project_with_constant(&self, values: &[f64]) -> Vec<f64> {
        (0..=self.max_index)
            .map(|j| quad(&self.grid, values, self.row(j)))
            .collect()
    }
}
