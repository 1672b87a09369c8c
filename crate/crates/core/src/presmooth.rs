//! Orthogonal-series reconstruction of curves observed with noise on a grid.

use crate::error::{FlrError, Result};
use crate::funcgrid::{CosineTable, Grid, GridFunction};

/// Noisy observations `X(t_p) + e_p` of one curve on an observation grid.
#[derive(Debug, Clone)]
pub struct NoisyCurve {
    grid: Grid,
    values: Vec<f64>,
}

impl NoisyCurve {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        let f = GridFunction::new(grid, values)?;
        Ok(NoisyCurve {
            grid: grid.clone(),
            values: f.into_values(),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `floor(k^{1/3})`, computed exactly in integers.
pub fn default_smoothing_order(k: usize) -> Result<usize> {
    if k < 8 {
        return Err(FlrError::invalid(format!(
            "observation grid needs at least 8 points, got {k}"
        )));
    }
    let mut m = (k as f64).cbrt().floor() as usize;
    while (m + 1).pow(3) <= k {
        m += 1;
    }
    while m.pow(3) > k {
        m -= 1;
    }
    Ok(m)
}

/// Projects onto `{1, phi_1, ..., phi_J}` on the observation grid and
/// resynthesizes on a target grid. Build once, apply to many curves.
#[derive(Debug, Clone)]
pub struct SeriesSmoother {
    source: CosineTable,
    target: CosineTable,
}

impl SeriesSmoother {
    pub fn new(observation: &Grid, order: usize, target: &Grid) -> Result<Self> {
        let k = observation.point_count();
        if order >= k {
            return Err(FlrError::invalid(format!(
                "smoothing order {order} must be below the number of observation points {k}"
            )));
        }
        Ok(SeriesSmoother {
            source: CosineTable::new(observation, order),
            target: CosineTable::new(target, order),
        })
    }

    pub fn order(&self) -> usize {
        self.source.max_index()
    }

    /// Coefficients on `1, phi_1, ..., phi_J`.
    pub fn coefficients(&self, values: &[f64]) -> Result<Vec<f64>> {
        let k = self.source.grid().point_count();
        if values.len() != k {
            return Err(FlrError::GridMismatch {
                expected: k,
                found: values.len(),
            });
        }
        Ok(self.source.project_with_constant(values))
    }

    pub fn smooth_values(&self, values: &[f64]) -> Result<GridFunction> {
        let coeffs = self.coefficients(values)?;
        Ok(GridFunction::from_parts(
            self.target.grid(),
            self.target.synthesize_with_constant(&coeffs),
        ))
    }

    pub fn smooth(&self, curve: &NoisyCurve) -> Result<GridFunction> {
        self.source.grid().check(curve.grid())?;
        self.smooth_values(&curve.values)
    }
}

/// Series smoother of order `order` applied to a single curve.
pub fn series_smooth(curve: &NoisyCurve, order: usize, target: &Grid) -> Result<GridFunction> {
    SeriesSmoother::new(&curve.grid, order, target)?.smooth(curve)
}
