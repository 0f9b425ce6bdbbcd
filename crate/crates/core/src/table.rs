use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableSource {
    Empirical,
    Analytic,
}

/// Values of a Laplace exponent at `u + i * alpha_m * v_max`, one per grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceExponentTable {
    pub grid: FrequencyGrid,
    pub values: Vec<Complex64>,
    pub source: TableSource,
}

impl LaplaceExponentTable {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>, source: TableSource) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "table has {} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            source,
        })
    }

    /// Tabulates an analytic Laplace exponent on the grid.
    pub fn analytic(
        grid: FrequencyGrid,
        psi: impl Fn(Complex64) -> Result<Complex64>,
    ) -> Result<Self> {
        let values = grid
            .frequencies()
            .map(|v| psi(Complex64::new(grid.u, v)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, values, TableSource::Analytic)
    }

    /// Evaluation points `u + i v_m`.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.grid.frequencies().map(|v| Complex64::new(self.grid.u, v))
    }
}
