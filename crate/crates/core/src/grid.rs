//! Frequency grids, weight functions and the rate parameters that fix the
//! frequency window `V_n`.
//!
//! A grid is described by relative abscissae `alpha_m` and the window
//! `v_max`; the evaluation points are `u + i * alpha_m * v_max`. One-sided
//! grids cover `[epsilon, 1]` (used for the drift and jump-mass regression),
//! symmetric grids cover `[-1, 1]` (used for Fourier inversion).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of grid points.
pub const DEFAULT_GRID_POINTS: usize = 201;
/// Default lower end of the one-sided relative grid.
pub const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMode {
    /// `alpha` spans `[epsilon, 1]`.
    OneSided,
    /// `alpha` spans `[-1, 1]`.
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    /// Fixed real part of the evaluation points.
    pub u: f64,
    pub epsilon: f64,
    pub v_max: f64,
    /// Spacing of the imaginary parts `v_m`, i.e. `(alpha_{m+1} - alpha_m) * v_max`.
    pub step: f64,
    pub alphas: Vec<f64>,
    pub mode: GridMode,
}

/// Builds an equidistant grid of `m_count` relative abscissae.
///
/// The symmetric grid is constructed from integer offsets so that
/// `alphas[m] == -alphas[M - 1 - m]` holds bit for bit.
pub fn build_grid(
    u: f64,
    epsilon: f64,
    v_max: f64,
    m_count: usize,
    mode: GridMode,
) -> Result<FrequencyGrid> {
    if !u.is_finite() {
        return Err(Error::InvalidGrid(format!("u must be finite, got {u}")));
    }
    if mode == GridMode::OneSided && !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidGrid(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if !(v_max > 0.0 && v_max.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "v_max must be positive and finite, got {v_max}"
        )));
    }
    if m_count < 2 {
        return Err(Error::InvalidGrid(format!(
            "at least two grid points are required, got {m_count}"
        )));
    }

    let last = (m_count - 1) as f64;
    let (alphas, span): (Vec<f64>, f64) = match mode {
        GridMode::OneSided => (
            (0..m_count)
                .map(|m| {
                    let t = m as f64 / last;
                    epsilon * (1.0 - t) + t
                })
                .collect(),
            1.0 - epsilon,
        ),
        GridMode::Symmetric => (
            (0..m_count)
                .map(|m| (2.0 * m as f64 - last) / last)
                .collect(),
            2.0,
        ),
    };

    Ok(FrequencyGrid {
        u,
        epsilon,
        v_max,
        step: span * v_max / last,
        alphas,
        mode,
    })
}

impl FrequencyGrid {
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Imaginary parts `v_m = alpha_m * v_max` of the evaluation points.
    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        self.alphas.iter().map(move |a| a * self.v_max)
    }

    /// Checks the structural invariants; used on deserialised grids.
    pub fn validate(&self) -> Result<()> {
        if self.alphas.len() < 2 {
            return Err(Error::InvalidGrid("fewer than two grid points".into()));
        }
        if !(self.v_max > 0.0 && self.v_max.is_finite()) || !self.u.is_finite() {
            return Err(Error::InvalidGrid("u and v_max must be finite, v_max > 0".into()));
        }
        let (lo, hi) = match self.mode {
            GridMode::OneSided => (self.epsilon, 1.0),
            GridMode::Symmetric => (-1.0, 1.0),
        };
        let rel_step = self.step / self.v_max;
        for pair in self.alphas.windows(2) {
            let d = pair[1] - pair[0];
            if d <= 0.0 {
                return Err(Error::InvalidGrid("alphas must be strictly increasing".into()));
            }
            if (d - rel_step).abs() > 1e-9 * rel_step.max(1.0) {
                return Err(Error::InvalidGrid(
                    "alphas are not equidistant with the recorded step".into(),
                ));
            }
        }
        let tol = 1e-12;
        if self.alphas.iter().any(|&a| a < lo - tol || a > hi + tol) {
            return Err(Error::InvalidGrid(format!(
                "alphas must lie in [{lo}, {hi}] for {:?} grids",
                self.mode
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Uniform,
    UserTable,
}

/// Nonnegative regression weights `w(alpha_m)`, supported on `[epsilon, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub kind: WeightKind,
    pub support: (f64, f64),
    /// One value per grid point.
    pub values: Vec<f64>,
}

impl WeightFunction {
    /// `w = 1` on `[epsilon, 1]`, zero elsewhere.
    pub fn uniform(grid: &FrequencyGrid) -> Result<Self> {
        let support = (grid.epsilon, 1.0);
        let values = grid
            .alphas
            .iter()
            .map(|&a| if in_support(a, support) { 1.0 } else { 0.0 })
            .collect();
        Self::checked(WeightKind::Uniform, support, values)
    }

    /// Weights supplied point by point. Entries for abscissae outside
    /// `[epsilon, 1]` must be zero.
    pub fn from_table(grid: &FrequencyGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "weight table has {} entries, grid has {}",
                values.len(),
                grid.len()
            )));
        }
        let support = (grid.epsilon, 1.0);
        for (&a, &w) in grid.alphas.iter().zip(&values) {
            if !in_support(a, support) && w != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "weight at alpha = {a} lies outside [{}, 1] but is nonzero",
                    grid.epsilon
                )));
            }
        }
        Self::checked(WeightKind::UserTable, support, values)
    }

    /// Samples a weight function on the grid; values outside the support are zeroed.
    pub fn from_fn(grid: &FrequencyGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let support = (grid.epsilon, 1.0);
        let values = grid
            .alphas
            .iter()
            .map(|&a| if in_support(a, support) { f(a) } else { 0.0 })
            .collect();
        Self::checked(WeightKind::UserTable, support, values)
    }

    fn checked(kind: WeightKind, support: (f64, f64), values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter(
                "weights must be finite and nonnegative".into(),
            ));
        }
        if values.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidParameter(
                "weights vanish at every grid point".into(),
            ));
        }
        Ok(Self {
            kind,
            support,
            values,
        })
    }
}

fn in_support(alpha: f64, (lo, hi): (f64, f64)) -> bool {
    // One-sided grids place their end points exactly on the support bounds.
    alpha >= lo - 1e-12 && alpha <= hi + 1e-12
}

/// Decay rate `gamma` of the Mellin transform, smoothness order `r` of the
/// tilted Lévy density, and the window constant `kappa` with `2 kappa gamma < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParameters {
    pub gamma: f64,
    pub r: f64,
    pub kappa: f64,
}

impl RateParameters {
    pub fn new(gamma: f64, r: f64, kappa: f64) -> Result<Self> {
        let rates = Self { gamma, r, kappa };
        rates.validate()?;
        Ok(rates)
    }

    /// Rates with `kappa = 1 / (4 gamma)`, half the admissible bound.
    pub fn with_default_kappa(gamma: f64, r: f64) -> Result<Self> {
        Self::new(gamma, r, 0.25 / gamma)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("gamma", self.gamma), ("r", self.r), ("kappa", self.kappa)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {x}"
                )));
            }
        }
        if 2.0 * self.kappa * self.gamma >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "kappa = {} must be below 1/(2 gamma) = {}",
                self.kappa,
                0.5 / self.gamma
            )));
        }
        Ok(())
    }
}

/// Frequency window `V_n = kappa * ln(n)`.
pub fn select_v_max(n: usize, rates: &RateParameters) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "sample size must be at least 2, got {n}"
        )));
    }
    rates.validate()?;
    Ok(rates.kappa * (n as f64).ln())
}
