use std::path::PathBuf;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{
    build_grid, select_v_max, FrequencyGrid, GridMode, RateParameters, WeightFunction,
    DEFAULT_EPSILON, DEFAULT_GRID_POINTS,
};
use crate::models::special::{normal_pdf, normal_sf};
use crate::models::{ExpJumpSubordinator, GeometricCompoundPoisson, DEFAULT_SERIES_TOL};
use crate::triplet::KernelSpec;

/// Sample size used for curve experiments when none is configured.
pub const DEFAULT_CURVE_SIZE: usize = 10_000;
/// Number of points of the default Lévy density grid.
pub const DEFAULT_X_POINTS: usize = 200;

/// One of the two reference subordinators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    ExpJump(ExpJumpSubordinator),
    GeometricCompoundPoisson(GeometricCompoundPoisson),
}

impl ModelSpec {
    /// Short name used in output file names.
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::ExpJump(_) => "exp_jump",
            ModelSpec::GeometricCompoundPoisson(_) => "geometric",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::ExpJump(m) => m.validate(),
            ModelSpec::GeometricCompoundPoisson(m) => m.validate(),
        }
    }

    pub fn psi(&self, s: Complex64) -> Result<Complex64> {
        match self {
            ModelSpec::ExpJump(m) => m.psi(s),
            ModelSpec::GeometricCompoundPoisson(m) => m.psi(s),
        }
    }

    /// True drift `c`.
    pub fn drift(&self) -> f64 {
        match self {
            ModelSpec::ExpJump(m) => m.c,
            ModelSpec::GeometricCompoundPoisson(_) => 0.0,
        }
    }

    /// True total jump mass `a`.
    pub fn jump_mass(&self) -> f64 {
        match self {
            ModelSpec::ExpJump(m) => m.a,
            ModelSpec::GeometricCompoundPoisson(m) => m.lambda,
        }
    }

    /// Factor between the reported Lévy density scale and the jumps of `xi`:
    /// a reported abscissa `x` corresponds to a jump `x * scale`.
    pub fn density_scale(&self) -> f64 {
        match self {
            ModelSpec::ExpJump(_) => 1.0,
            ModelSpec::GeometricCompoundPoisson(m) => m.jump_scale(),
        }
    }

    /// Lévy density in the reported scale.
    pub fn levy_density(&self, x: f64) -> f64 {
        match self {
            ModelSpec::ExpJump(m) => m.levy_density(x),
            ModelSpec::GeometricCompoundPoisson(m) => m.levy_density(x),
        }
    }

    /// Right end of the default density grid: three mean jump sizes.
    pub fn default_x_max(&self) -> f64 {
        match self {
            ModelSpec::ExpJump(m) => 3.0 / m.b,
            ModelSpec::GeometricCompoundPoisson(m) => {
                3.0 * normal_pdf(m.alpha) / normal_sf(m.alpha)
            }
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, n: usize, series_tol: f64, rng: &mut R) -> Result<Vec<f64>> {
        match self {
            ModelSpec::ExpJump(m) => m.draw(n, rng),
            ModelSpec::GeometricCompoundPoisson(m) => m.draw(n, series_tol, rng),
        }
    }
}

/// How the frequency window `V_n` is chosen for each sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum VMaxRule {
    Fixed { value: f64 },
    /// `V_n = kappa ln n`.
    Rates(RateParameters),
}

impl VMaxRule {
    pub fn resolve(&self, n: usize) -> Result<f64> {
        match self {
            VMaxRule::Fixed { value } => {
                if value.is_finite() && *value > 0.0 {
                    Ok(*value)
                } else {
                    Err(Error::InvalidGrid(format!("v_max must be positive, got {value}")))
                }
            }
            VMaxRule::Rates(rates) => select_v_max(n, rates),
        }
    }
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSettings {
    pub u: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    pub v_max: VMaxRule,
}

impl GridSettings {
    pub fn grid(&self, n: usize, mode: GridMode) -> Result<FrequencyGrid> {
        build_grid(self.u, self.epsilon, self.v_max.resolve(n)?, self.grid_points, mode)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSetting {
    #[default]
    Uniform,
    /// One weight per grid point of the one-sided grid.
    Table { values: Vec<f64> },
}

impl WeightSetting {
    pub fn resolve(&self, grid: &FrequencyGrid) -> Result<WeightFunction> {
        match self {
            WeightSetting::Uniform => WeightFunction::uniform(grid),
            WeightSetting::Table { values } => WeightFunction::from_table(grid, values.clone()),
        }
    }
}

/// Where the Laplace exponent table comes from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiSource {
    #[default]
    Empirical,
    /// The model's closed-form exponent; isolates discretisation bias.
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Parameters,
    PsiCurve,
    LevyRecovery,
}

/// Equidistant abscissae in the reported density scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XGridSettings {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl XGridSettings {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.start.is_finite() && self.end.is_finite() && self.start < self.end) {
            return Err(Error::InvalidParameter(format!(
                "x grid needs start < end, got [{}, {}]",
                self.start, self.end
            )));
        }
        match self.points {
            0 => Err(Error::InvalidParameter("x grid needs at least one point".into())),
            1 => Ok(vec![self.start]),
            k => {
                let dx = (self.end - self.start) / (k - 1) as f64;
                Ok((0..k).map(|i| self.start + dx * i as f64).collect())
            }
        }
    }
}

/// Default density grid `x_k = k x_max / 200`, `k = 1..=200`.
pub fn default_x_grid(model: &ModelSpec) -> Vec<f64> {
    let x_max = model.default_x_max();
    (1..=DEFAULT_X_POINTS)
        .map(|k| x_max * k as f64 / DEFAULT_X_POINTS as f64)
        .collect()
}

fn default_runs() -> usize {
    25
}

fn default_experiments() -> Vec<ExperimentKind> {
    vec![ExperimentKind::Parameters]
}

fn default_curve_sizes() -> Vec<usize> {
    vec![DEFAULT_CURVE_SIZE]
}

fn default_series_tol() -> f64 {
    DEFAULT_SERIES_TOL
}

/// Full description of a Monte Carlo experiment. Everything the outputs
/// depend on lives here, so equal configs give byte-identical outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    /// Sample sizes of the parameter experiment, strictly increasing.
    pub n_values: Vec<usize>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    pub grid: GridSettings,
    #[serde(default)]
    pub weights: WeightSetting,
    #[serde(default)]
    pub kernel: KernelSpec,
    /// Kernel bandwidth; `1 / V_n` when absent.
    #[serde(default)]
    pub bandwidth: Option<f64>,
    #[serde(default)]
    pub x_grid: Option<XGridSettings>,
    #[serde(default)]
    pub psi_source: PsiSource,
    #[serde(default = "default_experiments")]
    pub experiments: Vec<ExperimentKind>,
    /// Sample sizes of the psi-curve and Lévy recovery experiments.
    #[serde(default = "default_curve_sizes")]
    pub curve_sizes: Vec<usize>,
    /// The psi-curve sup error is taken over `|v| <= psi_sup_window` (whole grid when absent).
    #[serde(default)]
    pub psi_sup_window: Option<f64>,
    /// Probe frequencies for the Mellin decay diagnostic, run once per `n_values` entry.
    #[serde(default)]
    pub decay_probe: Option<Vec<f64>>,
    pub master_seed: u64,
    #[serde(default = "default_series_tol")]
    pub series_tol: f64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be at least 1".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::InvalidParameter("n_values must not be empty".into()));
        }
        for sizes in [&self.n_values, &self.curve_sizes] {
            if sizes.iter().any(|&n| n < 2) {
                return Err(Error::InvalidParameter("sample sizes must be at least 2".into()));
            }
            if sizes.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(
                    "sample sizes must be strictly increasing".into(),
                ));
            }
        }
        if self.experiments.is_empty() {
            return Err(Error::InvalidParameter("no experiment selected".into()));
        }
        if self.curve_sizes.is_empty()
            && self.experiments.iter().any(|k| *k != ExperimentKind::Parameters)
        {
            return Err(Error::InvalidParameter("curve experiments need curve_sizes".into()));
        }
        for &n in self.n_values.iter().chain(&self.curve_sizes) {
            let one = self.grid.grid(n, GridMode::OneSided)?;
            self.weights.resolve(&one)?;
            self.grid.grid(n, GridMode::Symmetric)?;
        }
        self.kernel.validate()?;
        if let Some(h) = self.bandwidth {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidParameter(format!("bandwidth must be positive, got {h}")));
            }
        }
        if let Some(x) = &self.x_grid {
            x.points()?;
        }
        if let Some(w) = self.psi_sup_window {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "psi_sup_window must be positive, got {w}"
                )));
            }
        }
        if let Some(probe) = &self.decay_probe {
            check_probe(probe)?;
        }
        if !(self.series_tol > 0.0) {
            return Err(Error::InvalidParameter("series_tol must be positive".into()));
        }
        Ok(())
    }

    pub fn x_points(&self) -> Result<Vec<f64>> {
        match &self.x_grid {
            Some(x) => x.points(),
            None => Ok(default_x_grid(&self.model)),
        }
    }
}

pub(crate) fn check_probe(probe: &[f64]) -> Result<()> {
    if probe.len() < 4 {
        return Err(Error::InvalidParameter(
            "decay probe needs at least four frequencies".into(),
        ));
    }
    if probe.iter().any(|v| !(*v > 0.0 && v.is_finite())) || probe.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "decay probe frequencies must be positive and increasing".into(),
        ));
    }
    Ok(())
}
