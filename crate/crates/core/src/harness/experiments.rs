use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind, ModelSpec, PsiSource, VMaxRule};
use super::diagnostics::{fit_mellin_decay, lambda_n, RateDiagnostic};
use crate::error::Result;
use crate::grid::GridMode;
use crate::mellin::estimate_laplace_exponent;
use crate::models::stream_rng;
use crate::sample::SampleSet;
use crate::table::LaplaceExponentTable;
use crate::triplet::{
    estimate_tilted_fourier, estimate_triplet, invert_levy_density, TiltedFourierTable,
    TripletEstimate,
};

// Seed streams: tag in the top two bits, size index in bits 32..62, run in the low 32.
const PARAMETER_STREAMS: u64 = 0;
const CURVE_STREAMS: u64 = 1 << 62;
const DECAY_STREAMS: u64 = 2 << 62;

/// Seed stream of run `run` at the `n_index`-th sample size.
pub fn parameter_stream(n_index: usize, run: usize) -> u64 {
    PARAMETER_STREAMS | ((n_index as u64) << 32) | run as u64
}

fn curve_stream(n_index: usize) -> u64 {
    CURVE_STREAMS | ((n_index as u64) << 32)
}

fn decay_stream(n_index: usize) -> u64 {
    DECAY_STREAMS | ((n_index as u64) << 32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n: usize,
    pub run: usize,
    pub v_max: f64,
    pub c_hat: Option<f64>,
    pub a_hat: Option<f64>,
    /// Reason of a failed run.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSummary {
    pub n: usize,
    pub successes: usize,
    pub failures: usize,
    pub c: Option<Quartiles>,
    pub a: Option<Quartiles>,
    pub c_mae: Option<f64>,
    pub a_mae: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiCurveRow {
    pub v: f64,
    pub re_hat: f64,
    pub im_hat: f64,
    pub abs_hat: f64,
    pub re_true: f64,
    pub im_true: f64,
    pub abs_true: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiCurve {
    pub n: usize,
    pub u: f64,
    pub v_max: f64,
    pub sup_error: f64,
    pub rows: Vec<PsiCurveRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyRow {
    pub x: f64,
    pub nu_real: f64,
    pub nu_imag: f64,
    pub nu_true: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyCurve {
    pub n: usize,
    pub v_max: f64,
    pub bandwidth: f64,
    pub c_hat: f64,
    pub a_hat: f64,
    /// Trapezoidal L2 distance between the real part and the true density
    /// over the x grid; absent for single-point grids.
    pub l2_error: Option<f64>,
    pub rows: Vec<LevyRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayDiagnostic {
    pub n: usize,
    pub gamma_hat: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub crate_version: String,
    pub runs: Vec<RunRecord>,
    pub summaries: Vec<ParameterSummary>,
    pub psi_curves: Vec<PsiCurve>,
    pub levy_curves: Vec<LevyCurve>,
    pub rate_diagnostics: Vec<RateDiagnostic>,
    pub decay_diagnostics: Vec<DecayDiagnostic>,
}

impl ExperimentReport {
    fn empty(config: &ExperimentConfig) -> Self {
        Self {
            config: config.clone(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            runs: Vec::new(),
            summaries: Vec::new(),
            psi_curves: Vec::new(),
            levy_curves: Vec::new(),
            rate_diagnostics: Vec::new(),
            decay_diagnostics: Vec::new(),
        }
    }

    /// Summaries recomputed from the per-run records.
    pub fn recompute_summaries(&self) -> Vec<ParameterSummary> {
        summarize(&self.config, &self.runs)
    }
}

fn draw_samples(config: &ExperimentConfig, n: usize, stream: u64) -> Result<SampleSet> {
    let mut rng = stream_rng(config.master_seed, stream);
    let values = config.model.draw(n, config.series_tol, &mut rng)?;
    SampleSet::new(values, config.model.name(), Some(config.master_seed))
}

fn psi_table(
    config: &ExperimentConfig,
    samples: Option<&SampleSet>,
    n: usize,
    mode: GridMode,
) -> Result<LaplaceExponentTable> {
    let grid = config.grid.grid(n, mode)?;
    match (config.psi_source, samples) {
        (PsiSource::Empirical, Some(s)) => estimate_laplace_exponent(s, &grid),
        _ => LaplaceExponentTable::analytic(grid, |s| config.model.psi(s)),
    }
}

fn fit_triplet(
    config: &ExperimentConfig,
    samples: Option<&SampleSet>,
    n: usize,
) -> Result<TripletEstimate> {
    let table = psi_table(config, samples, n, GridMode::OneSided)?;
    let weights = config.weights.resolve(&table.grid)?;
    estimate_triplet(&table, &weights)
}

fn single_run(config: &ExperimentConfig, n_index: usize, run: usize) -> RunRecord {
    let n = config.n_values[n_index];
    let v_max = config.grid.v_max.resolve(n).unwrap_or(f64::NAN);
    let outcome = match config.psi_source {
        PsiSource::Empirical => draw_samples(config, n, parameter_stream(n_index, run))
            .and_then(|s| fit_triplet(config, Some(&s), n)),
        PsiSource::Analytic => fit_triplet(config, None, n),
    };
    match outcome {
        Ok(t) => RunRecord {
            n,
            run,
            v_max,
            c_hat: Some(t.c_hat),
            a_hat: Some(t.a_hat),
            error: None,
        },
        Err(e) => RunRecord {
            n,
            run,
            v_max,
            c_hat: None,
            a_hat: None,
            error: Some(e.to_string()),
        },
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

fn quartiles(values: &[f64]) -> Option<Quartiles> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(Quartiles {
        q1: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q3: quantile(&sorted, 0.75),
    })
}

fn mae(values: &[f64], truth: f64) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().map(|x| (x - truth).abs()).sum::<f64>() / values.len() as f64)
    }
}

fn summarize(config: &ExperimentConfig, runs: &[RunRecord]) -> Vec<ParameterSummary> {
    config
        .n_values
        .iter()
        .map(|&n| {
            let at_n: Vec<&RunRecord> = runs.iter().filter(|r| r.n == n).collect();
            let c: Vec<f64> = at_n.iter().filter_map(|r| r.c_hat).collect();
            let a: Vec<f64> = at_n.iter().filter_map(|r| r.a_hat).collect();
            ParameterSummary {
                n,
                successes: c.len(),
                failures: at_n.len() - c.len(),
                c: quartiles(&c),
                a: quartiles(&a),
                c_mae: mae(&c, config.model.drift()),
                a_mae: mae(&a, config.model.jump_mass()),
            }
        })
        .collect()
}

/// Replicated estimation of `(c, a)` for every sample size. Failed runs are
/// recorded with their error and do not abort the batch.
pub fn run_parameter_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let mut report = ExperimentReport::empty(config);
    report.runs = parameter_runs(config);
    report.summaries = summarize(config, &report.runs);
    add_diagnostics(config, &mut report)?;
    Ok(report)
}

fn parameter_runs(config: &ExperimentConfig) -> Vec<RunRecord> {
    let jobs: Vec<(usize, usize)> = (0..config.n_values.len())
        .flat_map(|i| (0..config.runs).map(move |r| (i, r)))
        .collect();
    let mut runs: Vec<RunRecord> = jobs
        .into_par_iter()
        .map(|(i, r)| single_run(config, i, r))
        .collect();
    runs.sort_by_key(|r| (r.n, r.run));
    runs
}

fn add_diagnostics(config: &ExperimentConfig, report: &mut ExperimentReport) -> Result<()> {
    if let VMaxRule::Rates(rates) = config.grid.v_max {
        report.rate_diagnostics = config
            .n_values
            .iter()
            .filter_map(|&n| lambda_n(n, &rates).ok())
            .collect();
    }
    if let Some(probe) = &config.decay_probe {
        report.decay_diagnostics = config
            .n_values
            .par_iter()
            .enumerate()
            .map(|(i, &n)| {
                let fit = draw_samples(config, n, decay_stream(i))
                    .and_then(|s| fit_mellin_decay(&s, config.grid.u, probe));
                match fit {
                    Ok(g) => DecayDiagnostic { n, gamma_hat: Some(g), error: None },
                    Err(e) => DecayDiagnostic { n, gamma_hat: None, error: Some(e.to_string()) },
                }
            })
            .collect();
    }
    Ok(())
}

fn curve_samples(config: &ExperimentConfig, n: usize) -> Result<Option<SampleSet>> {
    let i = config.curve_sizes.iter().position(|&m| m == n).unwrap_or(0);
    match config.psi_source {
        PsiSource::Empirical => draw_samples(config, n, curve_stream(i)).map(Some),
        PsiSource::Analytic => Ok(None),
    }
}

/// Estimated against analytic Laplace exponent on the symmetric grid of size `n`.
pub fn run_psi_curve(config: &ExperimentConfig, n: usize) -> Result<PsiCurve> {
    let samples = curve_samples(config, n)?;
    let table = psi_table(config, samples.as_ref(), n, GridMode::Symmetric)?;
    let window = config.psi_sup_window.unwrap_or(f64::INFINITY);
    let mut sup_error: f64 = 0.0;
    let rows = table
        .points()
        .zip(&table.values)
        .map(|(s, hat)| {
            let truth = config.model.psi(s)?;
            if s.im.abs() <= window + 1e-12 {
                sup_error = sup_error.max((hat - truth).norm());
            }
            Ok(PsiCurveRow {
                v: s.im,
                re_hat: hat.re,
                im_hat: hat.im,
                abs_hat: hat.norm(),
                re_true: truth.re,
                im_true: truth.im,
                abs_true: truth.norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PsiCurve {
        n,
        u: table.grid.u,
        v_max: table.grid.v_max,
        sup_error,
        rows,
    })
}

/// Exact tilted transform `F(-v) = -psi(u + iv) + c (u + iv) + a` of the model.
pub fn exact_tilted_fourier(model: &ModelSpec, grid: &crate::grid::FrequencyGrid) -> Result<TiltedFourierTable> {
    let (c, a) = (model.drift(), model.jump_mass());
    let values = grid
        .frequencies()
        .map(|v| {
            let s = Complex64::new(grid.u, v);
            Ok(-model.psi(s)? + c * s + a)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TiltedFourierTable {
        grid: grid.clone(),
        values,
        u: grid.u,
    })
}

/// Full estimation pipeline for the Lévy density at sample size `n`. With
/// [`PsiSource::Analytic`] the exact transform and exact `(c, a)` are used.
///
/// Abscissae and density values are reported in the model's density scale.
pub fn run_levy_recovery(config: &ExperimentConfig, n: usize) -> Result<LevyCurve> {
    let samples = curve_samples(config, n)?;
    let sym = config.grid.grid(n, GridMode::Symmetric)?;
    let (fourier, c_hat, a_hat) = match &samples {
        Some(s) => {
            let triplet = fit_triplet(config, Some(s), n)?;
            let table = estimate_laplace_exponent(s, &sym)?;
            let f = estimate_tilted_fourier(&table, &triplet)?;
            (f, triplet.c_hat, triplet.a_hat)
        }
        None => (
            exact_tilted_fourier(&config.model, &sym)?,
            config.model.drift(),
            config.model.jump_mass(),
        ),
    };
    let h = config.bandwidth.unwrap_or(1.0 / sym.v_max);
    let scale = config.model.density_scale();
    let xs = config.x_points()?;
    let jumps: Vec<f64> = xs.iter().map(|x| x * scale).collect();
    let est = invert_levy_density(&fourier, &config.kernel, h, &jumps)?;
    let rows: Vec<LevyRow> = xs
        .iter()
        .enumerate()
        .map(|(k, &x)| LevyRow {
            x,
            nu_real: est.values_real[k] * scale,
            nu_imag: est.values_imag[k] * scale,
            nu_true: config.model.levy_density(x),
        })
        .collect();
    Ok(LevyCurve {
        n,
        v_max: sym.v_max,
        bandwidth: h,
        c_hat,
        a_hat,
        l2_error: l2_distance(&rows),
        rows,
    })
}

/// Trapezoidal L2 distance between the real part and the truth.
pub fn l2_distance(rows: &[LevyRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let sq: Vec<f64> = rows.iter().map(|r| (r.nu_real - r.nu_true).powi(2)).collect();
    let integral: f64 = rows
        .windows(2)
        .zip(sq.windows(2))
        .map(|(r, s)| 0.5 * (r[1].x - r[0].x) * (s[0] + s[1]))
        .sum();
    Some(integral.sqrt())
}

/// Runs every experiment listed in the config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let mut report = ExperimentReport::empty(config);
    if config.experiments.contains(&ExperimentKind::Parameters) {
        report.runs = parameter_runs(config);
        report.summaries = summarize(config, &report.runs);
    }
    if config.experiments.contains(&ExperimentKind::PsiCurve) {
        report.psi_curves = config
            .curve_sizes
            .iter()
            .map(|&n| run_psi_curve(config, n))
            .collect::<Result<_>>()?;
    }
    if config.experiments.contains(&ExperimentKind::LevyRecovery) {
        report.levy_curves = config
            .curve_sizes
            .iter()
            .map(|&n| run_levy_recovery(config, n))
            .collect::<Result<_>>()?;
    }
    add_diagnostics(config, &mut report)?;
    Ok(report)
}
