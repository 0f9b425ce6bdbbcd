//! Empirical complex moments of the exponential functional and the Laplace
//! exponent estimator built from the moment recursion
//! `E[A^(s-1)] = psi(s) / s * E[A^s]`.
//!
//! Moments are accumulated as `exp(Re(s) (ln A_k - L)) * exp(i Im(s) ln A_k)`
//! with a reference log-level `L` (the largest log-sample for `Re(s) >= 0`,
//! the smallest otherwise), so every modulus is at most one. The factor
//! `exp(Re(s) L)` is carried separately and cancels in the ratio.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::sample::SampleSet;
use crate::table::{LaplaceExponentTable, TableSource};

/// Relative threshold below which a denominator moment counts as zero.
pub const DENOMINATOR_RTOL: f64 = 1e-14;

/// Largest natural logarithm representable in `f64`.
const LN_F64_MAX: f64 = 709.782_712_893_384;

/// Empirical moments `E_n[A^(u + shift + i v_m)]` over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub grid: FrequencyGrid,
    /// `0` for `s = u + i v`, `-1` for `s = (u - 1) + i v`.
    pub exponent_shift: i32,
    pub values: Vec<Complex64>,
}

/// Sample weights `exp(r (ln A_k - L))` for a fixed real exponent `r`.
struct RealPartWeights {
    weights: Vec<f64>,
    /// `r * L`: the true moment is `exp(log_scale) * mean(...)`.
    log_scale: f64,
}

impl RealPartWeights {
    fn new(logs: &[f64], r: f64) -> Self {
        let reference = if r >= 0.0 {
            logs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        } else {
            logs.iter().copied().fold(f64::INFINITY, f64::min)
        };
        Self {
            weights: logs.iter().map(|l| (r * (l - reference)).exp()).collect(),
            log_scale: r * reference,
        }
    }

    fn mean_weight(&self) -> f64 {
        self.weights.iter().sum::<f64>() / self.weights.len() as f64
    }
}

fn log_samples(samples: &SampleSet) -> Result<Vec<f64>> {
    samples.validate()?;
    Ok(samples.values.iter().map(|a| a.ln()).collect())
}

fn rescale(value: Complex64, log_scale: f64, s: Complex64) -> Result<Complex64> {
    let norm = value.norm();
    if norm == 0.0 {
        return Ok(value);
    }
    let log_magnitude = log_scale + norm.ln();
    if log_magnitude > LN_F64_MAX {
        return Err(Error::Overflow {
            re: s.re,
            im: s.im,
            log_magnitude,
        });
    }
    Ok(value * log_scale.exp())
}

/// `(1/n) sum_k A_k^s` with the principal real logarithm of `A_k`.
pub fn empirical_complex_moment(samples: &SampleSet, s: Complex64) -> Result<Complex64> {
    let logs = log_samples(samples)?;
    let w = RealPartWeights::new(&logs, s.re);
    let sum = logs
        .iter()
        .zip(&w.weights)
        .fold(Complex64::new(0.0, 0.0), |acc, (l, wk)| {
            let (sin, cos) = (s.im * l).sin_cos();
            acc + Complex64::new(wk * cos, wk * sin)
        });
    rescale(sum / logs.len() as f64, w.log_scale, s)
}

/// Empirical moments at `s = (u + shift) + i v_m` for every grid point.
pub fn moment_table(samples: &SampleSet, grid: &FrequencyGrid, exponent_shift: i32) -> Result<MomentTable> {
    if exponent_shift != 0 && exponent_shift != -1 {
        return Err(Error::InvalidParameter(format!(
            "exponent shift must be 0 or -1, got {exponent_shift}"
        )));
    }
    let logs = log_samples(samples)?;
    let r = grid.u + exponent_shift as f64;
    let w = RealPartWeights::new(&logs, r);
    let n = logs.len() as f64;
    let values = grid
        .alphas
        .par_iter()
        .map(|alpha| {
            let v = alpha * grid.v_max;
            let sum = logs
                .iter()
                .zip(&w.weights)
                .fold(Complex64::new(0.0, 0.0), |acc, (l, wk)| {
                    let (sin, cos) = (v * l).sin_cos();
                    acc + Complex64::new(wk * cos, wk * sin)
                });
            rescale(sum / n, w.log_scale, Complex64::new(r, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentTable {
        grid: grid.clone(),
        exponent_shift,
        values,
    })
}

/// Laplace exponent estimate
/// `psi_n(u + i v) = (u + i v) E_n[A^((u-1) + i v)] / E_n[A^(u + i v)]`
/// on every grid point.
///
/// Both moments are accumulated in one pass over the samples. Fails with
/// [`Error::DegenerateDenominator`] if a denominator moment drops below
/// `1e-14` times its value at `v = 0`.
pub fn estimate_laplace_exponent(
    samples: &SampleSet,
    grid: &FrequencyGrid,
) -> Result<LaplaceExponentTable> {
    samples.require_estimable()?;
    let logs = log_samples(samples)?;
    let den = RealPartWeights::new(&logs, grid.u);
    let num = RealPartWeights::new(&logs, grid.u - 1.0);
    let threshold = DENOMINATOR_RTOL * den.mean_weight();
    let ratio_scale = (num.log_scale - den.log_scale).exp();
    let n = logs.len() as f64;

    let values = grid
        .alphas
        .par_iter()
        .map(|alpha| {
            let v = alpha * grid.v_max;
            let mut num_sum = Complex64::new(0.0, 0.0);
            let mut den_sum = Complex64::new(0.0, 0.0);
            for ((l, wn), wd) in logs.iter().zip(&num.weights).zip(&den.weights) {
                let (sin, cos) = (v * l).sin_cos();
                num_sum += Complex64::new(wn * cos, wn * sin);
                den_sum += Complex64::new(wd * cos, wd * sin);
            }
            let den_mean = den_sum / n;
            let modulus = den_mean.norm();
            if !(modulus >= threshold) {
                return Err(Error::DegenerateDenominator {
                    v,
                    modulus,
                    threshold,
                });
            }
            let s = Complex64::new(grid.u, v);
            Ok(s * (num_sum / n) / den_mean * ratio_scale)
        })
        .collect::<Result<Vec<_>>>()?;

    LaplaceExponentTable::new(grid.clone(), values, TableSource::Empirical)
}

/// `|m(s) - psi(s) / s * m(s + 1)|` for a Mellin transform `m(s) = E[A^(s-1)]`
/// and a Laplace exponent `psi`. Vanishes in exact arithmetic.
pub fn moment_identity_residual(
    mellin: impl Fn(Complex64) -> Complex64,
    psi: impl Fn(Complex64) -> Complex64,
    s: Complex64,
) -> f64 {
    (mellin(s) - psi(s) / s * mellin(s + 1.0)).norm()
}
