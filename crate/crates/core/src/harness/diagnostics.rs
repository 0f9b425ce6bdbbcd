//! Convergence-rate and assumption diagnostics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::check_probe;
use crate::error::{Error, Result};
use crate::grid::{select_v_max, RateParameters};
use crate::mellin::empirical_complex_moment;
use crate::sample::SampleSet;

/// Fitted decay rates at or below this value are reported as non-decaying.
pub const MIN_DECAY_RATE: f64 = 0.1;

/// Moments smaller than this many Monte Carlo standard errors are left out of the fit.
const NOISE_FLOOR_SE: f64 = 3.0;

/// `Lambda_n = V_n exp(gamma V_n) sqrt(ln V_n)` and the error scale
/// `Lambda_n sqrt(ln n / n)` that has to vanish for consistency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateDiagnostic {
    pub n: usize,
    pub v_max: f64,
    pub lambda_n: f64,
    pub scaled: f64,
}

pub fn lambda_n(n: usize, rates: &RateParameters) -> Result<RateDiagnostic> {
    let v = select_v_max(n, rates)?;
    if v <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "Lambda_n needs V_n > 1, got {v} at n = {n}"
        )));
    }
    let lambda = v * (rates.gamma * v).exp() * v.ln().sqrt();
    let nf = n as f64;
    Ok(RateDiagnostic {
        n,
        v_max: v,
        lambda_n: lambda,
        scaled: lambda * (nf.ln() / nf).sqrt(),
    })
}

/// Least-squares fit `-ln |E_n[A^(u + i v)]| = gamma |v| + p ln |v| + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub gamma_hat: f64,
    /// Coefficient of `ln |v|`, i.e. minus the polynomial decay order.
    pub power: f64,
    pub intercept: f64,
    /// Probe frequencies whose moment cleared the noise floor.
    pub points_used: usize,
}

/// Fits the exponential decay rate of the empirical Mellin transform along
/// `u + i v`, `v` in `v_probe`. A polynomial term is fitted alongside, so a
/// transform that decays only like a power of `|v|` yields a rate near zero
/// and is reported as [`Error::NonDecayingMoments`].
pub fn fit_mellin_decay(samples: &SampleSet, u: f64, v_probe: &[f64]) -> Result<f64> {
    fit_mellin_decay_with(samples, u, v_probe, MIN_DECAY_RATE).map(|f| f.gamma_hat)
}

pub fn fit_mellin_decay_with(
    samples: &SampleSet,
    u: f64,
    v_probe: &[f64],
    min_rate: f64,
) -> Result<DecayFit> {
    check_probe(v_probe)?;
    samples.require_estimable()?;
    // |A^(u + iv)| = A^u, so E[A^(2u)] bounds the variance of every moment
    let second = empirical_complex_moment(samples, Complex64::new(2.0 * u, 0.0))?.re;
    let floor = NOISE_FLOOR_SE * (second / samples.len() as f64).sqrt();

    let mut rows = Vec::new();
    for &v in v_probe {
        let m = empirical_complex_moment(samples, Complex64::new(u, v))?.norm();
        if m > floor {
            rows.push(([v, v.ln(), 1.0], -m.ln()));
        }
    }
    if rows.len() < 4 {
        return Err(Error::InvalidSamples(format!(
            "only {} probe frequencies rise above the noise floor {floor:.3e}; \
             probe lower frequencies or use more samples",
            rows.len()
        )));
    }
    let [gamma_hat, power, intercept] = least_squares(&rows)?;
    if !(gamma_hat > min_rate) {
        return Err(Error::NonDecayingMoments { rate: gamma_hat });
    }
    Ok(DecayFit {
        gamma_hat,
        power,
        intercept,
        points_used: rows.len(),
    })
}

/// Solves the 3x3 normal equations by Gaussian elimination with pivoting.
fn least_squares(rows: &[([f64; 3], f64)]) -> Result<[f64; 3]> {
    let mut a = [[0.0; 4]; 3];
    for (x, y) in rows {
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += x[i] * x[j];
            }
            a[i][3] += x[i] * y;
        }
    }
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        a.swap(col, pivot);
        if a[col][col].abs() < 1e-12 * a[col].iter().map(|x| x.abs()).fold(0.0, f64::max) {
            return Err(Error::InvalidParameter(
                "decay fit is singular; spread the probe frequencies".into(),
            ));
        }
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let tail: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (a[i][3] - tail) / a[i][i];
    }
    Ok(x)
}
