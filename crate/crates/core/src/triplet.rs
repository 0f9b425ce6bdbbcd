//! Recovery of the drift `c`, the total jump mass `a` and the Lévy density
//! from a table of Laplace exponent values.
//!
//! With `psi(u + i v) = a + c (u + i v) - F(-v)`, where `F` is the Fourier
//! transform of the tilted measure `exp(-u x) nu(dx)`, the imaginary parts
//! are linear in `v` with slope `c` and the real parts are constant `a + c u`
//! up to `F`, which vanishes for large `|v|`. The weighted least-squares
//! fits over `v = alpha_m * V` have closed forms.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, GridMode, WeightFunction};
use crate::table::LaplaceExponentTable;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripletEstimate {
    pub c_hat: f64,
    pub a_hat: f64,
    pub grid: FrequencyGrid,
    pub weights: WeightFunction,
}

/// Estimated `F(-v_m)` of the tilted measure on a symmetric grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TiltedFourierTable {
    pub grid: FrequencyGrid,
    pub values: Vec<Complex64>,
    pub u: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    FlatTop,
}

/// Flat-top regularising kernel: one on `|x| <= flat_radius`, zero on
/// `|x| >= support_radius`, smooth in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub flat_radius: f64,
    pub support_radius: f64,
}

impl Default for KernelSpec {
    fn default() -> Self {
        Self {
            kind: KernelKind::FlatTop,
            flat_radius: 0.05,
            support_radius: 1.0,
        }
    }
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.support_radius > 0.0 && self.flat_radius >= 0.0)
            || self.flat_radius >= self.support_radius
        {
            return Err(Error::InvalidParameter(format!(
                "kernel needs 0 <= flat_radius < support_radius, got {} and {}",
                self.flat_radius, self.support_radius
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        match self.kind {
            KernelKind::FlatTop => {
                let y = x.abs() / self.support_radius;
                let flat = self.flat_radius / self.support_radius;
                if y <= flat {
                    1.0
                } else if y >= 1.0 {
                    0.0
                } else {
                    (-(-1.0 / (y - flat)).exp() / (1.0 - y)).exp()
                }
            }
        }
    }
}

/// The flat-top kernel with flat part `|x| <= 0.05` and support `[-1, 1]`.
pub fn flat_top_kernel(x: f64) -> f64 {
    KernelSpec::default().evaluate(x)
}

/// Real and imaginary parts of the regularised inverse Fourier transform
/// evaluated on `x_grid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyDensityEstimate {
    pub x_grid: Vec<f64>,
    pub values_real: Vec<f64>,
    pub values_imag: Vec<f64>,
    pub bandwidth: f64,
    pub u: f64,
    /// `h * V`; below one the kernel is cut off by the frequency window
    /// before it tapers to zero.
    pub bandwidth_times_v_max: f64,
}

impl LevyDensityEstimate {
    /// Copy with negative real values replaced by zero.
    pub fn clipped(&self) -> Self {
        let mut out = self.clone();
        for v in &mut out.values_real {
            *v = v.max(0.0);
        }
        out
    }
}

fn check_weights(table: &LaplaceExponentTable, weights: &WeightFunction) -> Result<()> {
    if weights.values.len() != table.values.len() {
        return Err(Error::InvalidParameter(format!(
            "{} weights for {} table entries",
            weights.values.len(),
            table.values.len()
        )));
    }
    if table.grid.mode != GridMode::OneSided {
        return Err(Error::InvalidGrid(
            "drift and jump mass are fitted on one-sided grids".into(),
        ));
    }
    Ok(())
}

/// `c_hat = sum w_m alpha_m Im psi_m / (V sum w_m alpha_m^2)`.
pub fn estimate_drift(table: &LaplaceExponentTable, weights: &WeightFunction) -> Result<f64> {
    check_weights(table, weights)?;
    let grid = &table.grid;
    let (num, den) = grid
        .alphas
        .iter()
        .zip(&weights.values)
        .zip(&table.values)
        .fold((0.0, 0.0), |(num, den), ((alpha, w), psi)| {
            (num + w * alpha * psi.im, den + w * alpha * alpha)
        });
    if den == 0.0 {
        return Err(Error::ZeroDenominator("drift estimate"));
    }
    Ok(num / (grid.v_max * den))
}

/// `a_hat = sum w_m Re psi_m / sum w_m - c_hat u`.
pub fn estimate_jump_mass(
    table: &LaplaceExponentTable,
    weights: &WeightFunction,
    c_hat: f64,
) -> Result<f64> {
    check_weights(table, weights)?;
    let (num, den) = weights
        .values
        .iter()
        .zip(&table.values)
        .fold((0.0, 0.0), |(num, den), (w, psi)| (num + w * psi.re, den + w));
    if den == 0.0 {
        return Err(Error::ZeroDenominator("jump mass estimate"));
    }
    Ok(num / den - c_hat * table.grid.u)
}

/// Drift first, then jump mass using the fitted drift.
pub fn estimate_triplet(
    table: &LaplaceExponentTable,
    weights: &WeightFunction,
) -> Result<TripletEstimate> {
    let c_hat = estimate_drift(table, weights)?;
    let a_hat = estimate_jump_mass(table, weights, c_hat)?;
    Ok(TripletEstimate {
        c_hat,
        a_hat,
        grid: table.grid.clone(),
        weights: weights.clone(),
    })
}

/// `F(-v_m) = -psi(u + i v_m) + c_hat (u + i v_m) + a_hat` on a symmetric grid.
pub fn estimate_tilted_fourier(
    table: &LaplaceExponentTable,
    triplet: &TripletEstimate,
) -> Result<TiltedFourierTable> {
    if table.grid.mode != GridMode::Symmetric {
        return Err(Error::InvalidGrid(
            "the tilted Fourier transform is estimated on symmetric grids".into(),
        ));
    }
    let values = table
        .points()
        .zip(&table.values)
        .map(|(s, psi)| -psi + triplet.c_hat * s + triplet.a_hat)
        .collect();
    Ok(TiltedFourierTable {
        grid: table.grid.clone(),
        values,
        u: table.grid.u,
    })
}

/// Regularised Fourier inversion
/// `nu(x) = exp(u x) * step / (2 pi) * sum_m exp(i v_m x) F(-v_m) K(v_m h)`.
///
/// Negative `x` is accepted for two-sided measures. Logs a warning when
/// `h * V < 1`.
pub fn invert_levy_density(
    fourier: &TiltedFourierTable,
    kernel: &KernelSpec,
    h: f64,
    x_grid: &[f64],
) -> Result<LevyDensityEstimate> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("bandwidth must be positive, got {h}")));
    }
    kernel.validate()?;
    if fourier.values.len() != fourier.grid.len() {
        return Err(Error::InvalidParameter("Fourier table does not match its grid".into()));
    }
    if x_grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("x grid must be finite".into()));
    }
    let grid = &fourier.grid;
    let hv = h * grid.v_max;
    if hv < 1.0 {
        warn!(
            "bandwidth times v_max is {hv:.3} < 1: the kernel is truncated by the frequency \
             window and does not regularise the inversion"
        );
    }

    // frequency, kernel-weighted transform
    let terms: Vec<(f64, Complex64)> = grid
        .frequencies()
        .zip(&fourier.values)
        .map(|(v, f)| (v, f * kernel.evaluate(v * h)))
        .collect();
    let scale = grid.step / (2.0 * PI);

    let (values_real, values_imag): (Vec<f64>, Vec<f64>) = x_grid
        .par_iter()
        .map(|&x| {
            let sum = terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (v, fk)| {
                let (sin, cos) = (v * x).sin_cos();
                acc + Complex64::new(cos, sin) * fk
            });
            let value = sum * (scale * (fourier.u * x).exp());
            (value.re, value.im)
        })
        .unzip();

    Ok(LevyDensityEstimate {
        x_grid: x_grid.to_vec(),
        values_real,
        values_imag,
        bandwidth: h,
        u: fourier.u,
        bandwidth_times_v_max: hv,
    })
}
