//! Compound Poisson subordinator `xi_t = -ln(q) * (eta_1 + ... + eta_{N_t})` with
//! jump sizes `eta` drawn from a standard normal truncated to `(alpha, inf)`.
//!
//! Sign convention: with `0 < q < 1` and `eta > alpha > 0`, every jump of
//! `xi` equals `beta * eta` with `beta = -ln q > 0`, so `xi` is a subordinator
//! and `A = int exp(-xi_t) dt = sum_k q^(S_k) (T_{k+1} - T_k)` has geometrically
//! decaying weights. The Laplace exponent is
//!
//! ```text
//! psi(s) = lambda * (1 - E[exp(-s beta eta)])
//!        = lambda * (1 - (1 - Phi(alpha + beta s)) / (1 - Phi(alpha)) * exp(beta^2 s^2 / 2))
//! ```
//!
//! The Lévy density that the pipeline reports is expressed in the `eta`
//! scale, `lambda * phi(x) / (1 - Phi(alpha))` on `x > alpha`; the density of
//! the jumps of `xi` itself is that function rescaled by `beta`
//! (see [`GeometricCompoundPoisson::jump_scale`]).

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Exp1, StandardUniform};
use serde::{Deserialize, Serialize};

use super::seeded_rng;
use super::special::{faddeeva, normal_pdf, normal_sf, ERF_IM_LIMIT};
use crate::error::{Error, Result};
use crate::sample::SampleSet;

/// Default relative truncation tolerance of the series representation.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
/// Hard cap on the number of series terms per draw.
pub const SERIES_TERM_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricCompoundPoisson {
    pub q: f64,
    /// Intensity of the Poisson process.
    pub lambda: f64,
    /// Truncation point of the normal jump law.
    pub alpha: f64,
}

impl GeometricCompoundPoisson {
    pub fn new(q: f64, lambda: f64, alpha: f64) -> Result<Self> {
        let model = Self { q, lambda, alpha };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::InvalidParameter(format!("q must lie in (0, 1), got {}", self.q)));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !self.alpha.is_finite() {
            return Err(Error::InvalidParameter("alpha must be finite".into()));
        }
        Ok(())
    }

    /// `beta = -ln q`, the factor mapping `eta` to the jumps of `xi`.
    pub fn jump_scale(&self) -> f64 {
        -self.q.ln()
    }

    /// Laplace exponent of `xi`.
    pub fn psi(&self, s: Complex64) -> Result<Complex64> {
        let beta = self.jump_scale();
        let z = self.alpha + beta * s;
        if !(z.im.abs() <= ERF_IM_LIMIT) || !z.re.is_finite() {
            return Err(Error::AccuracyRegionExceeded {
                re: z.re,
                im: z.im,
                limit: ERF_IM_LIMIT,
            });
        }
        // (1 - Phi(z)) exp(beta^2 s^2 / 2) = w(i z / sqrt 2) exp(-alpha^2 / 2 - alpha beta s) / 2
        let w = faddeeva(Complex64::i() * z * FRAC_1_SQRT_2);
        let tail = 0.5 * w * (-0.5 * self.alpha * self.alpha - self.alpha * beta * s).exp();
        Ok(self.lambda * (1.0 - tail / normal_sf(self.alpha)))
    }

    /// Lévy density in the `eta` scale: `lambda phi(x) / (1 - Phi(alpha))` for `x > alpha`.
    pub fn levy_density(&self, x: f64) -> f64 {
        if x > self.alpha {
            self.lambda * normal_pdf(x) / normal_sf(self.alpha)
        } else {
            0.0
        }
    }

    /// Lévy density of the jumps of `xi`, i.e. of `beta * eta`.
    pub fn levy_density_of_xi(&self, y: f64) -> f64 {
        let beta = self.jump_scale();
        self.levy_density(y / beta) / beta
    }

    /// `F(-v)` of the tilted measure `exp(-u y) nu_xi(dy)`; equals `lambda - psi(u + i v)`.
    pub fn tilted_fourier(&self, u: f64, v: f64) -> Result<Complex64> {
        Ok(self.lambda - self.psi(Complex64::new(u, v))?)
    }

    /// `E[A] = 1 / psi(1)`.
    pub fn mean(&self) -> Result<f64> {
        Ok(1.0 / self.psi(Complex64::new(1.0, 0.0))?.re)
    }

    /// Draws `n` observations of `A` by summing the series until the
    /// remaining expected mass falls below `tol` times the partial sum.
    ///
    /// Every draw runs on its own generator seeded from `rng`, so a draw does
    /// not depend on how many terms earlier draws consumed.
    pub fn draw<R: Rng + ?Sized>(&self, n: usize, tol: f64, rng: &mut R) -> Result<Vec<f64>> {
        self.validate()?;
        if !(self.alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "series sampling needs alpha > 0, got {}",
                self.alpha
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
        }
        let beta = self.jump_scale();
        let inter_arrival =
            Exp::new(self.lambda).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        // every later weight is at most q^alpha times the previous one
        let tail_factor = 1.0 / (self.lambda * (1.0 - self.q.powf(self.alpha)));

        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut draw_rng = ChaCha8Rng::seed_from_u64(rng.next_u64());
            let mut log_weight = 0.0_f64;
            let mut sum = 0.0;
            let mut terms = 0;
            loop {
                sum += log_weight.exp() * inter_arrival.sample(&mut draw_rng);
                terms += 1;
                log_weight -= beta * truncated_normal(self.alpha, &mut draw_rng);
                if log_weight.exp() * tail_factor < tol * sum {
                    break;
                }
                if terms >= SERIES_TERM_CAP {
                    return Err(Error::TruncationCapReached {
                        cap: SERIES_TERM_CAP,
                    });
                }
            }
            out.push(sum);
        }
        Ok(out)
    }
}

/// Standard normal conditioned on `(lower, inf)`, `lower >= 0`, by
/// exponential rejection sampling with the optimal rate.
fn truncated_normal<R: Rng + ?Sized>(lower: f64, rng: &mut R) -> f64 {
    let rate = 0.5 * (lower + (lower * lower + 4.0).sqrt());
    loop {
        let e: f64 = Exp1.sample(rng);
        let z = lower + e / rate;
        let u: f64 = StandardUniform.sample(rng);
        if u <= (-0.5 * (z - rate) * (z - rate)).exp() {
            return z;
        }
    }
}

/// Laplace exponent of the compound Poisson model.
pub fn psi_example2(s: Complex64, model: &GeometricCompoundPoisson) -> Result<Complex64> {
    model.psi(s)
}

/// Lévy density of the compound Poisson model in the `eta` scale.
pub fn levy_density_example2(x: f64, model: &GeometricCompoundPoisson) -> f64 {
    model.levy_density(x)
}

/// Seeded i.i.d. sample of the exponential functional via its series representation.
pub fn sample_example2(
    model: &GeometricCompoundPoisson,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let values = model.draw(n, tol, &mut rng)?;
    SampleSet::new(
        values,
        format!(
            "geometric-cp q={} lambda={} alpha={}",
            model.q, model.lambda, model.alpha
        ),
        Some(seed),
    )
}
