//! Subordinator with drift `c` and exponential jumps, `nu(x) = a b exp(-b x)` on `x > 0`.
//!
//! The exponential functional has a closed-form law: `Beta(b + 1, a / c) / c`
//! when `c > 0` and `Gamma(b + 1, rate a)` when `c = 0`. Both Mellin
//! transforms are Gamma-function ratios.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma};
use serde::{Deserialize, Serialize};

use super::special::ln_gamma;
use super::seeded_rng;
use crate::error::{Error, Result};
use crate::sample::SampleSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpJumpSubordinator {
    /// Drift.
    pub c: f64,
    /// Total jump mass `nu(R_+)`.
    pub a: f64,
    /// Rate of the exponential jump distribution.
    pub b: f64,
}

impl ExpJumpSubordinator {
    pub fn new(c: f64, a: f64, b: f64) -> Result<Self> {
        let model = Self { c, a, b };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("c must be >= 0, got {}", self.c)));
        }
        if !(self.a > 0.0 && self.a.is_finite()) || !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "a and b must be positive, got a = {}, b = {}",
                self.a, self.b
            )));
        }
        Ok(())
    }

    /// Laplace exponent `psi(z) = z (c + a / (b + z))`.
    pub fn psi(&self, z: Complex64) -> Result<Complex64> {
        let denom = self.b + z;
        if denom == Complex64::new(0.0, 0.0) {
            return Err(Error::PoleAtMinusB);
        }
        Ok(z * (self.c + self.a / denom))
    }

    pub fn levy_density(&self, x: f64) -> f64 {
        if x > 0.0 {
            self.a * self.b * (-self.b * x).exp()
        } else {
            0.0
        }
    }

    /// `F(-v) = int exp(-i v x) exp(-u x) nu(x) dx = a b / (b + u + i v)`.
    pub fn tilted_fourier(&self, u: f64, v: f64) -> Complex64 {
        self.a * self.b / Complex64::new(self.b + u, v)
    }

    /// Mellin transform `m(s) = E[A^(s-1)]` of the stationary law.
    pub fn mellin(&self, s: Complex64) -> Complex64 {
        let p = self.b + 1.0;
        if self.c > 0.0 {
            // A = B / c, B ~ Beta(p, q)
            let q = self.a / self.c;
            let log_m = ln_gamma(p + s - 1.0) + ln_gamma(Complex64::new(p + q, 0.0))
                - ln_gamma(Complex64::new(p, 0.0))
                - ln_gamma(p + q + s - 1.0)
                - (s - 1.0) * self.c.ln();
            log_m.exp()
        } else {
            // A ~ Gamma(p, rate a)
            let log_m = ln_gamma(p + s - 1.0)
                - ln_gamma(Complex64::new(p, 0.0))
                - (s - 1.0) * self.a.ln();
            log_m.exp()
        }
    }

    /// Mean of the stationary law, `1 / psi(1)`.
    pub fn mean(&self) -> f64 {
        1.0 / (self.c + self.a / (self.b + 1.0))
    }

    /// Upper end of the support of `A` (infinite when `c = 0`).
    pub fn support_upper(&self) -> f64 {
        if self.c > 0.0 {
            1.0 / self.c
        } else {
            f64::INFINITY
        }
    }

    /// Draws `n` i.i.d. observations from the stationary law.
    pub fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.validate()?;
        let shape = self.b + 1.0;
        let bad = |e: &dyn std::fmt::Display| Error::InvalidParameter(e.to_string());
        let mut out = Vec::with_capacity(n);
        if self.c > 0.0 {
            let beta = Beta::new(shape, self.a / self.c).map_err(|e| bad(&e))?;
            for _ in 0..n {
                let mut x = beta.sample(rng) / self.c;
                // a Beta draw can round to exactly 0 for tiny shape parameters
                while x <= 0.0 {
                    x = beta.sample(rng) / self.c;
                }
                out.push(x);
            }
        } else {
            let gamma = Gamma::new(shape, 1.0 / self.a).map_err(|e| bad(&e))?;
            for _ in 0..n {
                out.push(gamma.sample(rng));
            }
        }
        Ok(out)
    }
}

/// Laplace exponent of the exponential-jump subordinator.
pub fn psi_example1(z: Complex64, model: &ExpJumpSubordinator) -> Result<Complex64> {
    model.psi(z)
}

/// Seeded i.i.d. sample of the exponential functional.
pub fn sample_example1(model: &ExpJumpSubordinator, n: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let values = model.draw(n, &mut rng)?;
    SampleSet::new(
        values,
        format!("exp-jump c={} a={} b={}", model.c, model.a, model.b),
        Some(seed),
    )
}
