//! Nonparametric estimation of the Lévy triplet of a subordinator from
//! i.i.d. observations of its exponential functional
//! `A = int_0^inf exp(-xi_t) dt`.
//!
//! The pipeline runs in three steps:
//!
//! 1. [`estimate_laplace_exponent`] turns samples into a table of
//!    `psi_n(u + i v)` through the moment recursion `E[A^(s-1)] = psi(s)/s E[A^s]`;
//! 2. [`estimate_triplet`] fits drift `c` and jump mass `a` by weighted least squares;
//! 3. [`estimate_tilted_fourier`] and [`invert_levy_density`] recover the Lévy
//!    density through a flat-top regularised Fourier inversion.
//!
//! [`models`] holds the two reference subordinators with exact samplers and
//! [`harness`] runs seeded Monte Carlo experiments on top of them.

mod error;
mod grid;
pub mod harness;
mod mellin;
pub mod models;
mod sample;
mod table;
mod triplet;

pub use error::{Error, Result};
pub use grid::{
    build_grid, select_v_max, FrequencyGrid, GridMode, RateParameters, WeightFunction, WeightKind,
    DEFAULT_EPSILON, DEFAULT_GRID_POINTS,
};
pub use mellin::{
    empirical_complex_moment, estimate_laplace_exponent, moment_identity_residual, moment_table,
    MomentTable, DENOMINATOR_RTOL,
};
pub use num_complex::Complex64;
pub use sample::{SampleSet, SAMPLE_HEADER};
pub use table::{LaplaceExponentTable, TableSource};
pub use triplet::{
    estimate_drift, estimate_jump_mass, estimate_tilted_fourier, estimate_triplet,
    flat_top_kernel, invert_levy_density, KernelKind, KernelSpec, LevyDensityEstimate,
    TiltedFourierTable, TripletEstimate,
};
