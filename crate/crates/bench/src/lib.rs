//! Fixtures shared by the pipeline benchmarks.

use levy_expfun::models::{sample_example1, ExpJumpSubordinator};
use levy_expfun::{build_grid, FrequencyGrid, GridMode, SampleSet};

pub const SEED: u64 = 17;

/// Example-1 samples with c = 1.8, a = 0.7, b = 0.2.
pub fn exp_jump_samples(n: usize) -> SampleSet {
    let model = ExpJumpSubordinator::new(1.8, 0.7, 0.2).expect("valid model");
    sample_example1(&model, n, SEED).expect("sampling succeeds")
}

pub fn grid(mode: GridMode, points: usize) -> FrequencyGrid {
    build_grid(30.0, 0.1, 30.0, points, mode).expect("valid grid")
}
