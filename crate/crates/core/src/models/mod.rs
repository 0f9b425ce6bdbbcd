//! Ground-truth models with exact samplers for the exponential functional,
//! closed-form Laplace exponents and Lévy densities.

mod exp_jump;
mod geometric;
pub mod special;

pub use exp_jump::{psi_example1, sample_example1, ExpJumpSubordinator};
pub use geometric::{
    levy_density_example2, psi_example2, sample_example2, GeometricCompoundPoisson,
    DEFAULT_SERIES_TOL, SERIES_TERM_CAP,
};
pub use special::complex_erf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used by every sampler in the crate.
pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for stream `stream` of a master seed.
///
/// Streams of one master seed share the ChaCha key and differ in the
/// stream (nonce) word, so they never overlap.
pub fn stream_rng(master_seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
