//! Seeded random streams.
//!
//! Every stochastic routine derives its generator from a user seed plus a
//! stable index (chain number, iteration number, matrix cell), so results
//! are reproducible and independent of thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::beta::BetaParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub type StreamRng = ChaCha8Rng;

/// Generator for stream `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Packs two indices into one stream id.
pub fn pair_index(i: usize, j: usize) -> u64 {
    ((i as u64) << 32) | (j as u64 & 0xffff_ffff)
}

/// One draw from Beta(a, b).
pub fn beta_draw<T: Real, R: rand::Rng + ?Sized>(rng: &mut R, params: &BetaParams<T>) -> Result<T> {
    let dist = rand_distr::Beta::new(params.a.f64(), params.b.f64())
        .map_err(|e| Error::Domain(format!("cannot sample Beta({}, {}): {e}", params.a, params.b)))?;
    Ok(T::lit(rng.sample(dist)))
}
