//! Counter-based random substreams and the samplers built on them.
//!
//! Every random quantity in the simulator flows from
//! [`substream`]`(master_seed, trial, slot)`: a ChaCha8 stream keyed by the
//! (seed, trial, slot) counter tuple. Trials never share state, so results
//! are a pure function of `(master_seed, trials, config)` no matter how
//! trials are distributed over workers.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;
use crate::model::Point;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the independent ChaCha8 stream for `(master_seed, trial, slot)`.
pub fn substream(master_seed: u64, trial: u64, slot: u64) -> ChaCha8Rng {
    let mut state = master_seed;
    let a = splitmix64(&mut state);
    state ^= trial.wrapping_mul(0xA24B_AED4_963E_E407);
    let b = splitmix64(&mut state);
    state ^= slot.wrapping_mul(0x9FB2_1C65_1E98_DF25);
    let c = splitmix64(&mut state);
    let d = splitmix64(&mut state);

    let mut seed = [0u8; 32];
    seed[0..8].copy_from_slice(&a.to_le_bytes());
    seed[8..16].copy_from_slice(&b.to_le_bytes());
    seed[16..24].copy_from_slice(&c.to_le_bytes());
    seed[24..32].copy_from_slice(&d.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

/// Mix an auxiliary counter into a master seed (used to give each bisection
/// probe its own family of trial substreams).
pub fn derive_seed(master_seed: u64, stage: u64) -> u64 {
    let mut state = master_seed ^ stage.wrapping_mul(0xD6E8_FEB8_6659_FD93);
    splitmix64(&mut state)
}

/// Uniform draw in [0, 1) with 53 random bits.
#[inline]
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Standard exponential via inversion; never returns infinity.
#[inline]
pub fn exponential(rng: &mut impl RngCore) -> f64 {
    -math::ln_1p(-uniform(rng))
}

/// Poisson counts by chunked inversion (Knuth's product method on partial
/// means so the running product stays far from underflow). Exact for any
/// mean; cost is O(mean) uniforms, which the simulated configurations keep
/// small.
pub fn poisson(rng: &mut impl RngCore, mean: f64) -> u64 {
    debug_assert!(mean >= 0.0 && mean.is_finite());
    let mut remaining = mean;
    let mut total = 0u64;
    while remaining > 0.0 {
        let chunk = remaining.min(256.0);
        remaining -= chunk;
        let floor = math::exp(-chunk);
        let mut product = 1.0;
        loop {
            product *= uniform(rng);
            if product <= floor {
                break;
            }
            total += 1;
        }
    }
    total
}

/// Uniform point in the disk of given radius centered at the origin.
pub fn point_in_disk(rng: &mut impl RngCore, radius: f64) -> Point {
    let r = radius * math::sqrt(uniform(rng));
    let theta = 2.0 * core::f64::consts::PI * uniform(rng);
    Point {
        x: r * math::cos(theta),
        y: r * math::sin(theta),
    }
}
