//! Seeded randomness. Every randomized operation takes a `u64` seed and
//! derives per-trial sub-seeds from it, so runs are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{rat, Rational};

pub type SeedRng = ChaCha8Rng;

/// Integer entries of sampled subspaces and forms are drawn from [−BOX, BOX].
pub const SAMPLE_BOX: i64 = 1_000_000;

pub fn rng_from_seed(seed: u64) -> SeedRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// splitmix64 step: decorrelated sub-seed for trial `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_entry<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-SAMPLE_BOX..=SAMPLE_BOX))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| random_entry(rng)).collect()
}
