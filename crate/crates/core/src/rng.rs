//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit [`Rng`]. The generator is
//! xoshiro256++ seeded through SplitMix64 (`seed_from_u64`), which produces the
//! same stream on every platform.

use rand::SeedableRng;

pub type Rng = rand_xoshiro::Xoshiro256PlusPlus;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Seed for a sub-stream identified by `role`.
pub fn derive_seed(base: u64, role: u64) -> u64 {
    base.wrapping_add(role)
}

/// Role tags added to the base seed for each stochastic stage.
pub mod role {
    pub const NSGA2: u64 = 0;
    pub const RNSGA2: u64 = 1;
    pub const BEST_RESPONSE_1: u64 = 2;
    pub const BEST_RESPONSE_2: u64 = 3;
    pub const NASH: u64 = 4;
    pub const SCATTER: u64 = 5;
}
