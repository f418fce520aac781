//! Shared fixtures for the criterion benchmarks.

use fleetmatch_core::matchmaking::{self, QueryVector};
use fleetmatch_core::paillier::{self, KeyPair};
use fleetmatch_core::{InterestSet, World};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Key sizes swept by the scaling benchmarks.
pub const KEY_BITS: [u32; 4] = [128, 256, 512, 1024];

/// Everything needed to time one exchange at a fixed key size.
pub struct Fixture {
    pub keys: KeyPair,
    pub world: World,
    pub interests: InterestSet,
    pub query: QueryVector,
}

/// Deterministic generator for benchmark inputs.
pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Keys of `bits`, a one-road world of `slots` windows and a responder
/// interested in every sixth window.
pub fn fixture(bits: u32, slots: usize) -> Fixture {
    let mut rng = rng(u64::from(bits));
    let keys = paillier::generate_keys(bits, &mut rng).expect("key generation");
    let world = World::new(1, slots).expect("non-empty world");
    let interests =
        InterestSet::new(world, (1..=slots).step_by(6)).expect("indices within the world");
    let query = matchmaking::submit_query(&keys.public, world, 1, &mut rng).expect("query");
    Fixture {
        keys,
        world,
        interests,
        query,
    }
}
