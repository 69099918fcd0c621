//! Seeded random streams.
//!
//! Every experiment derives its generators from a single `u64` seed with
//! [`stream`]: the seed keys a ChaCha8 generator and the stream id selects one
//! of its 2^64 independent substreams. A draw, cell or replication `i` always
//! uses `stream(seed, tag | i)`, so results do not depend on thread count or
//! scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream id namespaces, kept in the high bits so per-item indices never collide.
pub mod tag {
    pub const AD_PRICE: u64 = 1 << 56;
    pub const WIFI_PRICE: u64 = 2 << 56;
    pub const SHARING: u64 = 3 << 56;
    pub const ZETA: u64 = 4 << 56;
    pub const SIMULATION: u64 = 5 << 56;
    pub const UNIFORM: u64 = 6 << 56;
    pub const INVARIANTS: u64 = 7 << 56;
    pub const WELFARE: u64 = 8 << 56;
}

/// Generator for substream `id` of `seed`.
pub fn stream(seed: u64, id: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}
