//! Synthetic inputs for the benchmarks.

use journet_core::BipartiteIncidence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random journal × entity incidence where each journal draws every entity
/// independently with probability `p`.
pub fn random_incidence(journals: usize, entities: usize, p: f64, seed: u64) -> BipartiteIncidence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for j in 0..journals {
        pairs.push((format!("J{j}"), None));
        for e in 0..entities {
            if rng.gen_bool(p) {
                pairs.push((format!("J{j}"), Some(format!("e{e}"))));
            }
        }
    }
    BipartiteIncidence::from_pairs(pairs)
}
