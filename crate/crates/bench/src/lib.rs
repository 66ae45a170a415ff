//! Shared inputs for the pipeline benchmarks.

use derham_core::corpus;
use derham_core::Representation;

/// Deterministic batch of random orthogonal representations, dims 2 through 6.
pub fn random_batch(count: u64) -> Vec<Representation> {
    (0..count)
        .map(|seed| corpus::random_representation(seed, 2 + (seed % 5) as usize, 3))
        .collect()
}
