#![allow(dead_code)]

use homvar::sample::Shape;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn shape(dim: usize, max_order: u32) -> Shape {
    Shape {
        dim,
        max_order,
        max_degree: 3,
        max_terms: 4,
        coefficient_bound: 3,
    }
}

/// Cycles through `N = 1..=3` so that every sample size covers each dimension.
pub fn cycling_shape(step: usize, max_order: u32) -> Shape {
    shape(step % 3 + 1, max_order)
}
