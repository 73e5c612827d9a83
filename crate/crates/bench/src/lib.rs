//! Fixtures shared by the criterion benchmarks.

use minksym_core::star2d::generators::{gen_random_spiky, gen_random_star};
use minksym_core::StarBody2D;

pub const M: usize = 720;

/// A smooth random star and a random 12-spike star, both on the default grid.
pub fn fixture_pair(seed: u64) -> (StarBody2D, StarBody2D) {
    let a = gen_random_star(seed, M, 0.2, 1.0).expect("valid bounds");
    let b = gen_random_spiky(seed + 1, M, 12, (0.1, 0.3), (0.6, 1.0)).expect("valid bounds");
    (a, b)
}
