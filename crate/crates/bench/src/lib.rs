//! Shared fixtures for the criterion benches.

use stackmst::instance::{rat, Rat, StackInstance};
use stackmst::generators;

pub fn random_instance(seed: u64) -> StackInstance {
    let pool: Vec<Rat> = vec![rat(1, 1), rat(2, 1), rat(5, 2)];
    generators::gen_random(7, 3, 8, &pool, seed).expect("valid parameters")
}
