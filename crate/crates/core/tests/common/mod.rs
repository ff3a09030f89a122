#![allow(dead_code)]

use std::path::PathBuf;

use degdet::gen::{generate, generate_rank_deficient, GenParams};
use degdet::instance::parse_instance;
use degdet::Instance;

pub fn fixture(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    parse_instance(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Seeded instances with `n <= max_n` and `m <= max_m`, cycling through shapes.
pub fn corpus(count: u64, max_n: usize, max_m: usize) -> impl Iterator<Item = (u64, Instance)> {
    (0..count).map(move |seed| {
        let n = 1 + (seed as usize % max_n);
        let m = 1 + (seed as usize / max_n) % max_m;
        (seed, generate(seed, &GenParams::new(n, m)).unwrap())
    })
}

pub fn rank_deficient(count: u64) -> impl Iterator<Item = (u64, Instance)> {
    (0..count).map(|seed| {
        let n = 2 + (seed as usize % 3);
        let m = n + 1 + (seed as usize / 3) % 4;
        (seed, generate_rank_deficient(1000 + seed, &GenParams::new(n, m)).unwrap())
    })
}
