//! Shared fixtures for the benchmarks.

use citewin_core::{preset, Corpus, PresetName};

/// Deterministic pseudo-random citation counts with a heavy tail.
pub fn skewed_counts(n: usize) -> Vec<u64> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let u = (state >> 11) as f64 / (1u64 << 53) as f64;
            (1.0 / (1.0 - u).max(1e-9)).powf(0.8) as u64
        })
        .collect()
}

/// The fast preset scaled down by `divisor`.
pub fn preset_corpus(divisor: u64) -> Corpus {
    let config = preset(PresetName::FastPhysicsLike, divisor).expect("preset");
    citewin_core::generate_corpus(&config).expect("generate")
}
