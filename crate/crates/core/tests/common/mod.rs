#![allow(dead_code)]

use num_complex::Complex64;
use probe_grover::{MarkedSet, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_state(k: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<Complex64> = (0..1usize << k)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap()
}

pub fn random_marked(k: usize, seed: u64) -> MarkedSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5);
    let dim = 1usize << k;
    let count = rng.gen_range(0..=dim.min(4));
    (0..count).map(|_| rng.gen_range(0..dim)).collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
