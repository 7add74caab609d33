//! Seeded random vectors and matrices with complex Gaussian entries.

use faer::{Col, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, CMat, CVec};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> c64 {
    c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> CVec {
    Col::from_fn(n, |_| gaussian(rng))
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    let mut m = Mat::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

/// Real Gaussian matrix.
pub fn random_real_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    let mut m = Mat::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = c64::new(rng.sample(StandardNormal), 0.0);
        }
    }
    m
}
