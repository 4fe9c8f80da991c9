//! Seeded sample generators.
//!
//! All randomness goes through [`rng_from_seed`], a ChaCha8 stream, so a
//! given seed produces the same samples on every platform.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMat;

pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: independent `N(0, 1/2)` real and imaginary parts.
pub fn gaussian(rng: &mut SampleRng) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

pub fn gaussian_vec(rng: &mut SampleRng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| gaussian(rng)).collect()
}

pub fn gaussian_matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> CMat {
    CMat::from_vec(rows, cols, gaussian_vec(rng, rows * cols))
}

/// Gaussian integers with parts in `-bound..=bound`.
pub fn integer_vec(rng: &mut SampleRng, len: usize, bound: i32) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let re = rng.random_range(-bound..=bound) as f64;
            let im = rng.random_range(-bound..=bound) as f64;
            Complex64::new(re, im)
        })
        .collect()
}

pub fn integer_matrix(rng: &mut SampleRng, rows: usize, cols: usize, bound: i32) -> CMat {
    CMat::from_vec(rows, cols, integer_vec(rng, rows * cols, bound))
}

pub fn permutation_matrix(rng: &mut SampleRng, d: usize) -> CMat {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    CMat::from_fn(d, d, |i, j| {
        if perm[i] == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn rank_one_matrix(rng: &mut SampleRng, d: usize) -> CMat {
    let u = gaussian_vec(rng, d);
    let v = gaussian_vec(rng, d);
    CMat::from_fn(d, d, |i, j| u[i] * v[j].conj())
}

/// The kind of structured sample drawn at a given position of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    Gaussian,
    MatrixUnit,
    Permutation,
    RankOne,
}

/// Every tenth sample is a matrix unit, a permutation or a rank-one matrix
/// in turn; the rest are Gaussian.
pub fn kind_for(index: usize) -> SampleKind {
    match index % 10 {
        7 => SampleKind::MatrixUnit,
        8 => SampleKind::Permutation,
        9 => SampleKind::RankOne,
        _ => SampleKind::Gaussian,
    }
}

/// A `d × d` sample of the kind dictated by `index`.
pub fn structured_matrix(rng: &mut SampleRng, d: usize, index: usize) -> CMat {
    match kind_for(index) {
        SampleKind::Gaussian => gaussian_matrix(rng, d, d),
        SampleKind::MatrixUnit => {
            let i = rng.random_range(0..d);
            let j = rng.random_range(0..d);
            CMat::unit(d, i, j)
        }
        SampleKind::Permutation => permutation_matrix(rng, d),
        SampleKind::RankOne => rank_one_matrix(rng, d),
    }
}
