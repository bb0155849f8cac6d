//! Seeded complex Gaussian sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::{BlockElement, Subspace, C64};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian with `E|z|^2 = 1`.
pub fn complex_gaussian(rng: &mut Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_coeffs(rng: &mut Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Random element of `s` with Gaussian coordinates in its orthonormal basis.
pub fn random_element(s: &Subspace, rng: &mut Rng) -> BlockElement {
    let coeffs = gaussian_coeffs(rng, s.dim());
    s.combination(&coeffs)
}
