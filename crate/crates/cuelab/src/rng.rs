//! Splittable deterministic random streams.
//!
//! Every Monte Carlo draw gets its own ChaCha stream keyed by
//! `(master seed, stream index)`, so draw `i` produces the same values no
//! matter which worker executes it or how work is chunked.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Factory for per-draw RNG streams derived from one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Streams {
    master: u64,
}

impl Streams {
    pub fn new(master: u64) -> Self {
        Streams { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Independent stream `index`; streams never overlap for distinct indices.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(index);
        rng
    }
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2),
/// so E|Z|^2 = 1.
pub fn standard_complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let g: f64 = rng.sample(rand_distr::StandardNormal);
    let h: f64 = rng.sample(rand_distr::StandardNormal);
    Complex64::new(g, h) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniform point on the unit circle.
pub fn uniform_phase<R: Rng>(rng: &mut R) -> Complex64 {
    let psi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(1.0, psi)
}
