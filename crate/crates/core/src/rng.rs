//! Counter-based random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream selected
//! by `(seed, key)`. A sample's value depends only on its key, never on how
//! many samples were drawn before it or on which thread drew it.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Domain tags keep independent experiments that share a seed from reusing streams.
pub mod domain {
    pub const TORUS_MC: u64 = 0x01;
    pub const RADEMACHER: u64 = 0x02;
    pub const STEINHAUS: u64 = 0x03;
    pub const SEARCH: u64 = 0x04;
    pub const GENERATOR: u64 = 0x05;
    pub const LITTLEWOOD_PALEY: u64 = 0x06;
    pub const TRIALS: u64 = 0x07;
}

/// Mixes a user seed with a domain tag (splitmix64 finalizer).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic stream keyed by `(seed, key)`.
#[derive(Clone, Debug)]
pub struct Stream {
    inner: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64, key: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(key);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn open_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn angle(&mut self) -> f64 {
        TAU * self.uniform()
    }

    pub fn unimodular(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle())
    }

    pub fn sign(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        // Lemire's multiply-shift; bias is below 2^-64 * n, irrelevant here.
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u = self.open_uniform();
        let v = self.uniform();
        (-2.0 * u.ln()).sqrt() * (TAU * v).cos()
    }

    /// Standard Cauchy variable, density `1 / (pi (1 + t^2))`.
    pub fn cauchy(&mut self) -> f64 {
        (std::f64::consts::PI * (self.open_uniform() - 0.5)).tan()
    }
}

/// The Rademacher sign attached to index `n` under `seed`.
pub fn rademacher(seed: u64, n: u64) -> f64 {
    Stream::new(derive_seed(seed, domain::RADEMACHER), n).sign()
}

/// The Steinhaus (uniform unimodular) multiplier attached to index `n` under `seed`.
pub fn steinhaus(seed: u64, n: u64) -> Complex64 {
    Stream::new(derive_seed(seed, domain::STEINHAUS), n).unimodular()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_depend_only_on_key() {
        let a: Vec<u64> = (0..4).map(|_| Stream::new(7, 3).next_u64()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        assert_ne!(Stream::new(7, 3).next_u64(), Stream::new(7, 4).next_u64());
        assert_ne!(Stream::new(7, 3).next_u64(), Stream::new(8, 3).next_u64());
    }

    #[test]
    fn uniform_in_range() {
        let mut s = Stream::new(1, 1);
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
            let v = s.open_uniform();
            assert!(v > 0.0 && v < 1.0);
            assert!(s.below(5) < 5);
        }
    }

    #[test]
    fn uniform_mean_is_half() {
        let mut s = Stream::new(11, 0);
        let n = 200_000;
        let mean: f64 = (0..n).map(|_| s.uniform()).sum::<f64>() / n as f64;
        // stderr is 1/sqrt(12 n) ~ 6.5e-4
        assert!((mean - 0.5).abs() < 4e-3);
    }

    #[test]
    fn rademacher_balanced() {
        let sum: f64 = (0..20_000).map(|n| rademacher(3, n)).sum();
        assert!(sum.abs() < 600.0);
    }
}
