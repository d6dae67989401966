//! Seeded, stream-partitioned random number generation.
//!
//! Verification campaigns must be replayable evidence, so all sampling goes
//! through a counter-based generator: ChaCha8 keyed by `seed` with a 64-bit
//! `stream` index. Streams with different indices share no draws, and the
//! draw sequence within a stream is independent of scheduling. The
//! distribution transforms below are written out explicitly (Box-Muller,
//! inverse CDF) so the byte-level output depends only on (seed, stream,
//! counter), not on a distribution crate's internal tables.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fmath::{cos, ln, sqrt};

/// Identifies a deterministic draw stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Seed {
    pub seed: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(seed: u64) -> Self {
        Seed { seed, stream: 0 }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        Seed { seed, stream }
    }
}

/// A deterministic stream of draws.
#[derive(Debug, Clone)]
pub struct StreamRng {
    inner: ChaCha8Rng,
    /// Cached second Box-Muller output.
    spare_normal: Option<f64>,
}

impl StreamRng {
    pub fn new(seed: Seed) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed.seed);
        inner.set_stream(seed.stream);
        StreamRng {
            inner,
            spare_normal: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53-bit resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`; safe to feed into `ln`.
    #[inline]
    pub fn uniform_open_closed(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[-1, 1]`.
    #[inline]
    pub fn uniform_symmetric(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.uniform_open_closed();
        let u2 = self.uniform();
        let r = sqrt(-2.0 * ln(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        self.spare_normal = Some(r * libm::sin(theta));
        r * cos(theta)
    }

    /// Exponential with the given mean, by inverse CDF.
    pub fn exponential(&mut self, mean: f64) -> f64 {
        -mean * ln(self.uniform_open_closed())
    }

    /// Rademacher sign.
    #[inline]
    pub fn sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}
