use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Seeded random stream backed by ChaCha8.
///
/// Floats are produced from the top 53 bits of `next_u64`, so a given seed
/// yields the same sequence on every platform and every build.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

/// SplitMix64 finalizer, used to decorrelate derived seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream for parallel work; depends only on the
    /// parent seed and `stream`, never on how much the parent has drawn.
    pub fn fork(&self, stream: u64) -> RngStream {
        RngStream::new(mix_seed(self.seed, stream))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform<T: Scalar>(&mut self, lo: T, hi: T) -> T {
        let u = T::lit(self.next_f64());
        let x = lo + (hi - lo) * u;
        // rounding can land exactly on hi for narrow ranges
        if x >= hi {
            lo
        } else {
            x
        }
    }

    pub fn uniform_vec<T: Scalar>(&mut self, lo: T, hi: T, len: usize) -> Vec<T> {
        (0..len).map(|_| self.uniform(lo, hi)).collect()
    }

    /// Matrix of i.i.d. uniform draws in `[lo, hi)`, filled row-major.
    pub fn uniform_matrix<T: Scalar>(&mut self, lo: T, hi: T, rows: usize, cols: usize) -> Result<Matrix<T>> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::Param(format!(
                "uniform range requires lo < hi, got [{lo}, {hi})"
            )));
        }
        Matrix::new(rows, cols, self.uniform_vec(lo, hi, rows * cols))
    }

    /// Unbiased integer in `[0, n)`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.inner.next_u64();
            if v < zone {
                return (v % n) as usize;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
