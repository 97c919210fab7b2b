//! Deterministic pseudo-randomness and low-discrepancy sequences.
//!
//! Reproducibility across platforms, crate versions and thread counts matters
//! more here than statistical sophistication, so the crate carries its own
//! SplitMix64 instead of depending on `rand`. Every consumer derives its
//! stream from an explicit 64-bit seed.

use crate::geom::Vec3;

/// SplitMix64 generator (Steele, Lea & Flood 2014).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of mantissa.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform point in `[0,1)³`.
    pub fn point_in_unit_cube(&mut self) -> Vec3 {
        Vec3::new(self.next_f64(), self.next_f64(), self.next_f64())
    }

    /// Uniform direction on the unit sphere, by rejection from the cube.
    pub fn unit_vector(&mut self) -> Vec3 {
        loop {
            let v = Vec3::new(
                self.next_in(-1.0, 1.0),
                self.next_in(-1.0, 1.0),
                self.next_in(-1.0, 1.0),
            );
            let n2 = v.norm2();
            if n2 > 1e-6 && n2 <= 1.0 {
                return v * (1.0 / n2.sqrt());
            }
        }
    }
}

/// `i`-th element of the van der Corput sequence in the given base.
pub fn van_der_corput(mut i: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut denom = 1.0;
    while i > 0 {
        denom *= base as f64;
        result += (i % base) as f64 / denom;
        i /= base;
    }
    result
}

/// `i`-th point of the Halton (2,3,5) sequence in `[0,1)³`.
pub fn halton3(i: u64) -> Vec3 {
    Vec3::new(
        van_der_corput(i, 2),
        van_der_corput(i, 3),
        van_der_corput(i, 5),
    )
}
