//! The pinned random generator behind every stochastic feature.
//!
//! Noise scenes and sensor noise must reproduce bit-for-bit across runs,
//! platforms, and dependency upgrades, so the generator is written out here
//! with its constants instead of being borrowed from a crate whose stream
//! could change under us. The algorithm is SplitMix64 (Steele, Lea & Flood's
//! 64-bit finalizer-based generator): state advances by the golden-ratio
//! increment `0x9E3779B97F4A7C15` and each output is a murmur-style
//! xor-shift-multiply mix of the state.
//!
//! Gaussian variates come from the Box-Muller transform on consecutive
//! uniforms, again fixed here so the byte streams never drift.

/// SplitMix64 with the published constants. Equal seeds give equal streams
/// on every platform; distinct channel streams are derived with
/// [`SplitMix64::for_channel`].
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_gaussian: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare_gaussian: None,
        }
    }

    /// Independent stream for one color channel of a seeded operation.
    ///
    /// The channel index is folded into the seed by one extra mixing round,
    /// so per-channel work can run in any order (or in parallel) and still
    /// produce the samples a serial run would.
    pub fn for_channel(seed: u64, channel: usize) -> Self {
        let mut mixer = Self::new(seed ^ (channel as u64).wrapping_mul(0xA24BAED4963EE407));
        let derived = mixer.next_u64();
        Self::new(derived)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform sample in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate via Box-Muller. Pairs are generated together;
    /// the second member is held back for the next call.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gaussian.take() {
            return z;
        }
        // 1 - u keeps the log argument in (0, 1], avoiding ln(0).
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare_gaussian = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference stream for seed 0, computed independently from the
    // published SplitMix64 constants. Pins the exact byte stream: any
    // change to the generator is a break in every seeded artifact.
    #[test]
    fn seed_zero_stream_is_pinned() {
        let mut rng = SplitMix64::new(0);
        let expected: [u64; 4] = [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
            0xF88BB8A8724C81EC,
        ];
        for e in expected {
            assert_eq!(rng.next_u64(), e);
        }
    }

    #[test]
    fn equal_seeds_agree_and_channels_differ() {
        let a: Vec<u64> = {
            let mut r = SplitMix64::new(99);
            (0..16).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = SplitMix64::new(99);
            (0..16).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);

        let c0: Vec<u64> = {
            let mut r = SplitMix64::for_channel(99, 0);
            (0..16).map(|_| r.next_u64()).collect()
        };
        let c1: Vec<u64> = {
            let mut r = SplitMix64::for_channel(99, 1);
            (0..16).map(|_| r.next_u64()).collect()
        };
        assert_ne!(c0, c1);
    }

    #[test]
    fn uniforms_stay_in_unit_interval() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..10_000 {
            let u = rng.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    // Loose sanity on the Gaussian shape: mean near 0, variance near 1.
    // With n = 100k the standard error of the mean is ~0.003.
    #[test]
    fn gaussian_moments_are_sane() {
        let mut rng = SplitMix64::new(123);
        let n = 100_000;
        let samples: Vec<f64> = (0..n).map(|_| rng.next_gaussian()).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "variance {var}");
    }
}
