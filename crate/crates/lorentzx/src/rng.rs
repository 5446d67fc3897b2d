//! Counter-based random streams.
//!
//! A stream is identified by `(seed, stream id)` and produces its outputs by
//! mixing a per-stream key with a running counter, so the n-th draw of a
//! stream is a pure function of `(seed, id, n)`. Parallel consumers hand each
//! work item its own stream id and obtain results that are independent of the
//! worker count and of the visiting order.

const PHI: u64 = 0x9E37_79B9_7F4A_7C15;

/// Reserved stream-id namespaces. Every sampling loop in the crate draws its
/// per-item stream as `domain_stream(seed, domain, item_index)`, so loops
/// with different purposes never share a stream even under the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamDomain {
    /// Monte Carlo membership sweeps: sample `j` of
    /// [`crate::posop::monte_carlo_check`] uses index `j`.
    MonteCarlo = 1,
    /// Sampled unit directions in the necessary-condition battery.
    ConditionBattery = 2,
    /// Complementarity pair sampling.
    CompPairs = 3,
    /// Point-cloud generation (CLI `gen`).
    PointCloud = 4,
    /// Operator generation (CLI `gen`).
    Operators = 5,
    /// Gap-study trials.
    GapStudy = 6,
}

/// Stream for item `index` of a namespaced sampling loop. `index` must stay
/// below 2^48; the domain tag occupies the high bits.
pub fn domain_stream(seed: u64, domain: StreamDomain, index: u64) -> RngStream {
    debug_assert!(index < 1 << 48);
    RngStream::new(seed, ((domain as u64) << 48) ^ index)
}

/// splitmix64 finalizer; bijective on u64 with good avalanche behavior.
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

#[derive(Debug, Clone)]
pub struct RngStream {
    key: u64,
    counter: u64,
    spare_gaussian: Option<f64>,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(seed ^ mix64(stream.wrapping_mul(PHI).wrapping_add(PHI)));
        RngStream {
            key,
            counter: 0,
            spare_gaussian: None,
        }
    }

    /// Forks a stream whose outputs are unrelated to the parent's. The parent
    /// is not advanced.
    pub fn substream(&self, id: u64) -> Self {
        let key = mix64(self.key ^ mix64(id.wrapping_mul(PHI).wrapping_add(1)));
        RngStream {
            key,
            counter: 0,
            spare_gaussian: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let c = self.counter;
        self.counter += 1;
        mix64(self.key.wrapping_add(c.wrapping_mul(PHI).wrapping_add(PHI)))
    }

    /// Uniform in [0, 1), with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; safe to pass through `ln`.
    fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform in 0..bound.
    pub fn next_index(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        // Multiply-shift keeps the draw count at one u64 per index.
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    /// Standard normal via Box-Muller; pairs are generated together and the
    /// second value cached, so draw counts stay deterministic.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(g) = self.spare_gaussian.take() {
            return g;
        }
        let r = (-2.0 * self.next_f64_open().ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * self.next_f64();
        self.spare_gaussian = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn gaussian_vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_gaussian()).collect()
    }

    /// Uniform direction on the unit sphere of R^n.
    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let mut v = self.gaussian_vector(n);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                for x in &mut v {
                    *x /= norm;
                }
                return v;
            }
        }
    }
}
