//! Counter-based complex Gaussian stream.
//!
//! Draws are a pure function of (seed, index), so the same seed reproduces the
//! same sequence on every platform, and substreams can be split off by label
//! without touching the parent.

use num_complex::Complex64;

/// Standard complex Gaussian stream with E|γ|² = 1: real and imaginary parts
/// independent with variance 1/2 each.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    seed: u64,
    index: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(state: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, index: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Derived stream keyed by a label; independent of the parent's position.
    pub fn substream(&self, label: u64) -> Self {
        Self { seed: splitmix(self.seed ^ splitmix(label)), index: 0 }
    }

    pub fn substream_named(&self, name: &str, instance: u64) -> Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in name.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100_0000_01b3);
        }
        self.substream(h ^ instance.wrapping_mul(GOLDEN))
    }

    fn raw(&self, ctr: u64) -> u64 {
        splitmix(self.seed.wrapping_add(ctr.wrapping_mul(GOLDEN)))
    }

    /// Uniform in (0, 1].
    fn uniform(&self, ctr: u64) -> f64 {
        (((self.raw(ctr) >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// One standard complex Gaussian draw.
    pub fn next_complex(&mut self) -> Complex64 {
        let i = self.index;
        self.index += 1;
        let u1 = self.uniform(2 * i);
        let u2 = self.uniform(2 * i + 1);
        // Modulus √(−ln u) is Rayleigh with E r² = 1, phase uniform.
        let r = (-u1.ln()).sqrt();
        let th = 2.0 * std::f64::consts::PI * u2;
        Complex64::new(r * th.cos(), r * th.sin())
    }

    /// One standard real Gaussian draw (variance 1).
    pub fn next_real(&mut self) -> f64 {
        self.next_complex().re * std::f64::consts::SQRT_2
    }

    pub fn draw(&mut self, count: usize) -> Vec<Complex64> {
        (0..count).map(|_| self.next_complex()).collect()
    }

    /// Uniform in [0, 1), advancing the stream.
    pub fn next_uniform(&mut self) -> f64 {
        let i = self.index;
        self.index += 1;
        (self.raw(2 * i) >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform index below `bound`.
    pub fn next_index(&mut self, bound: usize) -> usize {
        ((self.next_uniform() * bound as f64) as usize).min(bound - 1)
    }
}
