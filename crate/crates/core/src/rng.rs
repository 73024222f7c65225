//! Seeded, splittable random streams.
//!
//! Streams are ChaCha8 generators. A stream is identified by a 64-bit seed and
//! a stream id; [`Stream::substream`] derives a child from that identity alone,
//! so a child never depends on how many values the parent already produced.
//! Monte-Carlo trials take `substream(trial_index)` and give the same answer
//! whatever the thread schedule.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct Stream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

/// Where a stream stood when something was drawn from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamPosition {
    pub seed: u64,
    pub stream: u64,
    pub word: u64,
}

pub fn seeded_stream(seed: u64) -> Stream {
    Stream::with_ids(seed, 0)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Stream {
    fn with_ids(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream number `index`.
    pub fn substream(&self, index: u64) -> Stream {
        let key = if self.stream == 0 {
            self.seed
        } else {
            splitmix64(self.seed ^ splitmix64(self.stream))
        };
        Stream::with_ids(key, index.wrapping_add(1))
    }

    pub fn position(&self) -> StreamPosition {
        StreamPosition {
            seed: self.seed,
            stream: self.stream,
            word: self.rng.get_word_pos() as u64,
        }
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// One Bernoulli trial against a threshold from [`bernoulli_threshold`].
    #[inline]
    pub fn bernoulli(&mut self, threshold: u64) -> bool {
        self.rng.next_u64() < threshold
    }

    /// Uniform point in the Euclidean ball `B(0, radius)` of dimension `dim`.
    pub fn in_ball(&mut self, dim: usize, radius: f64) -> Vec<f64> {
        let mut v: Vec<f64> = (0..dim).map(|_| self.normal()).collect();
        let n = crate::point::norm(&v);
        // Radius density ∝ r^(d-1) on [0, radius].
        let r = radius * self.uniform().powf(1.0 / dim as f64);
        if n > 0.0 {
            v.iter_mut().for_each(|c| *c *= r / n);
        }
        v
    }

    /// Uniform point on the unit sphere.
    pub fn on_sphere(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.normal()).collect();
            let n = crate::point::norm(&v);
            if n > 0.0 {
                return v.into_iter().map(|c| c / n).collect();
            }
        }
    }
}

/// Integer threshold `t` with `P(u64 < t) = p` up to 2⁻⁶⁴.
pub fn bernoulli_threshold(p: f64) -> u64 {
    if p <= 0.0 {
        0
    } else if p >= 1.0 {
        u64::MAX
    } else {
        // p * 2^64 is exact in binary; the cast truncates.
        (p * 18_446_744_073_709_551_616.0) as u64
    }
}

impl RngCore for Stream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
