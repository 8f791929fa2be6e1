//! Counter-based pseudo-random number generation.
//!
//! Every random quantity in this crate is a pure function of a seed and a
//! draw counter, so results are identical across platforms and across
//! sequential/parallel execution. Streams are forked by hashing a tag into
//! the key, which gives each (iteration, player, sample-slot) tuple its own
//! independent sequence.

/// Weyl increment used by SplitMix64.
const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer: a bijective 64-bit mixer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A splittable counter-based generator.
///
/// `next_u64()` returns `mix(key + (counter+1) * GOLDEN)`, i.e. the SplitMix64
/// sequence for `key`. `fork(tag)` derives an independent stream whose key is
/// a hash of the parent key and the tag; forking does not advance the parent.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng {
            key: mix(seed ^ GOLDEN),
            counter: 0,
        }
    }

    /// Derives an independent stream for the given tag.
    pub fn fork(&self, tag: u64) -> Self {
        CounterRng {
            key: mix(self.key ^ mix(tag.wrapping_add(GOLDEN))),
            counter: 0,
        }
    }

    /// Derives a stream addressed by a path of tags, e.g. (iteration, player, slot).
    pub fn stream(&self, path: &[u64]) -> Self {
        let mut rng = self.clone();
        for &tag in path {
            rng = rng.fork(tag);
        }
        rng.counter = 0;
        rng
    }

    /// Number of draws consumed so far on this stream.
    pub fn draws(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw from [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index from `0..n`.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        // Multiply-shift rejection-free mapping; bias is < 2^-53 for desk-scale n.
        let u = self.next_f64();
        let i = (u * n as f64) as usize;
        i.min(n - 1)
    }

    /// Samples an index from a probability vector by inverse CDF scan.
    pub fn sample_categorical(&mut self, probs: &[f64]) -> usize {
        let u = self.next_f64();
        let mut acc = 0.0;
        for (i, &p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    }
}
