use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Splittable, deterministic source of randomness.
///
/// A key is a seed plus a derivation path. The path is folded into a 64-bit
/// digest as it grows, so `child` is O(1) and the key stays `Copy`. Every
/// stream is a pure function of `(seed, path)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomKey {
    seed: u64,
    digest: u64,
    depth: u32,
}

impl RandomKey {
    pub fn new(seed: u64) -> Self {
        RandomKey { seed, digest: mix(seed ^ GOLDEN), depth: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Key for the `index`-th sub-computation.
    pub fn child(&self, index: u64) -> Self {
        let step = mix(index.wrapping_mul(GOLDEN) ^ (u64::from(self.depth) << 48));
        RandomKey {
            seed: self.seed,
            digest: mix(self.digest.rotate_left(23) ^ step),
            depth: self.depth + 1,
        }
    }

    /// Fresh generator for this key.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut bytes = [0u8; 32];
        bytes[..8].copy_from_slice(&self.seed.to_le_bytes());
        bytes[8..16].copy_from_slice(&self.digest.to_le_bytes());
        bytes[16..24].copy_from_slice(&mix(self.digest ^ GOLDEN).to_le_bytes());
        bytes[24..].copy_from_slice(&u64::from(self.depth).to_le_bytes());
        ChaCha8Rng::from_seed(bytes)
    }

    /// One uniform draw in `[0, 1)`.
    pub fn uniform(&self) -> f64 {
        self.rng().random::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_pure() {
        let k = RandomKey::new(42);
        assert_eq!(k.child(3).child(1), RandomKey::new(42).child(3).child(1));
        assert_eq!(k.child(3).uniform(), k.child(3).uniform());
    }

    #[test]
    fn distinct_paths_give_distinct_streams() {
        let k = RandomKey::new(7);
        let draws = [k.child(0), k.child(1), k.child(0).child(0), k.child(1).child(0), k];
        for (i, a) in draws.iter().enumerate() {
            for b in &draws[i + 1..] {
                assert_ne!(a.uniform(), b.uniform());
            }
        }
        assert_ne!(RandomKey::new(1).uniform(), RandomKey::new(2).uniform());
    }

    #[test]
    fn children_look_uniform() {
        let k = RandomKey::new(9);
        let n = 20_000;
        let mean = (0..n).map(|i| k.child(i).uniform()).sum::<f64>() / n as f64;
        // Standard error of a uniform mean is 1/sqrt(12 n) ~ 0.002.
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }
}
