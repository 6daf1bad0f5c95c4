//! Deterministic, platform-independent seeded randomness.
//!
//! A [`SeedStream`] names a point in a derivation tree: a root seed plus a
//! path of `(label, index)` pairs. The ChaCha key for a stream is the
//! SHA-256 digest of the encoded path, so any `(root, path)` yields the
//! same draw sequence on every platform and in any call order. Augmentation
//! code derives one child stream per (epoch, sample, view) and never shares
//! RNG state across work items.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

const DOMAIN: &[u8] = b"SAFE-SEED-V1";

/// A named, reproducible random stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedStream {
    root: u64,
    path: Vec<(String, u64)>,
}

impl SeedStream {
    pub fn new(root: u64) -> Self {
        SeedStream {
            root,
            path: Vec::new(),
        }
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    /// Derive a child stream. Pure: does not consume state from `self`.
    pub fn child(&self, label: &str, index: u64) -> SeedStream {
        let mut path = self.path.clone();
        path.push((label.to_string(), index));
        SeedStream {
            root: self.root,
            path,
        }
    }

    fn key(&self) -> [u8; 32] {
        let mut hasher = Sha256::new();
        hasher.update(DOMAIN);
        hasher.update(self.root.to_le_bytes());
        for (label, index) in &self.path {
            hasher.update((label.len() as u64).to_le_bytes());
            hasher.update(label.as_bytes());
            hasher.update(index.to_le_bytes());
        }
        hasher.finalize().into()
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        ChaCha12Rng::from_seed(self.key())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn identical_paths_yield_identical_draws() {
        let a = SeedStream::new(42).child("epoch", 3).child("sample", 17);
        let b = SeedStream::new(42).child("epoch", 3).child("sample", 17);
        let mut ra = a.rng();
        let mut rb = b.rng();
        for _ in 0..64 {
            assert_eq!(ra.random::<u64>(), rb.random::<u64>());
        }
    }

    #[test]
    fn distinct_paths_separate_within_sixteen_draws() {
        // Collision smoke test over a family of near-miss paths.
        let root = SeedStream::new(9);
        let streams = [
            root.child("a", 0),
            root.child("a", 1),
            root.child("b", 0),
            root.child("a", 0).child("a", 0),
            root.child("aa", 0),
        ];
        for i in 0..streams.len() {
            for j in (i + 1)..streams.len() {
                let mut ri = streams[i].rng();
                let mut rj = streams[j].rng();
                let differs = (0..16).any(|_| ri.random::<u64>() != rj.random::<u64>());
                assert!(differs, "streams {i} and {j} collide");
            }
        }
    }

    #[test]
    fn draw_sequence_is_frozen() {
        // Golden values pin the derivation scheme; a change here breaks
        // reproducibility of every recorded run.
        let mut rng = SeedStream::new(42).child("a", 0).rng();
        let got: Vec<u64> = (0..4).map(|_| rng.random::<u64>()).collect();
        assert_eq!(
            got,
            vec![
                2923547350332905050,
                16223344239181342169,
                3555867389047007598,
                2688185340670663576,
            ]
        );
    }
}
