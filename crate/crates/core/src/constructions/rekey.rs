use crate::digest::{Digest, ExtendedDigest};
use crate::hash_backend::{Direct, HashBackend, HashSpec};

use super::{check_seed, Decimal, SpecError, SEP};

pub const DEFAULT_REKEY_INTERVAL: u64 = 1 << 32;

/// Periodic one-way rekeying.
///
/// Epoch 0 uses the raw seed as its key; epoch `e > 0` uses
/// `H(seed || 0 || "rekey" || 0 || dec(e))`. Byte `i` is
/// `H(key || 0 || dec(i mod interval))[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rekeying {
    seed: Vec<u8>,
    hash: HashSpec,
    interval: u64,
}

impl Rekeying {
    pub fn new(seed: impl Into<Vec<u8>>, hash: HashSpec) -> Result<Self, SpecError> {
        Self::with_interval(seed, hash, DEFAULT_REKEY_INTERVAL)
    }

    pub fn with_interval(
        seed: impl Into<Vec<u8>>,
        hash: HashSpec,
        interval: u64,
    ) -> Result<Self, SpecError> {
        let seed = seed.into();
        check_seed(&seed)?;
        if interval == 0 {
            return Err(SpecError::ZeroInterval);
        }
        Ok(Rekeying {
            seed,
            hash,
            interval,
        })
    }

    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    pub fn hash_spec(&self) -> HashSpec {
        self.hash
    }

    pub fn interval(&self) -> u64 {
        self.interval
    }

    /// Splits an index into `(epoch, local_index)`.
    pub fn decompose(&self, index: u64) -> (u64, u64) {
        (index / self.interval, index % self.interval)
    }

    /// The key used for `epoch`.
    pub fn epoch_key(&self, epoch: u64) -> Digest {
        self.epoch_key_with(&Direct, epoch)
    }

    fn epoch_key_with<B: HashBackend>(&self, backend: &B, epoch: u64) -> Digest {
        if epoch == 0 {
            Digest::new(self.seed.clone())
        } else {
            backend.hash_parts(
                &self.hash,
                &[
                    &self.seed,
                    SEP,
                    b"rekey",
                    SEP,
                    Decimal::new(epoch).as_bytes(),
                ],
            )
        }
    }

    pub fn get_with<B: HashBackend>(&self, backend: &B, index: u64) -> u8 {
        let (epoch, local) = self.decompose(index);
        let local = Decimal::new(local);
        let byte = |key: &[u8]| {
            backend
                .hash_parts(&self.hash, &[key, SEP, local.as_bytes()])
                .as_bytes()[0]
        };
        if epoch == 0 {
            byte(&self.seed)
        } else {
            byte(self.epoch_key_with(backend, epoch).as_bytes())
        }
    }
}

impl ExtendedDigest for Rekeying {
    fn get(&self, index: u64) -> u8 {
        self.get_with(&Direct, index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Lazy;
    use crate::hash_backend::Counting;

    #[test]
    fn epoch_zero_uses_raw_seed() {
        let r = Rekeying::with_interval(b"seed".to_vec(), HashSpec::Sha256, 1000).unwrap();
        for i in [0u64, 1, 999] {
            let msg = [b"seed".as_slice(), SEP, i.to_string().as_bytes()].concat();
            assert_eq!(r.get(i), HashSpec::Sha256.hash(&msg).as_bytes()[0]);
        }
    }

    #[test]
    fn epoch_zero_matches_lazy_with_separator_suffixed_seed() {
        let r = Rekeying::with_interval(vec![3u8; 32], HashSpec::Sha256, 1024).unwrap();
        let mut seed = vec![3u8; 32];
        seed.extend_from_slice(SEP);
        let lazy = Lazy::new(seed, HashSpec::Sha256).unwrap();
        for i in 0..1024 {
            assert_eq!(r.get(i), lazy.get(i));
        }
    }

    #[test]
    fn interval_boundary() {
        let r = Rekeying::with_interval(b"s".to_vec(), HashSpec::Sha256, 10).unwrap();
        assert_eq!(r.decompose(10), (1, 0));
        assert_eq!(r.decompose(9), (0, 9));
        let key1 = r.epoch_key(1);
        let msg = [key1.as_bytes(), SEP, b"0"].concat();
        assert_eq!(r.get(10), HashSpec::Sha256.hash(&msg).as_bytes()[0]);
    }

    #[test]
    fn epochs_are_separated() {
        let r = Rekeying::with_interval(vec![9u8; 32], HashSpec::Sha256, 64).unwrap();
        let keys: Vec<_> = (0..16).map(|e| r.epoch_key(e)).collect();
        for (i, a) in keys.iter().enumerate() {
            for b in &keys[i + 1..] {
                assert_ne!(a, b);
            }
        }
        assert!((0..64).any(|i| r.get(i) != r.get(64 + i)));
    }

    #[test]
    fn hash_work_at_most_two() {
        let r = Rekeying::with_interval(b"s".to_vec(), HashSpec::Sha256, 7).unwrap();
        let c = Counting::new();
        for i in 0..100 {
            c.reset();
            r.get_with(&c, i);
            assert_eq!(c.calls(), if i < 7 { 1 } else { 2 });
        }
    }

    #[test]
    fn rejects_zero_interval() {
        assert_eq!(
            Rekeying::with_interval(b"s".to_vec(), HashSpec::Sha256, 0),
            Err(SpecError::ZeroInterval)
        );
    }
}
