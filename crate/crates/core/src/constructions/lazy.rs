use crate::digest::ExtendedDigest;
use crate::hash_backend::{Direct, HashBackend, HashSpec};

use super::{check_seed, Decimal, SpecError};

/// The basic construction: byte `i` is `hash(seed || dec(i))[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lazy {
    seed: Vec<u8>,
    hash: HashSpec,
}

impl Lazy {
    pub fn new(seed: impl Into<Vec<u8>>, hash: HashSpec) -> Result<Self, SpecError> {
        let seed = seed.into();
        check_seed(&seed)?;
        Ok(Lazy { seed, hash })
    }

    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    pub fn hash_spec(&self) -> HashSpec {
        self.hash
    }

    pub fn get_with<B: HashBackend>(&self, backend: &B, index: u64) -> u8 {
        let dec = Decimal::new(index);
        backend
            .hash_parts(&self.hash, &[&self.seed, dec.as_bytes()])
            .as_bytes()[0]
    }
}

impl ExtendedDigest for Lazy {
    fn get(&self, index: u64) -> u8 {
        self.get_with(&Direct, index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash_backend::Counting;

    #[test]
    fn index_zero_reference() {
        let lazy = Lazy::new(vec![0u8; 32], HashSpec::Sha256).unwrap();
        let mut msg = vec![0u8; 32];
        msg.push(b'0');
        assert_eq!(lazy.get(0), HashSpec::Sha256.hash(&msg).as_bytes()[0]);
        // Frozen from an independent SHA-256 of 0x00*32 || "0".
        assert_eq!(lazy.get(0), 0x4f);
    }

    #[test]
    fn pure() {
        let lazy = Lazy::new(b"seed".to_vec(), HashSpec::Sha3_256).unwrap();
        let first = lazy.get(123_456);
        assert!((0..1000).all(|_| lazy.get(123_456) == first));
    }

    #[test]
    fn large_index_uses_full_decimal() {
        let lazy = Lazy::new(b"s".to_vec(), HashSpec::Sha256).unwrap();
        let expected = HashSpec::Sha256.hash(b"s18446744073709551615").as_bytes()[0];
        assert_eq!(lazy.get(u64::MAX), expected);
    }

    #[test]
    fn one_hash_per_index() {
        let lazy = Lazy::new(b"s".to_vec(), HashSpec::Sha256).unwrap();
        let c = Counting::new();
        for i in 0..100 {
            lazy.get_with(&c, i);
        }
        assert_eq!(c.calls(), 100);
    }

    #[test]
    fn rejects_empty_seed() {
        assert_eq!(
            Lazy::new(vec![], HashSpec::Sha256),
            Err(SpecError::EmptySeed)
        );
    }
}
