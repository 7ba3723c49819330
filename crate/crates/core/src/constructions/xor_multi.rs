use crate::digest::ExtendedDigest;
use crate::hash_backend::{Direct, HashBackend, HashSpec};

use super::{check_seed, Decimal, SpecError, SEP};

/// XOR of the first bytes of several distinct hashes of `seed || 0 || dec(i)`.
///
/// The output is as unpredictable as the strongest member of the set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XorMulti {
    seed: Vec<u8>,
    hashes: Vec<HashSpec>,
}

impl XorMulti {
    pub fn new(seed: impl Into<Vec<u8>>, hashes: Vec<HashSpec>) -> Result<Self, SpecError> {
        let seed = seed.into();
        check_seed(&seed)?;
        if hashes.len() < 2 {
            return Err(SpecError::TooFewHashes(hashes.len()));
        }
        for (i, h) in hashes.iter().enumerate() {
            if hashes[..i].contains(h) {
                return Err(SpecError::DuplicateHash(*h));
            }
        }
        Ok(XorMulti { seed, hashes })
    }

    /// SHA-256, SHA-512, SHA3-256 and BLAKE2b.
    pub fn with_standard_set(seed: impl Into<Vec<u8>>) -> Result<Self, SpecError> {
        Self::new(
            seed,
            vec![
                HashSpec::Sha256,
                HashSpec::Sha512,
                HashSpec::Sha3_256,
                HashSpec::Blake2b,
            ],
        )
    }

    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    pub fn hashes(&self) -> &[HashSpec] {
        &self.hashes
    }

    pub fn get_with<B: HashBackend>(&self, backend: &B, index: u64) -> u8 {
        let dec = Decimal::new(index);
        self.hashes.iter().fold(0u8, |acc, h| {
            acc ^ backend
                .hash_parts(h, &[&self.seed, SEP, dec.as_bytes()])
                .as_bytes()[0]
        })
    }
}

impl ExtendedDigest for XorMulti {
    fn get(&self, index: u64) -> u8 {
        self.get_with(&Direct, index)
    }
}
