use crate::digest::ExtendedDigest;
use crate::hash_backend::{Direct, HashBackend};

use super::{Hierarchical, Rekeying, Sponge, XorMulti};

/// XOR of one instance of each derived construction at the same index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composite {
    pub xor: XorMulti,
    pub rekey: Rekeying,
    pub hierarchical: Hierarchical,
    pub sponge: Sponge,
}

impl Composite {
    pub fn new(xor: XorMulti, rekey: Rekeying, hierarchical: Hierarchical, sponge: Sponge) -> Self {
        Composite {
            xor,
            rekey,
            hierarchical,
            sponge,
        }
    }

    pub fn get_with<B: HashBackend>(&self, backend: &B, index: u64) -> u8 {
        self.xor.get_with(backend, index)
            ^ self.rekey.get_with(backend, index)
            ^ self.hierarchical.get_with(backend, index)
            ^ self.sponge.get_with(backend, index)
    }
}

impl ExtendedDigest for Composite {
    fn get(&self, index: u64) -> u8 {
        self.get_with(&Direct, index)
    }
}
