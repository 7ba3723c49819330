//! Seeded constructions. Each one is a pure function of `(spec, index)`.
//!
//! Indices are encoded as unpadded ASCII decimal. The basic [`Lazy`]
//! construction hashes `seed || dec(i)` directly; every derived construction
//! puts a single `0x00` separator between concatenated components so that
//! labels and numbers can never run into each other.

mod composite;
mod hierarchical;
mod lazy;
mod rekey;
mod sponge;
mod xor_multi;

pub use composite::Composite;
pub use hierarchical::{Hierarchical, DEFAULT_CHUNK_SIZE, DEFAULT_EPOCH_SIZE};
pub use lazy::Lazy;
pub use rekey::{Rekeying, DEFAULT_REKEY_INTERVAL};
pub use sponge::{Sponge, DEFAULT_CAPACITY_BITS, DEFAULT_RATE_BITS, MIN_RATE_BITS};
pub use xor_multi::XorMulti;

use thiserror::Error;

use crate::hash_backend::HashSpec;

/// Separator placed between components of derived hash inputs.
pub const SEP: &[u8] = &[0x00];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("seed must be at least one byte")]
    EmptySeed,
    #[error("epoch_size ({epoch_size}) must exceed chunk_size ({chunk_size}) and be a multiple of it; chunk_size must be >= 1")]
    HierarchySizes { epoch_size: u64, chunk_size: u64 },
    #[error("rekey interval must be >= 1")]
    ZeroInterval,
    #[error("sponge {what} of {bits} bits must be a positive multiple of 8")]
    SpongeWidth { what: &'static str, bits: u32 },
    #[error("sponge rate of {bits} bits is too small to absorb a padded 20-digit index (need >= {MIN_RATE_BITS})")]
    RateTooSmall { bits: u32 },
    #[error("xor-multi needs at least two hashes, got {0}")]
    TooFewHashes(usize),
    #[error("xor-multi hash set contains {0} more than once")]
    DuplicateHash(HashSpec),
}

pub(crate) fn check_seed(seed: &[u8]) -> Result<(), SpecError> {
    if seed.is_empty() {
        Err(SpecError::EmptySeed)
    } else {
        Ok(())
    }
}

/// Unpadded ASCII decimal encoding of an index, on the stack.
pub(crate) struct Decimal {
    buf: [u8; 20],
    start: usize,
}

impl Decimal {
    pub(crate) fn new(mut n: u64) -> Self {
        let mut buf = [0u8; 20];
        let mut start = buf.len();
        loop {
            start -= 1;
            buf[start] = b'0' + (n % 10) as u8;
            n /= 10;
            if n == 0 {
                break;
            }
        }
        Decimal { buf, start }
    }

    pub(crate) fn as_bytes(&self) -> &[u8] {
        &self.buf[self.start..]
    }
}
