use crate::digest::ExtendedDigest;
use crate::hash_backend::{Direct, HashBackend, HashSpec};

use super::{check_seed, Decimal, SpecError, SEP};

pub const DEFAULT_EPOCH_SIZE: u64 = 1 << 40;
pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 20;

/// Three-level seed tree: master -> epoch seed -> chunk seed -> byte.
///
/// ```text
/// epoch_seed = H(master || 0 || "epoch" || 0 || dec(epoch))
/// chunk_seed = H(epoch_seed || 0 || "chunk" || 0 || dec(chunk))
/// byte       = H(chunk_seed || 0 || dec(position))[0]
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hierarchical {
    master_seed: Vec<u8>,
    hash: HashSpec,
    epoch_size: u64,
    chunk_size: u64,
}

impl Hierarchical {
    pub fn new(master_seed: impl Into<Vec<u8>>, hash: HashSpec) -> Result<Self, SpecError> {
        Self::with_sizes(master_seed, hash, DEFAULT_EPOCH_SIZE, DEFAULT_CHUNK_SIZE)
    }

    pub fn with_sizes(
        master_seed: impl Into<Vec<u8>>,
        hash: HashSpec,
        epoch_size: u64,
        chunk_size: u64,
    ) -> Result<Self, SpecError> {
        let master_seed = master_seed.into();
        check_seed(&master_seed)?;
        if chunk_size == 0 || epoch_size <= chunk_size || !epoch_size.is_multiple_of(chunk_size) {
            return Err(SpecError::HierarchySizes {
                epoch_size,
                chunk_size,
            });
        }
        Ok(Hierarchical {
            master_seed,
            hash,
            epoch_size,
            chunk_size,
        })
    }

    pub fn master_seed(&self) -> &[u8] {
        &self.master_seed
    }

    pub fn hash_spec(&self) -> HashSpec {
        self.hash
    }

    pub fn epoch_size(&self) -> u64 {
        self.epoch_size
    }

    pub fn chunk_size(&self) -> u64 {
        self.chunk_size
    }

    /// Splits an index into `(epoch, chunk, position)`.
    pub fn decompose(&self, index: u64) -> (u64, u64, u64) {
        let epoch = index / self.epoch_size;
        let rem = index % self.epoch_size;
        (epoch, rem / self.chunk_size, rem % self.chunk_size)
    }

    pub fn get_with<B: HashBackend>(&self, backend: &B, index: u64) -> u8 {
        let (epoch, chunk, position) = self.decompose(index);
        let epoch_seed = backend.hash_parts(
            &self.hash,
            &[
                &self.master_seed,
                SEP,
                b"epoch",
                SEP,
                Decimal::new(epoch).as_bytes(),
            ],
        );
        let chunk_seed = backend.hash_parts(
            &self.hash,
            &[
                epoch_seed.as_bytes(),
                SEP,
                b"chunk",
                SEP,
                Decimal::new(chunk).as_bytes(),
            ],
        );
        backend
            .hash_parts(
                &self.hash,
                &[
                    chunk_seed.as_bytes(),
                    SEP,
                    Decimal::new(position).as_bytes(),
                ],
            )
            .as_bytes()[0]
    }
}

impl ExtendedDigest for Hierarchical {
    fn get(&self, index: u64) -> u8 {
        self.get_with(&Direct, index)
    }
}
