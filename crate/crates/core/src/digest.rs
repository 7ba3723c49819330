//! Finite digests, the unbounded [`ExtendedDigest`] abstraction, and the
//! cached-entropy [`OracleDigest`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::rngs::OsRng;
use rand::RngCore;
use thiserror::Error;

use crate::hash_backend::HashSpec;

/// An immutable, finite byte string.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Digest(Box<[u8]>);

impl Digest {
    pub fn new(bytes: impl Into<Box<[u8]>>) -> Self {
        Digest(bytes.into())
    }

    pub fn empty() -> Self {
        Digest::default()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lowercase hex, no prefix.
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self, hex::FromHexError> {
        hex::decode(s).map(Digest::new)
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0.into_vec()
    }
}

impl AsRef<[u8]> for Digest {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for Digest {
    fn from(v: Vec<u8>) -> Self {
        Digest::new(v)
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.to_hex())
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// An unbounded, index-addressable byte sequence.
///
/// Implementations must be consistent: `get(i)` returns the same byte every
/// time it is called. Every `u64` index is valid.
pub trait ExtendedDigest {
    fn get(&self, index: u64) -> u8;
}

impl<D: ExtendedDigest + ?Sized> ExtendedDigest for &D {
    #[inline]
    fn get(&self, index: u64) -> u8 {
        (**self).get(index)
    }
}

impl<D: ExtendedDigest + ?Sized> ExtendedDigest for Box<D> {
    #[inline]
    fn get(&self, index: u64) -> u8 {
        (**self).get(index)
    }
}

impl<D: ExtendedDigest + ?Sized> ExtendedDigest for Arc<D> {
    #[inline]
    fn get(&self, index: u64) -> u8 {
        (**self).get(index)
    }
}

/// The stream that is `byte` at every index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constant(pub u8);

impl ExtendedDigest for Constant {
    fn get(&self, _index: u64) -> u8 {
        self.0
    }
}

/// The stream `0, 1, ..., 255, 0, 1, ...`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counter;

impl ExtendedDigest for Counter {
    fn get(&self, index: u64) -> u8 {
        index as u8
    }
}

/// Default number of distinct indices an [`OracleDigest`] may cache.
pub const DEFAULT_CACHE_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle cache is full ({limit} entries); index {index} cannot be materialized")]
    ResourceExhausted { index: u64, limit: usize },
    #[error("entropy source failed: {0}")]
    Entropy(String),
    #[error("oracle cannot be serialized: its bytes come from {source_name}, which has no finite description")]
    NotSerializable { source_name: &'static str },
}

type EntropyFn = dyn FnMut() -> Result<Digest, OracleError> + Send;

struct OracleState {
    entropy: Box<EntropyFn>,
    cache: HashMap<u64, u8>,
}

/// An "honest" random oracle: every new index draws fresh entropy and the
/// answer is remembered forever.
///
/// It is consistent, but its memory grows with every distinct query, it has
/// no serialized form, and two instances disagree. The `label` is the input
/// the oracle is nominally answering for; like the classic construction it
/// never influences the output.
pub struct OracleDigest {
    label: Vec<u8>,
    cache_limit: usize,
    state: Mutex<OracleState>,
}

impl OracleDigest {
    /// Oracle backed by SHA-256 of 32 bytes from the operating system RNG.
    pub fn new(label: impl Into<Vec<u8>>) -> Self {
        Self::with_entropy(label, system_entropy)
    }

    pub fn with_entropy<F>(label: impl Into<Vec<u8>>, entropy: F) -> Self
    where
        F: FnMut() -> Result<Digest, OracleError> + Send + 'static,
    {
        OracleDigest {
            label: label.into(),
            cache_limit: DEFAULT_CACHE_LIMIT,
            state: Mutex::new(OracleState {
                entropy: Box::new(entropy),
                cache: HashMap::new(),
            }),
        }
    }

    pub fn with_cache_limit(mut self, limit: usize) -> Self {
        self.cache_limit = limit;
        self
    }

    pub fn label(&self) -> &[u8] {
        &self.label
    }

    pub fn cache_limit(&self) -> usize {
        self.cache_limit
    }

    /// Returns the byte at `index`, drawing entropy on first access.
    ///
    /// The lock is held across the draw so concurrent callers never draw twice
    /// for the same index.
    pub fn get(&self, index: u64) -> Result<u8, OracleError> {
        let mut state = self.state.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(&b) = state.cache.get(&index) {
            return Ok(b);
        }
        if state.cache.len() >= self.cache_limit {
            return Err(OracleError::ResourceExhausted {
                index,
                limit: self.cache_limit,
            });
        }
        let draw = (state.entropy)()?;
        let byte = *draw
            .as_bytes()
            .first()
            .ok_or_else(|| OracleError::Entropy("entropy source returned no bytes".into()))?;
        state.cache.insert(index, byte);
        Ok(byte)
    }

    /// Number of cached entries, i.e. distinct indices queried so far.
    pub fn memory_usage(&self) -> usize {
        self.state
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .cache
            .len()
    }

    /// Always fails: the cached bytes have no description shorter than
    /// themselves and the entropy source cannot be replayed.
    pub fn serialize(&self) -> Result<String, OracleError> {
        Err(OracleError::NotSerializable {
            source_name: "a runtime entropy source",
        })
    }
}

impl fmt::Debug for OracleDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleDigest")
            .field("label", &hex::encode(&self.label))
            .field("cache_limit", &self.cache_limit)
            .field("memory_usage", &self.memory_usage())
            .finish_non_exhaustive()
    }
}

fn system_entropy() -> Result<Digest, OracleError> {
    let mut buf = [0u8; 32];
    OsRng
        .try_fill_bytes(&mut buf)
        .map_err(|e| OracleError::Entropy(e.to_string()))?;
    Ok(HashSpec::Sha256.hash(&buf))
}
