//! Pluggable hash backends.
//!
//! Real cryptographic hashes (SHA-256, SHA-512, SHA3-256, BLAKE2b-512) plus
//! "toy" hashes: SHA-256 truncated to `ceil(b/8)` bytes and masked to `b` bits.
//! Toy hashes have a state space small enough that the rho structure of their
//! iteration can be enumerated on a desk.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use blake2::Blake2b512;
use sha2::{Digest as _, Sha256, Sha512};
use sha3::Sha3_256;
use thiserror::Error;

use crate::digest::Digest;

/// Smallest supported toy state width in bits.
pub const TOY_MIN_BITS: u8 = 4;
/// Largest supported toy state width in bits.
pub const TOY_MAX_BITS: u8 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HashError {
    #[error("unknown hash algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("toy state width {0} outside [{TOY_MIN_BITS}, {TOY_MAX_BITS}]")]
    ToyBits(u32),
    #[error("{0} is not a toy hash")]
    NotToy(HashSpec),
    #[error("state {state:#x} does not fit in {bits} bits")]
    StateOutOfRange { state: u32, bits: u8 },
}

/// Identifies a hash backend.
///
/// The toy variant carries its state width and an optional one-byte tweak.
/// A tweaked toy hash prefixes the tweak byte to the message before hashing,
/// which yields a family of distinct small functions for averaging cycle
/// statistics over "random functions" rather than over start points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HashSpec {
    Sha256,
    Sha512,
    Sha3_256,
    Blake2b,
    Toy { bits: u8, tweak: Option<u8> },
}

impl HashSpec {
    /// Untweaked toy hash of the given width.
    pub fn toy(bits: u32) -> Result<Self, HashError> {
        Self::toy_tweaked(bits, None)
    }

    pub fn toy_tweaked(bits: u32, tweak: Option<u8>) -> Result<Self, HashError> {
        if !(u32::from(TOY_MIN_BITS)..=u32::from(TOY_MAX_BITS)).contains(&bits) {
            return Err(HashError::ToyBits(bits));
        }
        Ok(HashSpec::Toy {
            bits: bits as u8,
            tweak,
        })
    }

    /// Output length in bytes.
    pub fn output_len(&self) -> usize {
        match self {
            HashSpec::Sha256 | HashSpec::Sha3_256 => 32,
            HashSpec::Sha512 | HashSpec::Blake2b => 64,
            HashSpec::Toy { bits, .. } => toy_width(*bits),
        }
    }

    pub fn is_toy(&self) -> bool {
        matches!(self, HashSpec::Toy { .. })
    }

    /// Hashes `message`. Pure function of `(self, message)`.
    ///
    /// Every listed algorithm accepts at least 2^61 - 1 bytes of input, which
    /// exceeds any slice addressable on supported targets, so no length check
    /// is needed here.
    pub fn hash(&self, message: &[u8]) -> Digest {
        self.hash_parts(&[message])
    }

    /// Hashes the concatenation of `parts` without materializing it.
    pub fn hash_parts(&self, parts: &[&[u8]]) -> Digest {
        fn run<H: sha2::Digest>(parts: &[&[u8]]) -> Vec<u8> {
            let mut h = H::new();
            for p in parts {
                h.update(p);
            }
            h.finalize().to_vec()
        }
        let bytes = match self {
            HashSpec::Sha256 => run::<Sha256>(parts),
            HashSpec::Sha512 => run::<Sha512>(parts),
            HashSpec::Sha3_256 => run::<Sha3_256>(parts),
            HashSpec::Blake2b => run::<Blake2b512>(parts),
            HashSpec::Toy { bits, tweak } => {
                let mut h = Sha256::new();
                if let Some(t) = tweak {
                    h.update([*t]);
                }
                for p in parts {
                    h.update(p);
                }
                let full = h.finalize();
                let mut out = full[..toy_width(*bits)].to_vec();
                mask_big_endian(&mut out, *bits);
                out
            }
        };
        Digest::new(bytes)
    }

    /// One step of the iterated toy map: hash the big-endian encoding of
    /// `state` and read the (masked) output back as a big-endian integer.
    pub fn toy_iterate(&self, state: u32) -> Result<u32, HashError> {
        let HashSpec::Toy { bits, .. } = *self else {
            return Err(HashError::NotToy(*self));
        };
        if u64::from(state) >= 1u64 << bits {
            return Err(HashError::StateOutOfRange { state, bits });
        }
        Ok(self.toy_step(bits, state))
    }

    // Caller guarantees `self` is a toy hash of width `bits` and `state` fits.
    pub(crate) fn toy_step(&self, bits: u8, state: u32) -> u32 {
        let width = toy_width(bits);
        let be = state.to_be_bytes();
        let out = self.hash(&be[4 - width..]);
        out.as_bytes()
            .iter()
            .fold(0u32, |acc, b| (acc << 8) | u32::from(*b))
    }

    /// Canonical name used in descriptors.
    pub fn name(&self) -> String {
        self.to_string()
    }
}

fn toy_width(bits: u8) -> usize {
    usize::from(bits).div_ceil(8)
}

// Clears the high bits of the first byte so the big-endian value is < 2^bits.
fn mask_big_endian(bytes: &mut [u8], bits: u8) {
    let excess = bytes.len() * 8 - usize::from(bits);
    if excess > 0 {
        bytes[0] &= 0xff >> excess;
    }
}

impl fmt::Display for HashSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HashSpec::Sha256 => f.write_str("sha256"),
            HashSpec::Sha512 => f.write_str("sha512"),
            HashSpec::Sha3_256 => f.write_str("sha3-256"),
            HashSpec::Blake2b => f.write_str("blake2b"),
            HashSpec::Toy { bits, tweak: None } => write!(f, "toy-{bits}"),
            HashSpec::Toy {
                bits,
                tweak: Some(t),
            } => write!(f, "toy-{bits}.{t}"),
        }
    }
}

impl FromStr for HashSpec {
    type Err = HashError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || HashError::UnknownAlgorithm(s.to_string());
        match s {
            "sha256" => return Ok(HashSpec::Sha256),
            "sha512" => return Ok(HashSpec::Sha512),
            "sha3-256" => return Ok(HashSpec::Sha3_256),
            "blake2b" => return Ok(HashSpec::Blake2b),
            _ => {}
        }
        let rest = s.strip_prefix("toy-").ok_or_else(unknown)?;
        let (bits, tweak) = match rest.split_once('.') {
            Some((b, t)) => (b, Some(t)),
            None => (rest, None),
        };
        let bits = parse_decimal(bits).ok_or_else(unknown)?;
        let tweak = match tweak {
            Some(t) => Some(
                parse_decimal(t)
                    .and_then(|v| u8::try_from(v).ok())
                    .ok_or_else(unknown)?,
            ),
            None => None,
        };
        HashSpec::toy_tweaked(bits, tweak)
    }
}

// Canonical decimal only: no sign, no leading zeros.
fn parse_decimal(s: &str) -> Option<u32> {
    if s.is_empty() || (s.len() > 1 && s.starts_with('0')) || !s.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    s.parse().ok()
}

/// Something that can evaluate a [`HashSpec`] on a message.
///
/// Constructions are generic over the backend so that hash work can be
/// counted without touching the default fast path.
pub trait HashBackend {
    fn hash_parts(&self, spec: &HashSpec, parts: &[&[u8]]) -> Digest;
}

/// Calls straight through to [`HashSpec::hash_parts`].
#[derive(Debug, Default, Clone, Copy)]
pub struct Direct;

impl HashBackend for Direct {
    #[inline]
    fn hash_parts(&self, spec: &HashSpec, parts: &[&[u8]]) -> Digest {
        spec.hash_parts(parts)
    }
}

/// Backend that counts every hash invocation.
#[derive(Debug, Default)]
pub struct Counting {
    calls: AtomicU64,
}

impl Counting {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) -> u64 {
        self.calls.swap(0, Ordering::Relaxed)
    }
}

impl HashBackend for Counting {
    fn hash_parts(&self, spec: &HashSpec, parts: &[&[u8]]) -> Digest {
        self.calls.fetch_add(1, Ordering::Relaxed);
        spec.hash_parts(parts)
    }
}
