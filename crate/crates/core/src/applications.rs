//! Reproducible test streams, a memory-hard KDF, and proof-of-work search.

use rayon::prelude::*;
use thiserror::Error;

use crate::constructions::Lazy;
use crate::digest::{Digest, ExtendedDigest};
use crate::hash_backend::HashSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppError {
    #[error("test id must not be empty")]
    EmptyTestId,
    #[error("salt must not be empty")]
    EmptySalt,
    #[error("memory cost must be >= 1")]
    ZeroCost,
    #[error("difficulty {0} exceeds 256 bits")]
    Difficulty(u32),
    #[error("cannot count leading zeros of an empty digest")]
    EmptyDigest,
}

/// The stream for `test_id`: a SHA-256 [`Lazy`] seeded with
/// `SHA-256("test_" || test_id)`.
pub fn test_stream(test_id: &str) -> Result<Lazy, AppError> {
    if test_id.is_empty() {
        return Err(AppError::EmptyTestId);
    }
    let seed = HashSpec::Sha256.hash_parts(&[b"test_", test_id.as_bytes()]);
    Ok(Lazy::new(seed.into_vec(), HashSpec::Sha256).expect("32-byte seed"))
}

/// Derives a key by walking a lazy stream with data-dependent jumps.
///
/// The stream is seeded with `SHA-256(password || salt)`. Starting at index 0,
/// each byte read determines the next index:
/// `next = (current * 256 + byte) mod (memory_cost * 64)`. After
/// `memory_cost` reads, the gathered bytes are hashed with SHA-256.
pub fn memory_hard_kdf(password: &[u8], salt: &[u8], memory_cost: u64) -> Result<Digest, AppError> {
    if salt.is_empty() {
        return Err(AppError::EmptySalt);
    }
    if memory_cost == 0 {
        return Err(AppError::ZeroCost);
    }
    let seed = HashSpec::Sha256.hash_parts(&[password, salt]);
    let stream = Lazy::new(seed.into_vec(), HashSpec::Sha256).expect("32-byte seed");
    kdf_gather(&stream, memory_cost)
}

/// The walk-and-hash step of [`memory_hard_kdf`] over any stream.
/// Reads the stream exactly `memory_cost` times.
pub fn kdf_gather<D: ExtendedDigest + ?Sized>(
    stream: &D,
    memory_cost: u64,
) -> Result<Digest, AppError> {
    if memory_cost == 0 {
        return Err(AppError::ZeroCost);
    }
    let modulus = u128::from(memory_cost) * 64;
    let mut gathered = Vec::with_capacity(memory_cost.min(1 << 24) as usize);
    let mut index = 0u128;
    for _ in 0..memory_cost {
        // index < memory_cost * 64 <= 2^70; it fits u64 whenever memory_cost < 2^58.
        let byte = stream.get(index as u64);
        gathered.push(byte);
        index = (index * 256 + u128::from(byte)) % modulus;
    }
    Ok(HashSpec::Sha256.hash(&gathered))
}

/// Outcome of a nonce search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowResult {
    pub nonce: Option<u32>,
    pub attempts: u64,
    pub candidate: Option<Digest>,
}

/// Number of leading zero bits, most significant bit of byte 0 first.
pub fn leading_zero_bits(d: &Digest) -> Result<u32, AppError> {
    if d.is_empty() {
        return Err(AppError::EmptyDigest);
    }
    let mut count = 0;
    for &b in d.as_bytes() {
        count += b.leading_zeros();
        if b != 0 {
            break;
        }
    }
    Ok(count)
}

/// `SHA-256(SHA-256(header) || nonce as 4-byte big-endian)`.
pub fn pow_candidate(header_hash: &Digest, nonce: u32) -> Digest {
    HashSpec::Sha256.hash_parts(&[header_hash.as_bytes(), &nonce.to_be_bytes()])
}

pub fn verify_pow(header: &[u8], nonce: u32, difficulty: u32) -> bool {
    let base = HashSpec::Sha256.hash(header);
    meets(&pow_candidate(&base, nonce), difficulty)
}

fn meets(candidate: &Digest, difficulty: u32) -> bool {
    leading_zero_bits(candidate).is_ok_and(|z| z >= difficulty)
}

/// Scans nonces `0..=max_nonce` in order and returns the first whose candidate
/// has at least `difficulty` leading zero bits.
pub fn find_pow(header: &[u8], difficulty: u32, max_nonce: u32) -> Result<PowResult, AppError> {
    if difficulty > 256 {
        return Err(AppError::Difficulty(difficulty));
    }
    let base = HashSpec::Sha256.hash(header);
    for nonce in 0..=max_nonce {
        let candidate = pow_candidate(&base, nonce);
        if meets(&candidate, difficulty) {
            return Ok(PowResult {
                nonce: Some(nonce),
                attempts: u64::from(nonce) + 1,
                candidate: Some(candidate),
            });
        }
    }
    Ok(PowResult {
        nonce: None,
        attempts: u64::from(max_nonce) + 1,
        candidate: None,
    })
}

/// Parallel [`find_pow`] with the same result: the lowest qualifying nonce,
/// and `attempts` counted as if the scan were serial.
pub fn find_pow_parallel(
    header: &[u8],
    difficulty: u32,
    max_nonce: u32,
) -> Result<PowResult, AppError> {
    if difficulty > 256 {
        return Err(AppError::Difficulty(difficulty));
    }
    let base = HashSpec::Sha256.hash(header);
    let found = (0..=max_nonce)
        .into_par_iter()
        .map(|nonce| (nonce, pow_candidate(&base, nonce)))
        .find_first(|(_, c)| meets(c, difficulty));
    Ok(match found {
        Some((nonce, candidate)) => PowResult {
            nonce: Some(nonce),
            attempts: u64::from(nonce) + 1,
            candidate: Some(candidate),
        },
        None => PowResult {
            nonce: None,
            attempts: u64::from(max_nonce) + 1,
            candidate: None,
        },
    })
}
