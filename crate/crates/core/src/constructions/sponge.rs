use crate::digest::ExtendedDigest;
use crate::hash_backend::{Direct, HashBackend, HashSpec};

use super::{check_seed, Decimal, SpecError, SEP};

pub const DEFAULT_CAPACITY_BITS: u32 = 256;
pub const DEFAULT_RATE_BITS: u32 = 256;
/// 20 decimal digits of `u64::MAX` plus one padding byte.
pub const MIN_RATE_BITS: u32 = 21 * 8;

/// Single-absorb sponge over a hash-expansion permutation.
///
/// The state is `rate || capacity` bytes. Construction fills it with
/// `expand(seed)`; a query XORs the padded decimal index into the rate part,
/// applies `expand` once more, and returns the first rate byte. `expand(x)` is
/// `H(x || 0 || "0") || H(x || 0 || "1") || ...` cut to the state width.
///
/// The capacity bytes are never output directly.
#[derive(Debug, Clone)]
pub struct Sponge {
    seed: Vec<u8>,
    hash: HashSpec,
    rate_bits: u32,
    capacity_bits: u32,
    initial_state: Vec<u8>,
}

impl PartialEq for Sponge {
    fn eq(&self, other: &Self) -> bool {
        self.seed == other.seed
            && self.hash == other.hash
            && self.rate_bits == other.rate_bits
            && self.capacity_bits == other.capacity_bits
    }
}

impl Eq for Sponge {}

impl std::hash::Hash for Sponge {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.seed.hash(state);
        std::hash::Hash::hash(&self.hash, state);
        self.rate_bits.hash(state);
        self.capacity_bits.hash(state);
    }
}

impl Sponge {
    pub fn new(seed: impl Into<Vec<u8>>, hash: HashSpec) -> Result<Self, SpecError> {
        Self::with_widths(seed, hash, DEFAULT_RATE_BITS, DEFAULT_CAPACITY_BITS)
    }

    pub fn with_widths(
        seed: impl Into<Vec<u8>>,
        hash: HashSpec,
        rate_bits: u32,
        capacity_bits: u32,
    ) -> Result<Self, SpecError> {
        let seed = seed.into();
        check_seed(&seed)?;
        for (what, bits) in [("rate", rate_bits), ("capacity", capacity_bits)] {
            if bits < 8 || bits % 8 != 0 {
                return Err(SpecError::SpongeWidth { what, bits });
            }
        }
        if rate_bits < MIN_RATE_BITS {
            return Err(SpecError::RateTooSmall { bits: rate_bits });
        }
        let width = (rate_bits + capacity_bits) as usize / 8;
        let initial_state = expand(&Direct, &hash, &seed, width);
        Ok(Sponge {
            seed,
            hash,
            rate_bits,
            capacity_bits,
            initial_state,
        })
    }

    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    pub fn hash_spec(&self) -> HashSpec {
        self.hash
    }

    pub fn rate_bits(&self) -> u32 {
        self.rate_bits
    }

    pub fn capacity_bits(&self) -> u32 {
        self.capacity_bits
    }

    fn rate_len(&self) -> usize {
        self.rate_bits as usize / 8
    }

    fn width(&self) -> usize {
        self.initial_state.len()
    }

    /// State after seeding, before any index is absorbed.
    pub fn initial_state(&self) -> &[u8] {
        &self.initial_state
    }

    /// State after absorbing `index` and permuting.
    pub fn absorb(&self, index: u64) -> Vec<u8> {
        self.absorb_with(&Direct, index)
    }

    fn absorb_with<B: HashBackend>(&self, backend: &B, index: u64) -> Vec<u8> {
        let mut state = self.initial_state.clone();
        let dec = Decimal::new(index);
        let digits = dec.as_bytes();
        // pad10*: digits || 0x80 || 0x00...; fits because rate >= MIN_RATE_BITS.
        for (s, d) in state.iter_mut().zip(digits) {
            *s ^= d;
        }
        state[digits.len()] ^= 0x80;
        debug_assert!(digits.len() < self.rate_len());
        expand(backend, &self.hash, &state, self.width())
    }

    /// Reads one output byte from the rate part of `state`.
    pub fn squeeze(&self, state: &[u8]) -> u8 {
        state[..self.rate_len()][0]
    }

    pub fn get_with<B: HashBackend>(&self, backend: &B, index: u64) -> u8 {
        let state = self.absorb_with(backend, index);
        self.squeeze(&state)
    }
}

fn expand<B: HashBackend>(backend: &B, hash: &HashSpec, input: &[u8], width: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(width + hash.output_len());
    let mut j = 0u64;
    while out.len() < width {
        let block = backend.hash_parts(hash, &[input, SEP, Decimal::new(j).as_bytes()]);
        out.extend_from_slice(block.as_bytes());
        j += 1;
    }
    out.truncate(width);
    out
}

impl ExtendedDigest for Sponge {
    fn get(&self, index: u64) -> u8 {
        self.get_with(&Direct, index)
    }
}
