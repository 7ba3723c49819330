//! Lazily evaluated, seed-deterministic unbounded digests.
//!
//! An [`ExtendedDigest`] is an index-addressable byte sequence with no end.
//! The constructions in [`constructions`] derive every byte from a finite seed
//! with a handful of hash calls, so any byte can be computed independently,
//! in any order, in constant memory, and reproduced anywhere from a short
//! text [`Descriptor`]. [`OracleDigest`] is the contrasting design that draws
//! real entropy per index and pays for it in memory and reproducibility.
//!
//! ```
//! use lazy_digest::{DigestExt, Descriptor, ExtendedDigest};
//!
//! let d: Descriptor = "lazy{hash=sha256,seed=00}".parse().unwrap();
//! let first = d.truncate(16);
//! assert_eq!(first.as_bytes()[3], d.get(3));
//! assert_eq!(d.serialize().unwrap(), "lazy{hash=sha256,seed=00}");
//! ```

pub mod algebra;
pub mod analysis;
pub mod applications;
pub mod cli;
pub mod constructions;
pub mod descriptor;
pub mod digest;
pub mod hash_backend;

pub use algebra::{ByteTransform, DigestExt};
pub use constructions::{Composite, Hierarchical, Lazy, Rekeying, Sponge, XorMulti};
pub use descriptor::Descriptor;
pub use digest::{Digest, ExtendedDigest, OracleDigest};
pub use hash_backend::HashSpec;
