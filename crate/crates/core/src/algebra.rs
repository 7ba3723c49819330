//! Operations on extended digests.
//!
//! Lazy combinators ([`Xor`], [`Slice`], [`Transform`]) map streams to
//! streams and evaluate their operands only at queried indices; they never
//! cache. Projections ([`DigestExt::truncate`], [`DigestExt::sample`],
//! [`DigestExt::fold`]) map streams to finite values.
//!
//! Index arithmetic in [`Slice`] wraps modulo 2^64, so slice composition is
//! exact over the whole index space.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::digest::{Digest, ExtendedDigest};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("slice step must be >= 1")]
    ZeroStep,
}

/// A total function on bytes.
///
/// `Not` and `Add` have names and can appear in descriptors; `Custom` wraps
/// an arbitrary closure and cannot be serialized.
#[derive(Clone)]
pub enum ByteTransform {
    Not,
    Add(u8),
    Custom(Arc<dyn Fn(u8) -> u8 + Send + Sync>),
}

impl ByteTransform {
    pub fn identity() -> Self {
        ByteTransform::Add(0)
    }

    pub fn from_fn(f: impl Fn(u8) -> u8 + Send + Sync + 'static) -> Self {
        ByteTransform::Custom(Arc::new(f))
    }

    #[inline]
    pub fn apply(&self, b: u8) -> u8 {
        match self {
            ByteTransform::Not => !b,
            ByteTransform::Add(k) => b.wrapping_add(*k),
            ByteTransform::Custom(f) => f(b),
        }
    }

    /// `self` followed by `next`.
    pub fn then(self, next: ByteTransform) -> ByteTransform {
        ByteTransform::from_fn(move |b| next.apply(self.apply(b)))
    }

    /// Descriptor name, or `None` for closures.
    pub fn name(&self) -> Option<String> {
        match self {
            ByteTransform::Not => Some("not".into()),
            ByteTransform::Add(k) => Some(format!("add:{k}")),
            ByteTransform::Custom(_) => None,
        }
    }
}

impl PartialEq for ByteTransform {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ByteTransform::Not, ByteTransform::Not) => true,
            (ByteTransform::Add(a), ByteTransform::Add(b)) => a == b,
            (ByteTransform::Custom(a), ByteTransform::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Debug for ByteTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(n) => write!(f, "ByteTransform({n})"),
            None => f.write_str("ByteTransform(<fn>)"),
        }
    }
}

/// `a.get(i) ^ b.get(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Xor<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: ExtendedDigest, B: ExtendedDigest> ExtendedDigest for Xor<A, B> {
    #[inline]
    fn get(&self, index: u64) -> u8 {
        self.left.get(index) ^ self.right.get(index)
    }
}

/// `inner.get(start + i * step)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice<D> {
    inner: D,
    start: u64,
    step: u64,
}

impl<D> Slice<D> {
    pub fn new(inner: D, start: u64, step: u64) -> Result<Self, AlgebraError> {
        if step == 0 {
            return Err(AlgebraError::ZeroStep);
        }
        Ok(Slice { inner, start, step })
    }

    pub fn inner(&self) -> &D {
        &self.inner
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn step(&self) -> u64 {
        self.step
    }
}

impl<D: ExtendedDigest> ExtendedDigest for Slice<D> {
    #[inline]
    fn get(&self, index: u64) -> u8 {
        self.inner
            .get(self.start.wrapping_add(index.wrapping_mul(self.step)))
    }
}

/// `f(inner.get(i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform<D> {
    pub inner: D,
    pub f: ByteTransform,
}

impl<D: ExtendedDigest> ExtendedDigest for Transform<D> {
    #[inline]
    fn get(&self, index: u64) -> u8 {
        self.f.apply(self.inner.get(index))
    }
}

/// Wraps a stream and counts how many times it is read.
#[derive(Debug, Default)]
pub struct CountingDigest<D> {
    inner: D,
    reads: AtomicU64,
}

impl<D> CountingDigest<D> {
    pub fn new(inner: D) -> Self {
        CountingDigest {
            inner,
            reads: AtomicU64::new(0),
        }
    }

    pub fn reads(&self) -> u64 {
        self.reads.load(Ordering::Relaxed)
    }
}

impl<D: ExtendedDigest> ExtendedDigest for CountingDigest<D> {
    fn get(&self, index: u64) -> u8 {
        self.reads.fetch_add(1, Ordering::Relaxed);
        self.inner.get(index)
    }
}

/// Combinators and projections available on every [`ExtendedDigest`].
pub trait DigestExt: ExtendedDigest {
    fn xor<O: ExtendedDigest>(self, other: O) -> Xor<Self, O>
    where
        Self: Sized,
    {
        Xor {
            left: self,
            right: other,
        }
    }

    fn slice(self, start: u64, step: u64) -> Result<Slice<Self>, AlgebraError>
    where
        Self: Sized,
    {
        Slice::new(self, start, step)
    }

    fn transform(self, f: ByteTransform) -> Transform<Self>
    where
        Self: Sized,
    {
        Transform { inner: self, f }
    }

    /// The first `n` bytes.
    fn truncate(&self, n: usize) -> Digest {
        self.range(0, n)
    }

    /// Bytes `[start, start + len)`, indices wrapping modulo 2^64.
    fn range(&self, start: u64, len: usize) -> Digest {
        let v: Vec<u8> = (0..len as u64)
            .map(|i| self.get(start.wrapping_add(i)))
            .collect();
        Digest::new(v)
    }

    /// Same bytes as [`DigestExt::range`], computed across the rayon pool.
    fn par_range(&self, start: u64, len: usize) -> Digest
    where
        Self: Sync,
    {
        let v: Vec<u8> = (0..len as u64)
            .into_par_iter()
            .map(|i| self.get(start.wrapping_add(i)))
            .collect();
        Digest::new(v)
    }

    fn par_truncate(&self, n: usize) -> Digest
    where
        Self: Sync,
    {
        self.par_range(0, n)
    }

    /// Bytes at the given indices, in order, duplicates allowed.
    fn sample(&self, indices: &[u64]) -> Vec<u8> {
        indices.iter().map(|&i| self.get(i)).collect()
    }

    /// Left fold over the first `n` bytes.
    fn fold<A, F>(&self, f: F, init: A, n: u64) -> A
    where
        F: FnMut(A, u8) -> A,
    {
        (0..n).map(|i| self.get(i)).fold(init, f)
    }
}

impl<D: ExtendedDigest + ?Sized> DigestExt for D {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Lazy;
    use crate::digest::{Constant, Counter};
    use crate::hash_backend::HashSpec;
    use proptest::prelude::*;

    fn lazy(seed: &[u8]) -> Lazy {
        Lazy::new(seed.to_vec(), HashSpec::Sha256).unwrap()
    }

    #[test]
    fn xor_identities() {
        let d = lazy(b"a");
        let e = lazy(b"b");
        for i in 0..256 {
            assert_eq!((&d).xor(&d).get(i), 0);
            assert_eq!((&d).xor(Constant(0)).get(i), d.get(i));
            assert_eq!((&d).xor(&e).get(i), (&e).xor(&d).get(i));
        }
    }

    #[test]
    fn slice_examples() {
        let d = lazy(b"a");
        let s = (&d).slice(5, 3).unwrap();
        assert_eq!(s.get(2), d.get(11));
        let id = (&d).slice(0, 1).unwrap();
        assert!((0..256).all(|i| id.get(i) == d.get(i)));
        assert_eq!((&d).slice(0, 0).unwrap_err(), AlgebraError::ZeroStep);
    }

    #[test]
    fn slice_wraps_at_the_top_of_the_index_space() {
        let s = Counter.slice(u64::MAX, 1).unwrap();
        assert_eq!(s.get(0), 255);
        assert_eq!(s.get(1), 0);
    }

    #[test]
    fn transform_examples() {
        let d = lazy(b"a");
        for i in 0..256 {
            assert_eq!((&d).transform(ByteTransform::identity()).get(i), d.get(i));
            assert_eq!((&d).transform(ByteTransform::Not).get(i), d.get(i) ^ 0xff);
        }
        let f = ByteTransform::Add(3);
        let g = ByteTransform::from_fn(|b| b.rotate_left(1));
        let stacked = (&d).transform(f.clone()).transform(g.clone());
        let composed = (&d).transform(f.then(g));
        assert!((0..256).all(|i| stacked.get(i) == composed.get(i)));
    }

    #[test]
    fn projections() {
        let d = lazy(b"a");
        assert!(d.truncate(0).is_empty());
        let t = d.truncate(64);
        assert_eq!(&d.truncate(100).as_bytes()[..64], t.as_bytes());
        assert_eq!((&d).xor(&d).truncate(16).as_bytes(), &[0u8; 16]);
        assert!(d.sample(&[]).is_empty());
        let two = d.sample(&[9, 9]);
        assert_eq!(two[0], two[1]);
        let idx: Vec<u64> = (0..64).collect();
        assert_eq!(d.sample(&idx), t.as_bytes());
        assert_eq!(d.fold(|a: u32, b| a + u32::from(b), 7, 0), 7);
        let sum: u64 = t.as_bytes().iter().map(|&b| u64::from(b)).sum();
        assert_eq!(d.fold(|a: u64, b| a + u64::from(b), 0, 64), sum);
        assert_eq!((&d).xor(&d).fold(|a: u64, b| a + u64::from(b), 0, 500), 0);
    }

    #[test]
    fn parallel_matches_serial() {
        let d = lazy(b"par");
        assert_eq!(d.par_truncate(10_000), d.truncate(10_000));
        assert_eq!(d.par_range(u64::MAX - 5, 10), d.range(u64::MAX - 5, 10));
    }

    #[test]
    fn combinators_are_lazy() {
        let a = CountingDigest::new(lazy(b"a"));
        let b = CountingDigest::new(lazy(b"b"));
        let x = (&a).xor(&b);
        let s = (&x).slice(3, 2).unwrap();
        let t = (&s).transform(ByteTransform::Not);
        assert_eq!((a.reads(), b.reads()), (0, 0));
        let _ = t.get(0);
        assert_eq!((a.reads(), b.reads()), (1, 1));
        let _ = x.truncate(50);
        assert_eq!((a.reads(), b.reads()), (51, 51));
    }

    #[test]
    fn custom_transform_equality_is_identity() {
        let f = ByteTransform::from_fn(|b| b);
        assert_eq!(f, f.clone());
        assert_ne!(f, ByteTransform::from_fn(|b| b));
        assert_eq!(ByteTransform::Add(4), ByteTransform::Add(4));
        assert_eq!(f.name(), None);
        assert_eq!(ByteTransform::Add(4).name().unwrap(), "add:4");
    }

    proptest! {
        #[test]
        fn slice_composition(a in any::<u64>(), s in 1u64.., b in any::<u64>(), t in 1u64.., i in any::<u64>()) {
            let step = s.wrapping_mul(t);
            prop_assume!(step != 0);
            let d = lazy(b"p");
            let outer = (&d).slice(a, s).unwrap().slice(b, t).unwrap();
            let flat = (&d).slice(a.wrapping_add(b.wrapping_mul(s)), step);
            prop_assert_eq!(outer.get(i), flat.unwrap().get(i));
        }

        #[test]
        fn truncate_prefix(seed in proptest::collection::vec(any::<u8>(), 1..40), n in 0usize..200, k in 0usize..50) {
            let d = lazy(&seed);
            let short = d.truncate(n);
            let long = d.truncate(n + k);
            prop_assert_eq!(short.as_bytes(), &long.as_bytes()[..n]);
        }
    }
}
