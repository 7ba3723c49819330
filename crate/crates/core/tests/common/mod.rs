#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use lazy_digest::algebra::ByteTransform;
use lazy_digest::constructions::{Composite, Hierarchical, Lazy, Rekeying, Sponge, XorMulti};
use lazy_digest::{Descriptor, HashSpec};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const KINDS: [&str; 6] = [
    "lazy",
    "hierarchical",
    "rekey",
    "sponge",
    "xor-multi",
    "composite",
];

pub const REAL_HASHES: [HashSpec; 4] = [
    HashSpec::Sha256,
    HashSpec::Sha512,
    HashSpec::Sha3_256,
    HashSpec::Blake2b,
];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn seed_bytes(rng: &mut StdRng) -> Vec<u8> {
    let len = rng.gen_range(1..=48);
    (0..len).map(|_| rng.gen()).collect()
}

pub fn hash(rng: &mut StdRng, allow_toy: bool) -> HashSpec {
    if allow_toy && rng.gen_bool(0.2) {
        let tweak = rng.gen_bool(0.5).then(|| rng.gen());
        HashSpec::toy_tweaked(rng.gen_range(4..=24), tweak).unwrap()
    } else {
        *REAL_HASHES.choose(rng).unwrap()
    }
}

/// Mix of small, mid-range and extreme indices.
pub fn index(rng: &mut StdRng) -> u64 {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(0..1024),
        1 => rng.gen_range(0..1 << 40),
        2 => u64::MAX - rng.gen_range(0..1024),
        _ => rng.gen(),
    }
}

pub fn lazy(rng: &mut StdRng, toy: bool) -> Lazy {
    Lazy::new(seed_bytes(rng), hash(rng, toy)).unwrap()
}

pub fn hierarchical(rng: &mut StdRng, toy: bool) -> Hierarchical {
    let chunk = rng.gen_range(1..=1u64 << 20);
    let epoch = chunk * rng.gen_range(2..=1u64 << 20);
    Hierarchical::with_sizes(seed_bytes(rng), hash(rng, toy), epoch, chunk).unwrap()
}

pub fn rekey(rng: &mut StdRng, toy: bool) -> Rekeying {
    let interval = if rng.gen_bool(0.5) {
        rng.gen_range(1..=4096)
    } else {
        rng.gen_range(1..=1u64 << 33)
    };
    Rekeying::with_interval(seed_bytes(rng), hash(rng, toy), interval).unwrap()
}

pub fn sponge(rng: &mut StdRng, toy: bool) -> Sponge {
    let rate = 8 * rng.gen_range(21..=64);
    let capacity = 8 * rng.gen_range(1..=64);
    Sponge::with_widths(seed_bytes(rng), hash(rng, toy), rate, capacity).unwrap()
}

pub fn xor_multi(rng: &mut StdRng, toy: bool) -> XorMulti {
    let mut pool = REAL_HASHES.to_vec();
    if toy {
        pool.push(HashSpec::toy(8).unwrap());
        pool.push(HashSpec::toy_tweaked(16, Some(3)).unwrap());
    }
    pool.shuffle(rng);
    let m = rng.gen_range(2..=pool.len());
    pool.truncate(m);
    XorMulti::new(seed_bytes(rng), pool).unwrap()
}

pub fn composite(rng: &mut StdRng, toy: bool) -> Composite {
    Composite::new(
        xor_multi(rng, toy),
        rekey(rng, toy),
        hierarchical(rng, toy),
        sponge(rng, toy),
    )
}

pub fn construction(rng: &mut StdRng, kind: &str, toy: bool) -> Descriptor {
    match kind {
        "lazy" => Descriptor::Lazy(lazy(rng, toy)),
        "hierarchical" => Descriptor::Hierarchical(hierarchical(rng, toy)),
        "rekey" => Descriptor::Rekey(rekey(rng, toy)),
        "sponge" => Descriptor::Sponge(sponge(rng, toy)),
        "xor-multi" => Descriptor::XorMulti(xor_multi(rng, toy)),
        "composite" => Descriptor::Composite(composite(rng, toy)),
        other => panic!("unknown kind {other}"),
    }
}

pub fn named_transform(rng: &mut StdRng) -> ByteTransform {
    if rng.gen_bool(0.3) {
        ByteTransform::Not
    } else {
        ByteTransform::Add(rng.gen())
    }
}

/// A random serializable descriptor tree of at most `depth` combinator levels.
pub fn tree(rng: &mut StdRng, depth: u32) -> Descriptor {
    if depth == 0 || rng.gen_bool(0.4) {
        let kind = *KINDS.choose(rng).unwrap();
        return construction(rng, kind, true);
    }
    match rng.gen_range(0..3) {
        0 => Descriptor::xor(tree(rng, depth - 1), tree(rng, depth - 1)),
        1 => {
            let start = index(rng);
            let step = rng.gen_range(1..=u64::MAX);
            Descriptor::slice(tree(rng, depth - 1), start, step).unwrap()
        }
        _ => Descriptor::transform(tree(rng, depth - 1), named_transform(rng)),
    }
}

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_lazydigest"))
}

/// Runs the CLI in a fresh process and returns (exit code, stdout bytes).
pub fn run_bin(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(bin())
        .args(args)
        .output()
        .expect("spawn lazydigest");
    (out.status.code().unwrap_or(-1), out.stdout)
}

pub fn run_bin_hex(args: &[&str]) -> Vec<u8> {
    let (code, out) = run_bin(args);
    assert_eq!(code, 0, "lazydigest {args:?} exited with {code}");
    let text = String::from_utf8(out).unwrap();
    hex::decode(text.trim()).unwrap()
}

/// Prints the acceptance line and returns whether it passed.
pub fn report(id: &str, name: &str, passed: bool, detail: impl std::fmt::Display) -> bool {
    println!(
        "[{}] {id} {name}: {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    passed
}
