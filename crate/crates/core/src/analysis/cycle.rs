//! Rho-structure measurement for iterated toy hashes.

use std::fmt;

use crate::constructions::Lazy;
use crate::digest::ExtendedDigest;
use crate::hash_backend::{HashError, HashSpec};

/// Shape of the sequence `x, f(x), f(f(x)), ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleReport {
    /// Steps taken before the first state that lies on the cycle.
    pub tail_length: u64,
    /// Number of distinct states on the cycle.
    pub cycle_length: u64,
    /// Function evaluations spent finding the above.
    pub total_steps: u64,
}

impl CycleReport {
    /// Steps until the first repeated state: tail plus one loop.
    pub fn rho_length(&self) -> u64 {
        self.tail_length + self.cycle_length
    }
}

impl fmt::Display for CycleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tail={} cycle={} steps={}",
            self.tail_length, self.cycle_length, self.total_steps
        )
    }
}

/// Brent's cycle detection on an arbitrary map.
///
/// Terminates for any map on a finite state space.
pub fn brent<T, F>(mut f: F, start: T) -> CycleReport
where
    T: Copy + Eq,
    F: FnMut(T) -> T,
{
    let mut steps = 0u64;
    let mut step = |x: T, steps: &mut u64| {
        *steps += 1;
        f(x)
    };

    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = start;
    let mut hare = step(start, &mut steps);
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = step(hare, &mut steps);
        lam += 1;
    }

    let mut tortoise = start;
    let mut hare = start;
    for _ in 0..lam {
        hare = step(hare, &mut steps);
    }
    let mut mu = 0u64;
    while tortoise != hare {
        tortoise = step(tortoise, &mut steps);
        hare = step(hare, &mut steps);
        mu += 1;
    }

    CycleReport {
        tail_length: mu,
        cycle_length: lam,
        total_steps: steps,
    }
}

/// Rho structure of the toy map `spec` starting from `start`.
pub fn detect_cycle(spec: &HashSpec, start: u32) -> Result<CycleReport, HashError> {
    let HashSpec::Toy { bits, .. } = *spec else {
        return Err(HashError::NotToy(*spec));
    };
    // Validates the start state.
    spec.toy_iterate(start)?;
    Ok(brent(|s| spec.toy_step(bits, s), start))
}

/// `sqrt(pi * 2^b / 2)`: the birthday-paradox expectation for a random map
/// on `2^b` states.
pub fn expected_cycle_length(state_bits: u32) -> f64 {
    (std::f64::consts::PI * 2f64.powi(state_bits as i32) / 2.0).sqrt()
}

/// Deterministic pseudo-random start states derived from `label`.
pub fn random_starts(bits: u32, count: usize, label: &str) -> Vec<u32> {
    let seed = HashSpec::Sha256.hash(format!("cycle-starts:{label}").as_bytes());
    let stream = Lazy::new(seed.into_vec(), HashSpec::Sha256).expect("seed is 32 bytes");
    let mask = if bits >= 32 {
        u32::MAX
    } else {
        (1u32 << bits) - 1
    };
    (0..count as u64)
        .map(|k| {
            let word = (0..4).fold(0u32, |acc, j| (acc << 8) | u32::from(stream.get(4 * k + j)));
            word & mask
        })
        .collect()
}

/// Aggregate of cycle measurements over several toy functions.
#[derive(Debug, Clone, PartialEq)]
pub struct BirthdaySummary {
    pub bits: u32,
    pub walks: usize,
    pub mean_cycle_length: f64,
    pub mean_tail_length: f64,
    pub expected: f64,
}

impl BirthdaySummary {
    pub fn mean_rho_length(&self) -> f64 {
        self.mean_cycle_length + self.mean_tail_length
    }

    /// `mean_cycle_length / expected - 1`.
    pub fn cycle_deviation(&self) -> f64 {
        self.mean_cycle_length / self.expected - 1.0
    }

    /// `mean_rho_length / expected - 1`.
    pub fn rho_deviation(&self) -> f64 {
        self.mean_rho_length() / self.expected - 1.0
    }
}

impl fmt::Display for BirthdaySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bits={} walks={} mean_cycle={:.3} mean_tail={:.3} mean_rho={:.3} expected={:.3}",
            self.bits,
            self.walks,
            self.mean_cycle_length,
            self.mean_tail_length,
            self.mean_rho_length(),
            self.expected
        )
    }
}

/// Runs `starts_per_function` walks on each tweaked toy hash of width `bits`.
pub fn birthday_experiment(
    bits: u32,
    starts_per_function: usize,
    tweaks: &[u8],
) -> Result<BirthdaySummary, HashError> {
    let mut cycle_sum = 0u64;
    let mut tail_sum = 0u64;
    let mut walks = 0usize;
    for &tweak in tweaks {
        let spec = HashSpec::toy_tweaked(bits, Some(tweak))?;
        for start in random_starts(bits, starts_per_function, &format!("{bits}/{tweak}")) {
            let r = detect_cycle(&spec, start)?;
            cycle_sum += r.cycle_length;
            tail_sum += r.tail_length;
            walks += 1;
        }
    }
    let n = walks.max(1) as f64;
    Ok(BirthdaySummary {
        bits,
        walks,
        mean_cycle_length: cycle_sum as f64 / n,
        mean_tail_length: tail_sum as f64 / n,
        expected: expected_cycle_length(bits),
    })
}
