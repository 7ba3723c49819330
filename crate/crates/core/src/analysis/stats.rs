//! A small statistical battery: monobit, byte chi-square, lag-1 serial
//! correlation. Thresholds are loose on purpose; this is a sanity screen,
//! not a distinguisher.

use std::fmt;

use crate::algebra::DigestExt;
use crate::digest::ExtendedDigest;

use super::AnalysisError;

pub const MONOBIT_MIN_BYTES: usize = 1000;
pub const MONOBIT_LIMIT: f64 = 4.0;
pub const CHI_SQUARE_MIN_BYTES: usize = 256 * 20;
pub const CHI_SQUARE_BAND: (f64, f64) = (180.0, 330.0);
pub const SERIAL_MIN_BYTES: usize = 10_000;
pub const SERIAL_LIMIT: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct StatReport {
    pub test: &'static str,
    pub n: usize,
    pub statistic: f64,
    pub passed: bool,
    /// Why a test failed without a meaningful statistic.
    pub reason: Option<&'static str>,
}

impl fmt::Display for StatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} stat={:.6} {}",
            self.test,
            self.n,
            self.statistic,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

fn require(test: &'static str, n: usize, min: usize) -> Result<(), AnalysisError> {
    if n < min {
        Err(AnalysisError::SampleTooSmall { test, n, min })
    } else {
        Ok(())
    }
}

/// `z = (ones - zeros) / sqrt(8n)`; passes when `|z| < 4`.
pub fn monobit(bytes: &[u8]) -> Result<StatReport, AnalysisError> {
    require("monobit", bytes.len(), MONOBIT_MIN_BYTES)?;
    let ones: u64 = bytes.iter().map(|b| u64::from(b.count_ones())).sum();
    let bits = 8 * bytes.len() as u64;
    let z = (ones as f64 - (bits - ones) as f64) / (bits as f64).sqrt();
    Ok(StatReport {
        test: "monobit",
        n: bytes.len(),
        statistic: z,
        passed: z.abs() < MONOBIT_LIMIT,
        reason: None,
    })
}

/// Chi-square of byte frequencies against uniform; passes inside [180, 330].
pub fn byte_chi_square(bytes: &[u8]) -> Result<StatReport, AnalysisError> {
    require("chi-square", bytes.len(), CHI_SQUARE_MIN_BYTES)?;
    let mut counts = [0u64; 256];
    for &b in bytes {
        counts[usize::from(b)] += 1;
    }
    let expected = bytes.len() as f64 / 256.0;
    let chi: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    Ok(StatReport {
        test: "chi-square",
        n: bytes.len(),
        statistic: chi,
        passed: (CHI_SQUARE_BAND.0..=CHI_SQUARE_BAND.1).contains(&chi),
        reason: None,
    })
}

/// Pearson correlation of `(b[i], b[i+1])`; passes when `|r| < 0.02`.
/// A constant sequence has no variance and fails as degenerate.
pub fn serial_correlation(bytes: &[u8]) -> Result<StatReport, AnalysisError> {
    require("serial-correlation", bytes.len(), SERIAL_MIN_BYTES)?;
    let pairs = bytes.len() - 1;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0f64, 0f64, 0f64, 0f64, 0f64);
    for w in bytes.windows(2) {
        let (x, y) = (f64::from(w[0]), f64::from(w[1]));
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    let n = pairs as f64;
    let cov = sxy - sx * sy / n;
    let vx = sxx - sx * sx / n;
    let vy = syy - sy * sy / n;
    let report = |statistic: f64, passed: bool, reason| StatReport {
        test: "serial-correlation",
        n: bytes.len(),
        statistic,
        passed,
        reason,
    };
    if vx <= 0.0 || vy <= 0.0 {
        return Ok(report(f64::NAN, false, Some("degenerate: zero variance")));
    }
    let r = cov / (vx * vy).sqrt();
    Ok(report(r, r.abs() < SERIAL_LIMIT, None))
}

pub fn monobit_z<D: ExtendedDigest + Sync + ?Sized>(
    d: &D,
    n_bytes: usize,
) -> Result<StatReport, AnalysisError> {
    require("monobit", n_bytes, MONOBIT_MIN_BYTES)?;
    monobit(d.par_truncate(n_bytes).as_bytes())
}

pub fn chi_square<D: ExtendedDigest + Sync + ?Sized>(
    d: &D,
    n_bytes: usize,
) -> Result<StatReport, AnalysisError> {
    require("chi-square", n_bytes, CHI_SQUARE_MIN_BYTES)?;
    byte_chi_square(d.par_truncate(n_bytes).as_bytes())
}

pub fn serial<D: ExtendedDigest + Sync + ?Sized>(
    d: &D,
    n_bytes: usize,
) -> Result<StatReport, AnalysisError> {
    require("serial-correlation", n_bytes, SERIAL_MIN_BYTES)?;
    serial_correlation(d.par_truncate(n_bytes).as_bytes())
}

/// All three tests over the same first `n_bytes` bytes.
pub fn battery<D: ExtendedDigest + Sync + ?Sized>(
    d: &D,
    n_bytes: usize,
) -> Result<Vec<StatReport>, AnalysisError> {
    require("battery", n_bytes, SERIAL_MIN_BYTES)?;
    let bytes = d.par_truncate(n_bytes);
    let bytes = bytes.as_bytes();
    Ok(vec![
        monobit(bytes)?,
        byte_chi_square(bytes)?,
        serial_correlation(bytes)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digest::{Constant, Counter};

    #[test]
    fn monobit_extremes() {
        let r = monobit_z(&Constant(0), 1000).unwrap();
        assert!((r.statistic + 8000f64.sqrt()).abs() < 1e-9);
        assert!(!r.passed);
        let r = monobit_z(&Constant(0x55), 1000).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.passed);
        assert!(matches!(
            monobit_z(&Constant(0), 999),
            Err(AnalysisError::SampleTooSmall { .. })
        ));
    }

    #[test]
    fn chi_square_extremes() {
        let r = chi_square(&Counter, 256 * 1000).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(!r.passed);
        let n = 256 * 20;
        let r = chi_square(&Constant(3), n).unwrap();
        // One bin holds everything: (n - n/256)^2/(n/256) + 255 * n/256 = 255 n.
        assert!((r.statistic - 255.0 * n as f64).abs() < 1e-6);
        assert!(!r.passed);
        assert!(chi_square(&Counter, n - 1).is_err());
    }

    #[test]
    fn serial_extremes() {
        let r = serial(&Constant(1), 10_000).unwrap();
        assert!(!r.passed);
        assert!(r.statistic.is_nan());
        assert!(r.reason.is_some());
        // Frozen from an independent numpy computation over 40 periods.
        let r = serial(&Counter, 256 * 40).unwrap();
        assert!((r.statistic - 0.977_228_510_889_675_9).abs() < 1e-9);
        assert!(!r.passed);
        assert!(serial(&Counter, 9_999).is_err());
    }

    #[test]
    fn report_line_format() {
        let r = StatReport {
            test: "monobit",
            n: 1000,
            statistic: -1.5,
            passed: true,
            reason: None,
        };
        assert_eq!(r.to_string(), "monobit n=1000 stat=-1.500000 PASS");
    }
}
