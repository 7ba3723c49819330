//! Command-line front end. Data goes to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation failure (PoW not
//! found, statistical battery failure).

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::DigestExt;
use crate::analysis::{self, expected_cycle_length};
use crate::applications;
use crate::descriptor::Descriptor;
use crate::digest::Digest;
use crate::hash_backend::HashSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

// Below this many bytes the thread pool costs more than it saves.
const PARALLEL_THRESHOLD: usize = 1 << 16;

#[derive(Debug, Parser)]
#[command(
    name = "lazydigest",
    version,
    about = "Seed-deterministic unbounded digests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Hex,
    Raw,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit bytes [offset, offset + n) of a described stream.
    Gen {
        #[arg(short = 'd', long)]
        descriptor: String,
        #[arg(short = 'n', long = "bytes")]
        n: usize,
        #[arg(long, default_value_t = 0)]
        offset: u64,
        #[arg(long, value_enum, default_value = "hex")]
        format: Format,
    },
    /// Emit the bytes at the given indices.
    Sample {
        #[arg(short = 'd', long)]
        descriptor: String,
        #[arg(short = 'i', long, value_delimiter = ',', num_args = 1..)]
        indices: Vec<u64>,
        #[arg(long, value_enum, default_value = "hex")]
        format: Format,
    },
    /// Run the statistical battery over the first n bytes.
    Stats {
        #[arg(short = 'd', long)]
        descriptor: String,
        #[arg(short = 'n', long = "bytes")]
        n: usize,
    },
    /// Measure rho structure of a toy hash from several start states.
    Cycle {
        #[arg(long)]
        bits: u32,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long)]
        tweak: Option<u8>,
    },
    /// Search for a proof-of-work nonce.
    Pow {
        #[arg(long = "header-hex")]
        header_hex: String,
        #[arg(long)]
        difficulty: u32,
        #[arg(long = "max-nonce", default_value_t = u32::MAX)]
        max_nonce: u32,
    },
    /// Derive a key with the memory-hard KDF.
    Kdf {
        #[arg(long)]
        password: String,
        #[arg(long = "salt-hex")]
        salt_hex: String,
        #[arg(long)]
        cost: u64,
    },
    /// Emit the first n bytes of the reproducible stream for a test id.
    Teststream {
        #[arg(long)]
        id: String,
        #[arg(short = 'n', long = "bytes")]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Computation(String),
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn io(e: std::io::Error) -> Failure {
    Failure::Computation(format!("write failed: {e}"))
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = dispatch(cli.command, out).and_then(|()| out.flush().map_err(io));
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Computation(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Gen {
            descriptor,
            n,
            offset,
            format,
        } => {
            let d = parse_descriptor(&descriptor)?;
            let bytes = if n >= PARALLEL_THRESHOLD {
                d.par_range(offset, n)
            } else {
                d.range(offset, n)
            };
            emit(out, bytes.as_bytes(), format)
        }
        Command::Sample {
            descriptor,
            indices,
            format,
        } => {
            let d = parse_descriptor(&descriptor)?;
            emit(out, &d.sample(&indices), format)
        }
        Command::Stats { descriptor, n } => {
            let d = parse_descriptor(&descriptor)?;
            let reports = analysis::battery(&d, n).map_err(usage)?;
            for r in &reports {
                writeln!(out, "{r}").map_err(io)?;
            }
            match reports.iter().find(|r| !r.passed) {
                Some(r) => Err(Failure::Computation(format!("{} failed", r.test))),
                None => Ok(()),
            }
        }
        Command::Cycle {
            bits,
            starts,
            tweak,
        } => {
            let spec = HashSpec::toy_tweaked(bits, tweak).map_err(usage)?;
            let label = format!("cli:{spec}");
            let (mut cycle_sum, mut tail_sum) = (0u64, 0u64);
            let starts = analysis::random_starts(bits, starts, &label);
            for &s in &starts {
                let r = analysis::detect_cycle(&spec, s).map_err(usage)?;
                cycle_sum += r.cycle_length;
                tail_sum += r.tail_length;
                writeln!(out, "start={s} {r}").map_err(io)?;
            }
            let k = starts.len().max(1) as f64;
            writeln!(
                out,
                "hash={spec} walks={} mean_cycle={:.3} mean_tail={:.3} mean_rho={:.3} expected={:.3}",
                starts.len(),
                cycle_sum as f64 / k,
                tail_sum as f64 / k,
                (cycle_sum + tail_sum) as f64 / k,
                expected_cycle_length(bits)
            )
            .map_err(io)
        }
        Command::Pow {
            header_hex,
            difficulty,
            max_nonce,
        } => {
            let header =
                hex::decode(&header_hex).map_err(|e| usage(format!("--header-hex: {e}")))?;
            let r =
                applications::find_pow_parallel(&header, difficulty, max_nonce).map_err(usage)?;
            match (r.nonce, r.candidate) {
                (Some(nonce), Some(candidate)) => writeln!(
                    out,
                    "nonce={nonce} attempts={} candidate={candidate}",
                    r.attempts
                )
                .map_err(io),
                _ => {
                    writeln!(out, "nonce=none attempts={}", r.attempts).map_err(io)?;
                    Err(Failure::Computation(format!(
                        "no nonce up to {max_nonce} reaches difficulty {difficulty}"
                    )))
                }
            }
        }
        Command::Kdf {
            password,
            salt_hex,
            cost,
        } => {
            let salt = hex::decode(&salt_hex).map_err(|e| usage(format!("--salt-hex: {e}")))?;
            let key =
                applications::memory_hard_kdf(password.as_bytes(), &salt, cost).map_err(usage)?;
            writeln!(out, "{key}").map_err(io)
        }
        Command::Teststream { id, n } => {
            let stream = applications::test_stream(&id).map_err(usage)?;
            emit(out, stream.truncate(n).as_bytes(), Format::Hex)
        }
    }
}

fn parse_descriptor(text: &str) -> Result<Descriptor, Failure> {
    Descriptor::parse(text).map_err(|e| usage(format!("descriptor: {e}")))
}

fn emit(out: &mut dyn Write, bytes: &[u8], format: Format) -> CmdResult {
    match format {
        Format::Raw => out.write_all(bytes).map_err(io),
        Format::Hex if bytes.is_empty() => Ok(()),
        Format::Hex => writeln!(out, "{}", Digest::new(bytes.to_vec())).map_err(io),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["lazydigest"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn zero_lazy() -> String {
        format!("lazy{{hash=sha256,seed={}}}", "0".repeat(64))
    }

    #[test]
    fn gen_first_byte() {
        let (code, out, _) = run_cli(&["gen", "-d", &zero_lazy(), "-n", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "4f\n");
    }

    #[test]
    fn gen_zero_bytes_is_empty() {
        let (code, out, _) = run_cli(&["gen", "-d", &zero_lazy(), "-n", "0"]);
        assert_eq!((code, out.as_str()), (0, ""));
    }

    #[test]
    fn gen_raw_and_offset() {
        let mut full = Vec::new();
        let code = run(
            [
                "x",
                "gen",
                "-d",
                &zero_lazy(),
                "-n",
                "40",
                "--format",
                "raw",
            ],
            &mut full,
            &mut Vec::new(),
        );
        assert_eq!(code, 0);
        assert_eq!(full.len(), 40);
        let (_, tail, _) = run_cli(&["gen", "-d", &zero_lazy(), "-n", "10", "--offset", "30"]);
        assert_eq!(tail.trim(), hex::encode(&full[30..]));
    }

    #[test]
    fn sample_indices() {
        let (code, out, _) = run_cli(&["sample", "-d", &zero_lazy(), "-i", "0,0,5"]);
        assert_eq!(code, 0);
        let bytes = hex::decode(out.trim()).unwrap();
        assert_eq!(bytes[0], 0x4f);
        assert_eq!(bytes[0], bytes[1]);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(
            run_cli(&["gen", "-d", "lazy{seed=GG}", "-n", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_cli(&["gen", "-n", "1"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["cycle", "--bits", "40"]).0, EXIT_USAGE);
        assert_eq!(
            run_cli(&["pow", "--header-hex", "zz", "--difficulty", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_cli(&["pow", "--header-hex", "00", "--difficulty", "300"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_cli(&["stats", "-d", &zero_lazy(), "-n", "10"]).0,
            EXIT_USAGE
        );
        let (code, out, err) =
            run_cli(&["kdf", "--password", "p", "--salt-hex", "", "--cost", "4"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(err.contains("salt"));
        assert_eq!(run_cli(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn pow_commands() {
        let (code, out, _) = run_cli(&["pow", "--header-hex", "00", "--difficulty", "0"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("nonce=0 attempts=1 "));
        let (code, out, _) = run_cli(&[
            "pow",
            "--header-hex",
            "00",
            "--difficulty",
            "200",
            "--max-nonce",
            "50",
        ]);
        assert_eq!(code, EXIT_FAILURE);
        assert_eq!(out, "nonce=none attempts=51\n");
    }

    #[test]
    fn stats_fail_exit_code() {
        let constant = "transform(xor(lazy{hash=sha256,seed=00},lazy{hash=sha256,seed=00}),op=not)";
        let (code, out, _) = run_cli(&["stats", "-d", constant, "-n", "20000"]);
        assert_eq!(code, EXIT_FAILURE);
        assert_eq!(out.lines().count(), 3);
        assert!(out.lines().all(|l| l.ends_with("FAIL")));
    }

    #[test]
    fn kdf_and_teststream() {
        let (code, out, _) = run_cli(&[
            "kdf",
            "--password",
            "pw",
            "--salt-hex",
            "73616c74",
            "--cost",
            "100",
        ]);
        assert_eq!(code, 0);
        let expected = applications::memory_hard_kdf(b"pw", b"salt", 100).unwrap();
        assert_eq!(out.trim(), expected.to_hex());

        let (code, out, _) = run_cli(&["teststream", "--id", "unit_test_1", "-n", "8"]);
        assert_eq!(code, 0);
        let expected = applications::test_stream("unit_test_1")
            .unwrap()
            .truncate(8);
        assert_eq!(out.trim(), expected.to_hex());
    }

    #[test]
    fn cycle_prints_reports_and_expectation() {
        let (code, out, _) = run_cli(&["cycle", "--bits", "8", "--starts", "5"]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with("start="));
        assert!(lines[5].contains("expected=20.053"));
    }
}
