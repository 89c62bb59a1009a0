//! The `dpe-codec` command-line tool.
//!
//! Every file is JSON: matrices as `{q, rows, cols, data}` (row-major),
//! vectors as `{q, len, data}` with `null` marking an erased entry. `encode`
//! writes a sidecar describing the scheme, which `decode` reads back.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 decoder answered "e",
//! 3 audit failed.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::config::{SchemeConfig, SchemeKind};
use crate::error::{Error, Result};
use crate::matrix::{output_alphabet, DecodeOutcome, QMatrix};
use crate::oracle::audit;
use crate::par::Exec;
use crate::scheme::SchemeParams;
use crate::sim::{compute_clean, inject, Fault, FaultModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DETECTED: i32 = 2;
pub const EXIT_AUDIT_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "dpe-codec",
    version,
    about = "Error-correcting encodings for integer dot-product engines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode an information matrix A' into A = (A' | A'').
    Encode {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Information matrix file.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Scheme sidecar file (default: `<out>.scheme.json`).
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Compute the exact product c = u A.
    Compute {
        #[arg(long = "in")]
        input: PathBuf,
        /// Input vector, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u: Vec<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inject faults into an output vector.
    Inject {
        #[arg(long = "in")]
        input: PathBuf,
        /// Fault model file (`{seed, faults: [...]}`).
        #[arg(long)]
        faults: Option<PathBuf>,
        /// Seed overriding the fault file's.
        #[arg(long)]
        seed: Option<u64>,
        /// Random unit drifts to add.
        #[arg(long)]
        drift: Option<u64>,
        /// Random symbol errors to add (magnitude at most --theta).
        #[arg(long)]
        flip: Option<usize>,
        #[arg(long, default_value_t = 1)]
        theta: i64,
        /// Random erasures to add.
        #[arg(long)]
        short: Option<usize>,
        /// Explicit faults `pos:delta` or `pos:erase`, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        manual: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Full simulation report (clean vector, errors, fault log).
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Decode a read vector; prints the recovered prefix or "e".
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sidecar: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively audit a tiny instance against brute-force oracles.
    Audit {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the parameters of a scheme instance.
    Params {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
}

#[derive(Args, Debug, Default)]
struct SchemeArgs {
    /// Scheme configuration file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeKind>,
    #[arg(long)]
    q: Option<i64>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    theta: Option<i64>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    sigma: Option<usize>,
    #[arg(long)]
    rho: Option<usize>,
    #[arg(long)]
    allow_midpoint: bool,
}

impl SchemeArgs {
    fn resolve(&self) -> Result<SchemeConfig> {
        let mut cfg = match &self.config {
            Some(path) => read_json::<SchemeConfig>(path)?,
            None => SchemeConfig::new(
                self.scheme.ok_or_else(|| usage("--scheme or --config is required"))?,
                self.q.ok_or_else(|| usage("--q is required"))?,
                self.ell.ok_or_else(|| usage("--ell is required"))?,
            ),
        };
        if let Some(s) = self.scheme {
            cfg.scheme = s;
        }
        if let Some(q) = self.q {
            cfg.q = q;
        }
        if let Some(ell) = self.ell {
            cfg.ell = ell;
        }
        macro_rules! overlay {
            ($($f:ident),*) => {$(if self.$f.is_some() { cfg.$f = self.$f.clone(); })*};
        }
        overlay!(n, k, p, tau, theta, variant, sigma, rho);
        cfg.allow_midpoint |= self.allow_midpoint;
        Ok(cfg)
    }
}

fn usage(msg: &str) -> Error {
    Error::Param(msg.to_owned())
}

/// An output vector with entries in `[0, q)`; `None` marks an erasure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorFile {
    pub q: i64,
    pub len: usize,
    pub data: Vec<Option<i64>>,
}

/// Everything `decode` needs to rebuild the scheme used by `encode`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sidecar {
    pub config: SchemeConfig,
    #[serde(skip_deserializing, default)]
    pub params: Option<SchemeParams>,
    /// Serialized scheme state (locators, primes); informational.
    #[serde(default)]
    pub state: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum DecodeFile {
    Prefix {
        prefix: Vec<i64>,
    },
    #[serde(rename = "e")]
    Failure,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Param(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Param(format!("malformed {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Write to `path`, or to stdout when absent.
fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = to_json(value)?;
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Param(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_manual(spec: &str) -> Result<Fault> {
    let (pos, what) = spec
        .split_once(':')
        .ok_or_else(|| usage(&format!("manual fault {spec:?} is not pos:delta or pos:erase")))?;
    let position = pos
        .trim()
        .parse()
        .map_err(|_| usage(&format!("bad position in {spec:?}")))?;
    Ok(match what.trim() {
        "erase" => Fault::Manual {
            position,
            delta: 0,
            erase: true,
        },
        d => Fault::Manual {
            position,
            delta: d
                .trim_start_matches('+')
                .parse()
                .map_err(|_| usage(&format!("bad delta in {spec:?}")))?,
            erase: false,
        },
    })
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Encode {
            scheme,
            input,
            out,
            sidecar,
        } => {
            let cfg = scheme.resolve()?;
            let built = cfg.build()?;
            let aprime: QMatrix = read_json(&input)?;
            let a = built.scheme.encode(&aprime)?;
            emit(&a, out.as_deref())?;
            let side = sidecar.or_else(|| {
                out.as_ref()
                    .map(|o| PathBuf::from(format!("{}.scheme.json", o.display())))
            });
            if let Some(path) = side {
                let car = Sidecar {
                    params: Some(built.scheme.params()),
                    config: cfg,
                    state: built.state,
                };
                emit(&car, Some(&path))?;
            }
            Ok(EXIT_OK)
        }
        Command::Compute { input, u, out } => {
            let a: QMatrix = read_json(&input)?;
            let c = compute_clean(&u, &a)?;
            let file = VectorFile {
                q: output_alphabet(a.q(), a.rows()),
                len: c.len(),
                data: c.into_iter().map(Some).collect(),
            };
            emit(&file, out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Inject {
            input,
            faults,
            seed,
            drift,
            flip,
            theta,
            short,
            manual,
            out,
            log,
        } => {
            let v: VectorFile = read_json(&input)?;
            if v.data.len() != v.len || v.data.iter().any(Option::is_none) {
                return Err(usage("inject expects a complete clean vector"));
            }
            let c: Vec<i64> = v.data.iter().flatten().copied().collect();
            let mut model = match faults {
                Some(path) => read_json::<FaultModel>(&path)?,
                None => FaultModel::default(),
            };
            if let Some(s) = seed {
                model.seed = s;
            }
            if let Some(budget) = drift {
                model.faults.push(Fault::L1Drift { budget });
            }
            if let Some(count) = flip {
                model.faults.push(Fault::SymbolFlip {
                    count,
                    magnitude: theta,
                });
            }
            if let Some(count) = short {
                model.faults.push(Fault::ShortColumn { count });
            }
            for m in &manual {
                model.faults.push(parse_manual(m)?);
            }
            let report = inject(&c, &model, v.q)?;
            let file = VectorFile {
                q: v.q,
                len: v.len,
                data: report.read.clone(),
            };
            emit(&file, out.as_deref())?;
            if let Some(path) = log {
                emit(&report, Some(&path))?;
            }
            Ok(EXIT_OK)
        }
        Command::Decode { input, sidecar, out } => {
            let car: Sidecar = read_json(&sidecar)?;
            let built = car.config.build()?;
            let v: VectorFile = read_json(&input)?;
            if v.data.len() != built.scheme.n() || v.len != v.data.len() {
                return Err(Error::Shape(format!(
                    "read vector has length {}, scheme length is {}",
                    v.data.len(),
                    built.scheme.n()
                )));
            }
            let y = crate::matrix::ReadVector::from_options(&v.data);
            let (file, code) = match built.scheme.decode(&y)? {
                DecodeOutcome::Prefix(prefix) => (DecodeFile::Prefix { prefix }, EXIT_OK),
                DecodeOutcome::Failure => (DecodeFile::Failure, EXIT_DETECTED),
            };
            emit(&file, out.as_deref())?;
            Ok(code)
        }
        Command::Audit {
            scheme,
            sequential,
            out,
        } => {
            let cfg = scheme.resolve()?;
            let built = cfg.build()?;
            let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
            let magnitude = cfg.theta.unwrap_or(1);
            match audit(built.scheme.as_ref(), magnitude, exec) {
                Ok(report) => {
                    emit(&report, out.as_deref())?;
                    Ok(if report.passed { EXIT_OK } else { EXIT_AUDIT_FAILED })
                }
                Err(e @ Error::Guard { .. }) => {
                    let note = serde_json::json!({ "passed": null, "note": e.to_string() });
                    emit(&note, out.as_deref())?;
                    Ok(EXIT_OK)
                }
                Err(e) => Err(e),
            }
        }
        Command::Params { scheme } => {
            let cfg = scheme.resolve()?;
            let built = cfg.build()?;
            let car = Sidecar {
                params: Some(built.scheme.params()),
                config: cfg,
                state: built.state,
            };
            emit(&car, None)?;
            Ok(EXIT_OK)
        }
    }
}

/// Run the tool on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manual_fault_syntax() {
        assert_eq!(
            parse_manual("5:-1").unwrap(),
            Fault::Manual {
                position: 5,
                delta: -1,
                erase: false
            }
        );
        assert_eq!(
            parse_manual("13:+1").unwrap(),
            Fault::Manual {
                position: 13,
                delta: 1,
                erase: false
            }
        );
        assert!(matches!(
            parse_manual("2:erase").unwrap(),
            Fault::Manual { erase: true, .. }
        ));
        assert!(parse_manual("2").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["dpe-codec", "frobnicate"]), EXIT_USAGE);
        assert_eq!(
            run(["dpe-codec", "params", "--scheme", "sec", "--q", "2", "--ell", "3"]),
            EXIT_USAGE
        );
        assert_eq!(
            run([
                "dpe-codec",
                "params",
                "--scheme",
                "sec",
                "--q",
                "2",
                "--ell",
                "3",
                "--n",
                "15"
            ]),
            EXIT_OK
        );
    }

    #[test]
    fn decode_file_format() {
        let f = DecodeFile::Prefix { prefix: vec![1, 2] };
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"outcome":"prefix","prefix":[1,2]}"#
        );
        assert_eq!(
            serde_json::to_string(&DecodeFile::Failure).unwrap(),
            r#"{"outcome":"e"}"#
        );
    }
}
