//! Declarative scheme selection, shared by the command-line tool and tests.

use serde::{Deserialize, Serialize};

use crate::double::DoubleScheme;
use crate::error::{Error, Result};
use crate::hamming::{HammingParams, HammingScheme};
use crate::locators::LocatorOptions;
use crate::multi::{LargeAlphabetScheme, RecursiveScheme};
use crate::scheme::Scheme;
use crate::shorten::Shortened;
use crate::single::{ParityScheme, SingleScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// Single parity column (detects one error).
    Parity,
    /// Single-error correction.
    Sec,
    /// Single-error correction, double-error detection.
    SecDed,
    /// Double-error correction.
    Dec,
    /// Double-error correction, triple-error detection.
    DecTed,
    /// Any number of errors via nested Berlekamp codes.
    Recursive,
    /// Berlekamp code over a prime no larger than q.
    LargeAlphabet,
    /// Hamming-metric errors of bounded magnitude, with erasures.
    Hamming,
}

/// Parameters naming one scheme instance. Which fields are required depends
/// on `scheme`; see [`SchemeConfig::build`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub scheme: SchemeKind,
    pub q: i64,
    pub ell: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_midpoint: bool,
}

/// A constructed scheme with its serialized state (locators, primes, ...).
pub struct Built {
    pub scheme: Box<dyn Scheme>,
    pub state: serde_json::Value,
}

fn require<T>(value: Option<T>, name: &str, scheme: SchemeKind) -> Result<T> {
    value.ok_or_else(|| Error::Param(format!("scheme {} needs --{name}", kind_name(scheme))))
}

fn kind_name(kind: SchemeKind) -> String {
    serde_json::to_value(kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn state<T: Serialize>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))
}

impl SchemeConfig {
    pub fn new(scheme: SchemeKind, q: i64, ell: usize) -> Self {
        Self {
            scheme,
            q,
            ell,
            n: None,
            k: None,
            p: None,
            tau: None,
            theta: None,
            variant: None,
            sigma: None,
            rho: None,
            allow_midpoint: false,
        }
    }

    /// Construct the scheme. For the L1 schemes a `k` smaller than the
    /// natural dimension shortens the instance.
    pub fn build(&self) -> Result<Built> {
        use SchemeKind::*;
        let kind = self.scheme;
        if self.variant.is_some() && kind != Recursive {
            return Err(Error::Param(format!("scheme {} takes no --variant", kind_name(kind))));
        }
        let built = match kind {
            Parity => {
                let s = ParityScheme::new(self.q, self.ell, require(self.n, "n", kind)?)?;
                self.finish(s)
            }
            Sec => self.finish(SingleScheme::sec(self.q, self.ell, require(self.n, "n", kind)?)?),
            SecDed => {
                let opts = LocatorOptions {
                    allow_midpoint_suffix: self.allow_midpoint,
                };
                self.finish(SingleScheme::sec_ded(
                    self.q,
                    self.ell,
                    require(self.n, "n", kind)?,
                    opts,
                )?)
            }
            Dec => self.finish(DoubleScheme::dec(self.q, self.ell, require(self.p, "p", kind)?)?),
            DecTed => self.finish(DoubleScheme::dec_ted(self.q, self.ell, require(self.p, "p", kind)?)?),
            Recursive => {
                let trimmed = match self.variant.as_deref() {
                    None | Some("raw") => false,
                    Some("trimmed") => true,
                    Some(other) => return Err(Error::Param(format!("unknown recursive variant {other:?}"))),
                };
                let tau = require(self.tau, "tau", kind)?;
                self.finish(RecursiveScheme::new(
                    self.q,
                    self.ell,
                    tau,
                    require(self.p, "p", kind)?,
                    trimmed,
                )?)
            }
            LargeAlphabet => {
                let tau = require(self.tau, "tau", kind)?;
                let s = match self.n {
                    Some(n) => LargeAlphabetScheme::new(self.q, self.ell, n, tau)?,
                    None => LargeAlphabetScheme::max_length(self.q, self.ell, tau)?,
                };
                self.finish(s)
            }
            Hamming => {
                let params = HammingParams {
                    q: self.q,
                    ell: self.ell,
                    k: require(self.k, "k", kind)?,
                    tau: require(self.tau, "tau", kind)?,
                    theta: self.theta,
                    p: self.p,
                    sigma: self.sigma.unwrap_or(0),
                    rho: self.rho.unwrap_or(0),
                };
                let s = HammingScheme::new(params)?;
                Ok(Built {
                    state: state(&s)?,
                    scheme: Box::new(s),
                })
            }
        }?;
        if kind != Hamming && (self.theta.is_some() || self.rho.is_some() || self.sigma.is_some()) {
            return Err(Error::Param(format!(
                "--theta, --rho and --sigma apply to the hamming scheme only, not {}",
                kind_name(kind)
            )));
        }
        Ok(built)
    }

    fn finish<S: Scheme + Serialize + 'static>(&self, s: S) -> Result<Built> {
        let state = state(&s)?;
        let scheme: Box<dyn Scheme> = match self.k {
            Some(k) if k != s.k() => Box::new(Shortened::new(s, k)?),
            _ => Box::new(s),
        };
        Ok(Built { scheme, state })
    }
}
