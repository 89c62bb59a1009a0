use thiserror::Error;

/// Errors raised by scheme construction, encoding, decoding and the oracles.
///
/// A detected-but-uncorrectable read is *not* an error: decoders report it
/// as [`DecodeOutcome::Failure`](crate::matrix::DecodeOutcome::Failure).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter (or combination of parameters) violates a construction constraint.
    #[error("invalid parameter: {0}")]
    Param(String),
    /// An arithmetic domain violation, e.g. inverting zero in GF(p).
    #[error("domain error: {0}")]
    Domain(String),
    /// Vector or matrix dimensions do not agree.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A checked integer operation overflowed.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    /// An exhaustive oracle would exceed its feasibility guard.
    #[error("enumeration guard exceeded: {what} needs {needed} > {limit}")]
    Guard {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    /// The decoder was handed erased positions it cannot process.
    #[error("erasures are not supported by the {0} decoder")]
    Erasure(&'static str),
    /// An internal consistency check failed (e.g. two distinct error vectors
    /// within the decoding radius share a syndrome).
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Param(msg.into()))
}

/// Environment variable that raises the enumeration guards of the exhaustive
/// decoders and oracles.
pub const GUARD_ENV: &str = "DPE_CODEC_GUARD_OVERRIDE";

/// Fail with [`Error::Guard`] if `needed` exceeds `default_limit` (or the
/// limit given in [`GUARD_ENV`], when set to a larger integer).
pub fn check_guard(what: &'static str, needed: u128, default_limit: u128) -> Result<()> {
    let limit = std::env::var(GUARD_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u128>().ok())
        .map_or(default_limit, |v| v.max(default_limit));
    if needed > limit {
        return Err(Error::Guard { what, needed, limit });
    }
    Ok(())
}
