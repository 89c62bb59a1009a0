//! Brute-force ground truth: enumeration of the induced code
//! `{u E(A')}`, its minimum distance over prefix-distinct pairs, and
//! nearest-codeword decoding.
//!
//! Nothing here samples: every routine either enumerates completely or fails
//! with [`Error::Guard`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{check_guard, Error, Result};
use crate::matrix::{DecodeOutcome, ReadVector};
use crate::metric::Metric;
use crate::par::Exec;
use crate::scheme::Scheme;
use crate::sweep::{classify, Pattern};

/// Default bound on the number of `(A', u)` pairs enumerated.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InducedWord {
    pub prefix: Vec<i64>,
    pub word: Vec<i64>,
}

/// Every distinct codeword of the induced code, sorted.
pub fn enumerate_induced_code(scheme: &dyn Scheme) -> Result<Vec<InducedWord>> {
    let (q, ell, k) = (scheme.q(), scheme.ell(), scheme.k());
    let qq = q as u128;
    let pairs = qq
        .checked_pow((ell * k) as u32)
        .and_then(|a| a.checked_mul(qq.checked_pow(ell as u32)?))
        .unwrap_or(u128::MAX);
    check_guard("induced-code enumeration", pairs, ENUMERATION_GUARD)?;
    // The scheme is separable, so it suffices to encode each possible row once.
    let rows = (0..q.pow(k as u32))
        .map(|idx| scheme.encode_row(&digits(idx, q, k)))
        .collect::<Result<Vec<_>>>()?;
    let n = scheme.n();
    let mut words = BTreeSet::new();
    for pick in 0..(rows.len() as u64).pow(ell as u32) {
        let chosen = digits(pick as i64, rows.len() as i64, ell);
        for ui in 0..q.pow(ell as u32) {
            let u = digits(ui, q, ell);
            let mut c = vec![0i64; n];
            for (&ui, &r) in u.iter().zip(&chosen) {
                for (cj, &a) in c.iter_mut().zip(&rows[r as usize]) {
                    *cj += ui * a;
                }
            }
            words.insert(c);
        }
    }
    Ok(words
        .into_iter()
        .map(|word| InducedWord {
            prefix: word[..k].to_vec(),
            word,
        })
        .collect())
}

fn digits(mut x: i64, base: i64, len: usize) -> Vec<i64> {
    (0..len)
        .map(|_| {
            let d = x % base;
            x /= base;
            d
        })
        .collect()
}

/// Smallest distance between codewords with distinct prefixes; `None` when
/// fewer than two distinct prefixes exist.
pub fn induced_min_distance(words: &[InducedWord], metric: Metric, exec: Exec) -> Result<Option<u64>> {
    let best = exec.try_map((0..words.len()).collect(), |i| {
        let mut best: Option<u64> = None;
        for other in &words[i + 1..] {
            if other.prefix != words[i].prefix {
                let d = metric.distance(&words[i].word, &other.word)?;
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        Ok::<_, Error>(best)
    })?;
    Ok(best.into_iter().flatten().min())
}

/// Distance on the non-erased coordinates.
fn punctured_distance(metric: Metric, y: &ReadVector, c: &[i64]) -> u64 {
    y.values()
        .iter()
        .zip(c)
        .zip(y.erased())
        .filter(|(_, &e)| !e)
        .map(|((&a, &b), _)| match metric {
            Metric::L1 => (a - b).unsigned_abs(),
            Metric::Hamming => u64::from(a != b),
        })
        .sum()
}

/// The prefix of a codeword within distance `tau` of `y` (erased entries
/// ignored), or `"e"` when there is none.
///
/// Fails with [`Error::Internal`] if codewords with different prefixes lie
/// within distance `tau`, which would contradict the distance audit.
pub fn nearest_prefix_decode(y: &ReadVector, words: &[InducedWord], metric: Metric, tau: u64) -> Result<DecodeOutcome> {
    let mut found: Option<&[i64]> = None;
    for w in words {
        if w.word.len() != y.len() {
            return Err(Error::Shape(format!(
                "read vector of length {}, codewords of length {}",
                y.len(),
                w.word.len()
            )));
        }
        if punctured_distance(metric, y, &w.word) <= tau {
            match found {
                Some(p) if p != w.prefix.as_slice() => {
                    return Err(Error::Internal(format!(
                        "codewords with prefixes {p:?} and {:?} both within distance {tau}",
                        w.prefix
                    )))
                }
                _ => found = Some(&w.prefix),
            }
        }
    }
    Ok(found.map_or(DecodeOutcome::Failure, |p| DecodeOutcome::Prefix(p.to_vec())))
}

/// Outcome of an exhaustive audit of a tiny scheme instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub scheme: String,
    pub codewords: usize,
    pub distinct_prefixes: usize,
    pub min_distance: Option<u64>,
    /// `2 tau + sigma + 1`.
    pub required_distance: u64,
    pub distance_ok: bool,
    /// Decodes compared against the nearest-codeword oracle.
    pub decode_trials: u64,
    /// Errors within `tau` not corrected, or within `tau + sigma` miscorrected.
    pub decode_violations: u64,
    /// Disagreements between the scheme decoder and the oracle within `tau`.
    pub oracle_mismatches: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Enumerate the induced code, check its distance against the design
/// target, and compare the scheme decoder with the oracle on every error of
/// weight at most `tau + sigma` (L1 weight, or Hamming weight with values in
/// `[-magnitude, magnitude]`) around every codeword.
pub fn audit(scheme: &dyn Scheme, magnitude: i64, exec: Exec) -> Result<AuditReport> {
    let params = scheme.params();
    let (tau, sigma) = (params.tau as u64, params.sigma as u64);
    let metric = scheme.metric();
    let words = enumerate_induced_code(scheme)?;
    let prefixes: BTreeSet<&[i64]> = words.iter().map(|w| w.prefix.as_slice()).collect();
    let min_distance = induced_min_distance(&words, metric, exec)?;
    let required = 2 * tau + sigma + 1;
    let distance_ok = min_distance.is_none_or(|d| d >= required);
    let pattern = match metric {
        Metric::L1 => Pattern::l1_up_to(tau + sigma),
        Metric::Hamming => Pattern::Hamming {
            max_weight: (tau + sigma) as usize,
            magnitude,
            erasures: 0,
        },
    };
    let patterns = pattern.enumerate(scheme.n());
    let tallies = exec.try_map(words.iter().collect(), |w| {
        let (mut trials, mut violations, mut mismatches) = (0u64, 0u64, 0u64);
        for (e, _) in &patterns {
            let weight = match metric {
                Metric::L1 => e.iter().map(|(_, v)| v.unsigned_abs()).sum::<u64>(),
                Metric::Hamming => e.len() as u64,
            };
            let r = classify(scheme, &w.word, e, &[])?;
            trials += 1;
            if (weight <= tau && r.correct == 0) || r.wrong == 1 {
                violations += 1;
            }
            if weight <= tau && distance_ok {
                let mut y = w.word.clone();
                for &(j, v) in e {
                    y[j] += v;
                }
                let oracle = nearest_prefix_decode(&ReadVector::clean(y), &words, metric, tau)?;
                if oracle.prefix() != Some(w.prefix.as_slice()) || r.correct == 0 {
                    mismatches += 1;
                }
            }
        }
        Ok::<_, Error>((trials, violations, mismatches))
    })?;
    let (trials, violations, mismatches) = tallies
        .into_iter()
        .fold((0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let note = min_distance
        .is_none()
        .then(|| "undefined distance: fewer than two distinct prefixes".to_string());
    Ok(AuditReport {
        scheme: match params.variant {
            Some(v) => format!("{}/{v}", params.scheme),
            None => params.scheme,
        },
        codewords: words.len(),
        distinct_prefixes: prefixes.len(),
        min_distance,
        required_distance: required,
        distance_ok,
        decode_trials: trials,
        decode_violations: violations,
        oracle_mismatches: mismatches,
        passed: distance_ok && violations == 0 && mismatches == 0,
        note,
    })
}
