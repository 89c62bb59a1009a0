//! Code locators: the integer column weights whose syndromes identify the
//! position and sign of a single L1 error.
//!
//! A locator vector `alpha` of length `n` lives modulo `M`, where `M = 2n+1`
//! for the basic conditions and `M = 4n+2` for the detection-enhanced
//! ("odd") conditions. Its last `m` entries are pinned to the redundancy
//! digit weights: powers of `q`, or the `f_j(q)` sequence for even `q > 2`.

use serde::{Deserialize, Serialize};

use crate::arith::{ceil_log, checked_pow, f_seq, modulo};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuffixKind {
    PowersOfQ,
    FSequence,
}

/// Opt-in relaxations of the strict locator conditions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LocatorOptions {
    /// Accept a last suffix entry equal to `M/2` (i.e. `2n+1` under the odd
    /// conditions), which would otherwise pair with itself to `M`.
    pub allow_midpoint_suffix: bool,
}

/// The serializable form of a locator vector, not necessarily valid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocatorSpec {
    pub q: i64,
    pub n: usize,
    pub m: usize,
    pub modulus: i64,
    pub suffix_kind: SuffixKind,
    pub alpha: Vec<i64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub midpoint_exempt: bool,
}

/// The first locator condition that a candidate vector violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocatorViolation {
    Length { n: usize, alpha_len: usize },
    Modulus { modulus: i64, n: usize },
    NoInformationColumns { n: usize, m: usize },
    OutOfRange { index: usize, value: i64 },
    Duplicate { first: usize, second: usize },
    Even { index: usize, value: i64 },
    ComplementPair { first: usize, second: usize },
    Suffix { index: usize, expected: i64, found: i64 },
}

impl std::fmt::Display for LocatorViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use LocatorViolation::*;
        match self {
            Length { n, alpha_len } => write!(f, "declared length {n} but {alpha_len} locators"),
            Modulus { modulus, n } => write!(f, "modulus {modulus} is neither 2n+1 nor 4n+2 for n = {n}"),
            NoInformationColumns { n, m } => write!(f, "n = {n} leaves no information columns for m = {m}"),
            OutOfRange { index, value } => {
                write!(f, "condition (i): alpha[{index}] = {value} is not a nonzero residue")
            }
            Duplicate { first, second } => write!(f, "condition (i): alpha[{first}] = alpha[{second}]"),
            Even { index, value } => write!(f, "condition (i'): alpha[{index}] = {value} is even"),
            ComplementPair { first, second } => {
                write!(f, "condition (ii): alpha[{first}] + alpha[{second}] equals the modulus")
            }
            Suffix { index, expected, found } => {
                write!(f, "condition (iii): alpha[{index}] must be {expected}, found {found}")
            }
        }
    }
}

impl LocatorSpec {
    pub fn k(&self) -> usize {
        self.n - self.m
    }

    /// Whether the odd-entry conditions apply (modulus `4n+2`).
    pub fn odd_conditions(&self) -> bool {
        self.modulus % 2 == 0
    }

    fn expected_suffix(&self) -> Result<Vec<i64>> {
        suffix_weights(self.q, self.m as u32, self.suffix_kind)
    }
}

/// Redundancy digit weights `q^j` or `f_j(q)` for `j < m`.
pub fn suffix_weights(q: i64, m: u32, kind: SuffixKind) -> Result<Vec<i64>> {
    (0..m)
        .map(|j| match kind {
            SuffixKind::PowersOfQ => checked_pow(q, j),
            SuffixKind::FSequence => f_seq(q, j),
        })
        .collect()
}

/// Check every locator condition, returning the first violation.
///
/// The midpoint exemption is honoured only when `spec.midpoint_exempt` is set.
pub fn validate_locators(spec: &LocatorSpec) -> std::result::Result<(), LocatorViolation> {
    use LocatorViolation::*;
    let n = spec.n;
    let alpha = &spec.alpha;
    if alpha.len() != n {
        return Err(Length {
            n,
            alpha_len: alpha.len(),
        });
    }
    let big_m = spec.modulus;
    if big_m != 2 * n as i64 + 1 && big_m != 4 * n as i64 + 2 {
        return Err(Modulus { modulus: big_m, n });
    }
    if spec.m >= n {
        return Err(NoInformationColumns { n, m: spec.m });
    }
    let odd = spec.odd_conditions();
    let mut owner = vec![usize::MAX; big_m as usize];
    for (i, &a) in alpha.iter().enumerate() {
        if a <= 0 || a >= big_m {
            return Err(OutOfRange { index: i, value: a });
        }
        if odd && a % 2 == 0 {
            return Err(Even { index: i, value: a });
        }
        let prev = owner[a as usize];
        if prev != usize::MAX {
            return Err(Duplicate { first: prev, second: i });
        }
        owner[a as usize] = i;
    }
    for (i, &a) in alpha.iter().enumerate() {
        let j = owner[(big_m - a) as usize];
        if j == usize::MAX {
            continue;
        }
        let exempt = spec.midpoint_exempt && i == j && i == n - 1;
        if !exempt {
            return Err(ComplementPair {
                first: i.min(j),
                second: i.max(j),
            });
        }
    }
    let expected = spec.expected_suffix().map_err(|_| Suffix {
        index: spec.k(),
        expected: 0,
        found: alpha[spec.k()],
    })?;
    for (j, &w) in expected.iter().enumerate() {
        let idx = spec.k() + j;
        if alpha[idx] != w {
            return Err(Suffix {
                index: idx,
                expected: w,
                found: alpha[idx],
            });
        }
    }
    Ok(())
}

/// A validated locator vector with a reverse lookup from syndrome to
/// `(column, error sign)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LocatorSpec", into = "LocatorSpec")]
pub struct Locators {
    spec: LocatorSpec,
    lookup: Vec<Option<(usize, i8)>>,
}

impl TryFrom<LocatorSpec> for Locators {
    type Error = Error;

    fn try_from(spec: LocatorSpec) -> Result<Self> {
        validate_locators(&spec).map_err(|v| Error::Param(v.to_string()))?;
        let mut lookup = vec![None; spec.modulus as usize];
        for (j, &a) in spec.alpha.iter().enumerate() {
            let neg = (spec.modulus - a) as usize;
            // Midpoint entries map to themselves; the first sign wins.
            lookup[neg] = Some((j, -1));
            lookup[a as usize] = Some((j, 1));
        }
        Ok(Self { spec, lookup })
    }
}

impl From<Locators> for LocatorSpec {
    fn from(loc: Locators) -> Self {
        loc.spec
    }
}

impl Locators {
    pub fn spec(&self) -> &LocatorSpec {
        &self.spec
    }

    pub fn q(&self) -> i64 {
        self.spec.q
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn k(&self) -> usize {
        self.spec.k()
    }

    pub fn modulus(&self) -> i64 {
        self.spec.modulus
    }

    pub fn alpha(&self) -> &[i64] {
        &self.spec.alpha
    }

    pub fn suffix_kind(&self) -> SuffixKind {
        self.spec.suffix_kind
    }

    /// The weights of the `m` redundancy digits.
    pub fn suffix(&self) -> &[i64] {
        &self.spec.alpha[self.k()..]
    }

    pub fn odd_conditions(&self) -> bool {
        self.spec.odd_conditions()
    }

    /// Column and sign of the unit error whose syndrome is `s`:
    /// `s = alpha_j` means `+1` at `j`, `s = M - alpha_j` means `-1` at `j`.
    pub fn locate(&self, s: i64) -> Option<(usize, i64)> {
        let s = modulo(s, self.spec.modulus) as usize;
        self.lookup[s].map(|(j, sign)| (j, sign as i64))
    }

    /// `sum_j y_j alpha_j mod M` over the first `alpha.len()` entries of `y`.
    pub fn syndrome(&self, y: &[i64]) -> i64 {
        let big_m = self.spec.modulus;
        self.spec
            .alpha
            .iter()
            .zip(y)
            .fold(0, |acc, (&a, &v)| modulo(acc + modulo(v, big_m) * a, big_m))
    }
}

/// The `k` smallest values `v = 1, 1+step, ...` below `modulus` such that
/// neither `v` nor `modulus - v` collides with the suffix or an earlier pick,
/// followed by the suffix. Errors if the suffix itself pairs up to the modulus.
fn fill_prefix(suffix: &[i64], modulus: i64, k: usize, step: usize) -> Result<Vec<i64>> {
    let mut taken = vec![false; modulus as usize];
    for (i, &a) in suffix.iter().enumerate() {
        let partner = suffix[..i].iter().find(|&&b| a + b == modulus);
        if let Some(b) = partner {
            return Err(Error::Param(format!(
                "redundancy weights {b} and {a} sum to the modulus {modulus}; no valid locators exist"
            )));
        }
        taken[a as usize] = true;
    }
    let mut alpha = Vec::with_capacity(k + suffix.len());
    for v in (1..modulus).step_by(step) {
        if alpha.len() == k {
            break;
        }
        if 2 * v != modulus && !taken[v as usize] && !taken[(modulus - v) as usize] {
            taken[v as usize] = true;
            alpha.push(v);
        }
    }
    if alpha.len() < k {
        return Err(Error::Param(format!(
            "only {} admissible locators below {modulus}, need {k}",
            alpha.len()
        )));
    }
    alpha.extend_from_slice(suffix);
    Ok(alpha)
}

/// Locators under conditions (i)-(iii): `M = 2n+1`, suffix `(1, q, ..., q^{m-1})`.
pub fn build_locators_basic(q: i64, n: usize) -> Result<Locators> {
    if q < 2 {
        return Err(Error::Param(format!("alphabet size must be at least 2, got {q}")));
    }
    let big_m = 2 * n as i64 + 1;
    let m = ceil_log(q, big_m) as usize;
    if n <= m {
        return Err(Error::Param(format!(
            "n = {n} must exceed the redundancy m = {m} (q = {q})"
        )));
    }
    let suffix = suffix_weights(q, m as u32, SuffixKind::PowersOfQ)?;
    // Equivalent to "{1..n}, swapping 2n+1-q^{m-1} for q^{m-1}" whenever that
    // recipe is valid, and also correct when the swapped-out value is itself
    // a power of q.
    let alpha = fill_prefix(&suffix, big_m, n - m, 1)?;
    Locators::try_from(LocatorSpec {
        q,
        n,
        m,
        modulus: big_m,
        suffix_kind: SuffixKind::PowersOfQ,
        alpha,
        midpoint_exempt: false,
    })
}

/// Redundancy of the detection-enhanced locators for alphabet `q` and length `n`.
///
/// Odd `q`: `ceil(log_q(4n+2))`. Even `q > 2`: the smallest `m` with
/// `f_m(q) >= 4n+2+(-1)^m`. `q = 2` has no such variant.
pub fn ded_redundancy(q: i64, n: usize) -> Result<(usize, SuffixKind)> {
    let big_m = 4 * n as i64 + 2;
    if q == 2 {
        return Err(Error::Param("q = 2 needs the parity-column variant".into()));
    }
    if q % 2 == 1 {
        return Ok((ceil_log(q, big_m) as usize, SuffixKind::PowersOfQ));
    }
    let mut m = 0u32;
    loop {
        let threshold = if m.is_multiple_of(2) { big_m + 1 } else { big_m - 1 };
        if f_seq(q, m)? >= threshold {
            return Ok((m as usize, SuffixKind::FSequence));
        }
        m += 1;
    }
}

/// Locators for single-error correction with double-error detection.
///
/// For `q = 2` this is [`build_locators_basic`]; the scheme appends a parity
/// column. Otherwise the odd conditions (i')-(ii') apply with modulus `4n+2`
/// and the prefix is filled with the smallest admissible odd values.
pub fn build_locators_ded(q: i64, n: usize, opts: LocatorOptions) -> Result<Locators> {
    if q == 2 {
        return build_locators_basic(q, n);
    }
    if q < 2 {
        return Err(Error::Param(format!("alphabet size must be at least 2, got {q}")));
    }
    let big_m = 4 * n as i64 + 2;
    let (m, kind) = ded_redundancy(q, n)?;
    if n <= m {
        return Err(Error::Param(format!(
            "n = {n} must exceed the redundancy m = {m} (q = {q})"
        )));
    }
    let suffix = suffix_weights(q, m as u32, kind)?;
    let midpoint = 2 * n as i64 + 1;
    let exempt = suffix[m - 1] == midpoint;
    if exempt && !opts.allow_midpoint_suffix {
        return Err(Error::Param(format!(
            "top suffix locator equals 2n+1 = {midpoint}; enable the midpoint exemption to accept it"
        )));
    }
    let alpha = fill_prefix(&suffix, big_m, n - m, 2)?;
    Locators::try_from(LocatorSpec {
        q,
        n,
        m,
        modulus: big_m,
        suffix_kind: kind,
        alpha,
        midpoint_exempt: exempt,
    })
}
