//! Double-error correction in the L1 metric, optionally detecting a third
//! error.
//!
//! For a prime `p > 3` let `n1 = (p-1)/2`. The encoder first applies the
//! single-error encoder with modulus `p` to get `n1` columns, then appends
//! the base-`q` digits of `(sum_j a_j alpha_j^3) mod p` (the "cube" block),
//! then one parity bit over those digits:
//!
//! ```text
//!   | k information | m single-error digits | m cube digits | parity |
//! ```
//!
//! Decoding computes `s1 = y1 . alpha`, `s2 = y1 . alpha^3 - cube block`,
//! and the block parity; a nonzero `s1` with clean trailing blocks is a
//! syndrome of the Berlekamp code with `tau = 2`.
//!
//! Triple-error detection drops the parity column and computes everything
//! modulo `2p` with odd locators (odd `q`: powers of `q`; even `q > 2`:
//! `f_j(q)`), so that the parities of `s1` and `s2` count errors. For
//! `q = 2` an overall parity column is appended instead.

use serde::{Deserialize, Serialize};

use crate::arith::{mixed_radix_digits, modulo, mul_mod, next_prime};
use crate::berlekamp::BerlekampCode;
use crate::error::{Error, Result};
use crate::locators::{build_locators_basic, build_locators_ded, LocatorOptions, Locators};
use crate::matrix::{DecodeOutcome, QMatrix, ReadVector};
use crate::scheme::{check_read_len, Scheme, SchemeParams};
use crate::single::{correct_single, e1_redundancy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoubleVariant {
    /// Corrects two errors; redundancy `2m + 1`.
    Base,
    /// `q = 2`: the base code plus an overall parity column; detects three.
    DedParity,
    /// Odd `q`, everything modulo `2p`; redundancy `2m`; detects three.
    DedOddQ,
    /// Even `q > 2` with `f_j(q)` weights, modulo `2p`; detects three.
    DedEvenQ,
}

impl DoubleVariant {
    pub fn name(self) -> &'static str {
        match self {
            DoubleVariant::Base => "dec",
            DoubleVariant::DedParity => "dec_ted_parity",
            DoubleVariant::DedOddQ => "dec_ted_oddq",
            DoubleVariant::DedEvenQ => "dec_ted_evenq",
        }
    }

    /// The triple-detecting variant appropriate for alphabet `q`.
    pub fn ted_for(q: i64) -> Self {
        match q {
            2 => DoubleVariant::DedParity,
            q if q % 2 == 1 => DoubleVariant::DedOddQ,
            _ => DoubleVariant::DedEvenQ,
        }
    }

    fn modulo_2p(self) -> bool {
        matches!(self, DoubleVariant::DedOddQ | DoubleVariant::DedEvenQ)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DoubleRepr", into = "DoubleRepr")]
pub struct DoubleScheme {
    variant: DoubleVariant,
    ell: usize,
    p: i64,
    locators: Locators,
    /// `alpha_j^3 mod M` for the `n1` locators.
    cubes: Vec<i64>,
    code: BerlekampCode,
}

#[derive(Serialize, Deserialize)]
struct DoubleRepr {
    variant: DoubleVariant,
    ell: usize,
    p: i64,
    locators: Locators,
}

impl TryFrom<DoubleRepr> for DoubleScheme {
    type Error = Error;

    fn try_from(r: DoubleRepr) -> Result<Self> {
        DoubleScheme::with_locators(r.variant, r.ell, r.p, r.locators)
    }
}

impl From<DoubleScheme> for DoubleRepr {
    fn from(s: DoubleScheme) -> Self {
        DoubleRepr {
            variant: s.variant,
            ell: s.ell,
            p: s.p,
            locators: s.locators,
        }
    }
}

/// Syndrome triple of a read vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleSyndrome {
    pub s1: i64,
    pub s2: i64,
    /// Parity of the cube block and its parity column (`Base`/`DedParity`).
    pub block_parity: i64,
}

impl DoubleScheme {
    pub fn new(q: i64, ell: usize, p: u64, variant: DoubleVariant) -> Result<Self> {
        if p <= 3 || !crate::arith::is_prime(p) {
            return Err(Error::Param(format!("p = {p} must be a prime greater than 3")));
        }
        let n1 = ((p - 1) / 2) as usize;
        let loc = match variant {
            DoubleVariant::Base | DoubleVariant::DedParity => build_locators_basic(q, n1),
            DoubleVariant::DedOddQ | DoubleVariant::DedEvenQ => build_locators_ded(q, n1, LocatorOptions::default()),
        }
        .map_err(|e| Error::Param(format!("{e}; {}", suggest_prime(q, variant, p))))?;
        Self::with_locators(variant, ell, p as i64, loc)
    }

    /// Double-error correction (redundancy `2m + 1`).
    pub fn dec(q: i64, ell: usize, p: u64) -> Result<Self> {
        Self::new(q, ell, p, DoubleVariant::Base)
    }

    /// Double-error correction with triple-error detection, variant by `q`.
    pub fn dec_ted(q: i64, ell: usize, p: u64) -> Result<Self> {
        Self::new(q, ell, p, DoubleVariant::ted_for(q))
    }

    pub fn with_locators(variant: DoubleVariant, ell: usize, p: i64, locators: Locators) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Param("ell must be positive".into()));
        }
        let want_modulus = if variant.modulo_2p() { 2 * p } else { p };
        if locators.modulus() != want_modulus || locators.n() as i64 != (p - 1) / 2 {
            return Err(Error::Param(format!(
                "{} needs {} locators modulo {want_modulus}, got {} modulo {}",
                variant.name(),
                (p - 1) / 2,
                locators.n(),
                locators.modulus()
            )));
        }
        if locators.spec().midpoint_exempt {
            return Err(Error::Param(
                "double-error schemes do not accept a midpoint suffix locator".into(),
            ));
        }
        let q = locators.q();
        let variant_ok = match variant {
            DoubleVariant::Base => true,
            DoubleVariant::DedParity => q == 2,
            DoubleVariant::DedOddQ => q % 2 == 1,
            DoubleVariant::DedEvenQ => q % 2 == 0 && q > 2,
        };
        if !variant_ok {
            return Err(Error::Param(format!(
                "variant {} does not apply to q = {q}",
                variant.name()
            )));
        }
        let big_m = locators.modulus();
        let cubes = locators
            .alpha()
            .iter()
            .map(|&a| mul_mod(mul_mod(a, a, big_m), a, big_m))
            .collect();
        let code = BerlekampCode::from_locators(p as u64, &locators, 2)?;
        Ok(Self {
            variant,
            ell,
            p,
            locators,
            cubes,
            code,
        })
    }

    pub fn variant(&self) -> DoubleVariant {
        self.variant
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn locators(&self) -> &Locators {
        &self.locators
    }

    pub fn berlekamp(&self) -> &BerlekampCode {
        &self.code
    }

    /// `n1 = (p-1)/2`, the length of the single-error-encoded part.
    pub fn n1(&self) -> usize {
        self.locators.n()
    }

    /// Digits per redundancy block.
    pub fn m(&self) -> usize {
        self.locators.m()
    }

    fn trailing_cols(&self) -> usize {
        match self.variant {
            DoubleVariant::Base => 1,
            DoubleVariant::DedParity => 2,
            _ => 0,
        }
    }

    /// Digits of `(y1 . alpha^3) mod M` over the suffix weights.
    fn cube_digits(&self, y1: &[i64]) -> Result<Vec<i64>> {
        let t = self.cube_sum(y1);
        Ok(mixed_radix_digits(t, self.locators.suffix(), self.locators.q())?.digits)
    }

    /// `(y1 . alpha^3) mod M` over the first `n1` entries.
    pub fn cube_sum(&self, y1: &[i64]) -> i64 {
        let big_m = self.locators.modulus();
        y1.iter()
            .zip(&self.cubes)
            .fold(0, |acc, (&v, &c)| modulo(acc + mul_mod(v, c, big_m), big_m))
    }

    pub fn syndromes(&self, y: &[i64]) -> DoubleSyndrome {
        let (n1, m) = (self.n1(), self.m());
        let big_m = self.locators.modulus();
        let y1 = &y[..n1];
        let s1 = self.locators.syndrome(y1);
        let block = &y[n1..n1 + m];
        let weighted = block
            .iter()
            .zip(self.locators.suffix())
            .fold(0, |acc, (&v, &w)| modulo(acc + mul_mod(v, w, big_m), big_m));
        let s2 = modulo(self.cube_sum(y1) - weighted, big_m);
        let parity_len = m + usize::from(self.trailing_cols() > 0);
        let block_parity = y[n1..n1 + parity_len].iter().sum::<i64>().rem_euclid(2);
        DoubleSyndrome { s1, s2, block_parity }
    }

    /// Prefix of `y1 - e1` for the Berlekamp decoding of `(s1, s2) mod p`.
    fn berlekamp_correct(&self, y1: &[i64], s: DoubleSyndrome) -> Option<Vec<i64>> {
        let e1 = self.code.decode_tau2(&[modulo(s.s1, self.p), modulo(s.s2, self.p)])?;
        Some(y1[..self.k()].iter().zip(&e1).map(|(y, e)| y - e).collect())
    }

    fn single_correct(&self, y1: &[i64], s1: i64) -> Option<Vec<i64>> {
        let mut w = y1[..self.k()].to_vec();
        correct_single(&self.locators, s1, &mut w).then_some(w)
    }

    /// Decoder of the base scheme: three cases on `s1` and the block parity.
    fn decode_base(&self, y1: &[i64], s: DoubleSyndrome) -> Option<Vec<i64>> {
        if s.s1 == 0 {
            Some(y1[..self.k()].to_vec())
        } else if s.block_parity == 0 {
            self.berlekamp_correct(y1, s)
        } else {
            self.single_correct(y1, s.s1)
        }
    }

    /// `q = 2` detection: the overall parity gives the parity of the total
    /// error weight. Even weight (0 or 2) is handled by the base decoder.
    /// Odd weight is 1 or 3; a single error must sit in `y1` with clean
    /// trailing blocks, so anything else is reported as failure.
    fn decode_overall_parity(&self, y: &[i64], y1: &[i64], s: DoubleSyndrome) -> Option<Vec<i64>> {
        let total_odd = y.iter().sum::<i64>().rem_euclid(2) == 1;
        if !total_odd {
            return self.decode_base(y1, s);
        }
        let p = self.p;
        if s.s1 == 0 {
            // Clean y1 unless three errors in y1 hide behind s1 = 0.
            let hidden = s.block_parity == 0 && s.s2 != 0;
            return (!hidden).then(|| y1[..self.k()].to_vec());
        }
        let single = s.block_parity == 0 && s.s2 == mul_mod(mul_mod(s.s1, s.s1, p), s.s1, p);
        if single {
            self.single_correct(y1, s.s1)
        } else {
            None
        }
    }

    /// Detection modulo `2p`: parities of `s1` and `s2` count the errors in
    /// `y1` and in the whole word.
    fn decode_mod_2p(&self, y1: &[i64], s: DoubleSyndrome) -> Option<Vec<i64>> {
        let p = self.p;
        let (s1_odd, s2_odd) = (s.s1 % 2 == 1, s.s2 % 2 == 1);
        if s.s1 == 0 {
            return Some(y1[..self.k()].to_vec());
        }
        match (s1_odd, s2_odd) {
            (false, false) => self.berlekamp_correct(y1, s),
            (true, false) => self.single_correct(y1, s.s1),
            (false, true) => None,
            (true, true) => {
                let (a, b) = (modulo(s.s1, p), modulo(s.s2, p));
                if b == mul_mod(mul_mod(a, a, p), a, p) {
                    self.single_correct(y1, s.s1)
                } else {
                    None
                }
            }
        }
    }
}

fn suggest_prime(q: i64, variant: DoubleVariant, p: u64) -> String {
    let mut cand = next_prime(p + 1);
    while cand < 1 << 20 {
        let n1 = ((cand - 1) / 2) as usize;
        let ok = match variant {
            DoubleVariant::Base | DoubleVariant::DedParity => build_locators_basic(q, n1).is_ok(),
            _ => build_locators_ded(q, n1, LocatorOptions::default()).is_ok(),
        };
        if ok {
            return format!("the next usable prime is {cand}");
        }
        cand = next_prime(cand + 1);
    }
    "no usable prime found".into()
}

impl Scheme for DoubleScheme {
    fn params(&self) -> SchemeParams {
        let sigma = usize::from(self.variant != DoubleVariant::Base);
        SchemeParams {
            scheme: if sigma == 0 { "dec" } else { "dec-ted" }.into(),
            variant: Some(self.variant.name().into()),
            metric: self.metric(),
            q: self.q(),
            ell: self.ell,
            n: self.n(),
            k: self.k(),
            big_q: self.big_q(),
            p: Some(self.p),
            tau: 2,
            sigma,
        }
    }

    fn q(&self) -> i64 {
        self.locators.q()
    }

    fn ell(&self) -> usize {
        self.ell
    }

    fn n(&self) -> usize {
        self.n1() + self.m() + self.trailing_cols()
    }

    fn k(&self) -> usize {
        self.locators.k()
    }

    fn redundancy_row(&self, info: &[i64]) -> Result<Vec<i64>> {
        let mut red = e1_redundancy(info, &self.locators)?;
        let y1: Vec<i64> = info.iter().chain(&red).copied().collect();
        let cube = self.cube_digits(&y1)?;
        let cube_parity = cube.iter().sum::<i64>() % 2;
        red.extend(cube);
        if self.trailing_cols() >= 1 {
            red.push(cube_parity);
        }
        if self.trailing_cols() == 2 {
            let total: i64 = info.iter().chain(&red).sum();
            red.push(total % 2);
        }
        Ok(red)
    }

    fn decode(&self, y: &ReadVector) -> Result<DecodeOutcome> {
        let values = y.require_no_erasures("double-error")?;
        check_read_len(y, self.n())?;
        let y1 = &values[..self.n1()];
        let s = self.syndromes(values);
        let w = match self.variant {
            DoubleVariant::Base => self.decode_base(y1, s),
            DoubleVariant::DedParity => self.decode_overall_parity(values, y1, s),
            DoubleVariant::DedOddQ | DoubleVariant::DedEvenQ => self.decode_mod_2p(y1, s),
        };
        Ok(w.map_or(DecodeOutcome::Failure, |w| DecodeOutcome::checked(w, self.big_q())))
    }
}

/// Encode with an explicit scheme, for symmetry with the single-error API.
pub fn encode_e2(aprime: &QMatrix, scheme: &DoubleScheme) -> Result<QMatrix> {
    scheme.encode(aprime)
}
