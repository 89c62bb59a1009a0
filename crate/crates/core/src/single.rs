//! Single-error correction in the L1 metric, with optional detection of a
//! second error.
//!
//! Each row of `A = (A' | A'')` satisfies `A_i . alpha = 0 (mod M)`, where the
//! redundancy digits `A''_i` expand `(-A'_i . alpha) mod M` over the suffix
//! weights of the locators. Because `u A` inherits the congruence, a single
//! `+-1` error in `y = uA + e` leaves the syndrome `+-alpha_j`.

use serde::{Deserialize, Serialize};

use crate::arith::{ceil_log, mixed_radix_digits, modulo};
use crate::error::{Error, Result};
use crate::locators::{build_locators_basic, build_locators_ded, LocatorOptions, Locators, SuffixKind};
use crate::matrix::{DecodeOutcome, QMatrix, ReadVector};
use crate::scheme::{check_read_len, Scheme, SchemeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingleVariant {
    /// Modulus `2n+1`; corrects one error.
    Sec,
    /// A `Sec` code plus an overall even-parity column; detects a second error.
    SecDedParity,
    /// Odd `q`: modulus `4n+2` with odd locators; detects a second error.
    SecDedOddQ,
    /// Even `q > 2`: modulus `4n+2` with `f_j(q)` suffix weights.
    SecDedEvenQ,
}

impl SingleVariant {
    pub fn name(self) -> &'static str {
        match self {
            SingleVariant::Sec => "sec",
            SingleVariant::SecDedParity => "sec_ded_parity",
            SingleVariant::SecDedOddQ => "sec_ded_oddq",
            SingleVariant::SecDedEvenQ => "sec_ded_evenq",
        }
    }

    /// The detection variant appropriate for alphabet `q`.
    pub fn ded_for(q: i64) -> Self {
        match q {
            2 => SingleVariant::SecDedParity,
            q if q % 2 == 1 => SingleVariant::SecDedOddQ,
            _ => SingleVariant::SecDedEvenQ,
        }
    }
}

/// Redundancy digits of one row: the expansion of `(-row . alpha') mod M`
/// over the suffix weights (base `q`, or mixed radix for `f_j(q)`).
pub fn e1_redundancy(info: &[i64], loc: &Locators) -> Result<Vec<i64>> {
    if info.len() != loc.k() {
        return Err(Error::Shape(format!(
            "row of length {} against {} information locators",
            info.len(),
            loc.k()
        )));
    }
    let rem = modulo(-loc.syndrome(info), loc.modulus());
    let digits = mixed_radix_digits(rem, loc.suffix(), loc.q())?;
    Ok(digits.digits)
}

/// `E_1`: append the redundancy digits to every row of `A'`.
pub fn encode_e1(aprime: &QMatrix, loc: &Locators) -> Result<QMatrix> {
    if aprime.q() != loc.q() {
        return Err(Error::Param(format!(
            "matrix alphabet {} does not match locator alphabet {}",
            aprime.q(),
            loc.q()
        )));
    }
    let mut data = Vec::with_capacity(aprime.rows() * loc.n());
    for i in 0..aprime.rows() {
        data.extend_from_slice(aprime.row(i));
        data.extend(e1_redundancy(aprime.row(i), loc)?);
    }
    QMatrix::new(aprime.q(), aprime.rows(), loc.n(), data)
}

/// Apply the single-error correction indicated by a nonzero syndrome `s` to
/// the prefix `w`. Returns `false` when `s` matches no `+-alpha_j`.
///
/// `s = alpha_j` is the syndrome of a `+1` error at `j`, so `w_j` decreases;
/// `s = M - alpha_j` is a `-1` error and `w_j` increases. Errors located in
/// the redundancy part leave `w` unchanged.
pub(crate) fn correct_single(loc: &Locators, s: i64, w: &mut [i64]) -> bool {
    match loc.locate(s) {
        Some((j, sign)) => {
            if j < w.len() {
                w[j] -= sign;
            }
            true
        }
        None => false,
    }
}

/// `D_1`: correct at most one L1 error. `big_q` bounds the output alphabet.
pub fn decode_d1(y: &ReadVector, loc: &Locators, big_q: i64) -> Result<DecodeOutcome> {
    let values = y.require_no_erasures("single-error")?;
    check_read_len(y, loc.n())?;
    let mut w = values[..loc.k()].to_vec();
    let s = loc.syndrome(values);
    if s != 0 && !correct_single(loc, s, &mut w) {
        return Ok(DecodeOutcome::Failure);
    }
    Ok(DecodeOutcome::checked(w, big_q))
}

/// Append a column making every row sum even.
pub fn parity_extend(a: &QMatrix) -> Result<QMatrix> {
    let mut data = Vec::with_capacity(a.rows() * (a.cols() + 1));
    for i in 0..a.rows() {
        let row = a.row(i);
        data.extend_from_slice(row);
        data.push(row.iter().sum::<i64>() % 2);
    }
    QMatrix::new(a.q(), a.rows(), a.cols() + 1, data)
}

/// Encoder for the detection variants: parity-extended `E_1` for `q = 2`,
/// plain `E_1` with modulus `4n+2` otherwise (the locators carry the modulus
/// and the suffix weights).
pub fn encode_ded(aprime: &QMatrix, loc: &Locators, variant: SingleVariant) -> Result<QMatrix> {
    check_variant(loc, variant)?;
    let a = encode_e1(aprime, loc)?;
    match variant {
        SingleVariant::SecDedParity => parity_extend(&a),
        _ => Ok(a),
    }
}

/// Decoder for the detection variants: corrects one error, reports "e" on
/// a detected second one.
pub fn decode_sec_ded(y: &ReadVector, loc: &Locators, variant: SingleVariant, big_q: i64) -> Result<DecodeOutcome> {
    check_variant(loc, variant)?;
    if variant == SingleVariant::Sec {
        return decode_d1(y, loc, big_q);
    }
    let values = y.require_no_erasures("single-error")?;
    let parity_col = usize::from(variant == SingleVariant::SecDedParity);
    check_read_len(y, loc.n() + parity_col)?;
    let mut w = values[..loc.k()].to_vec();
    let s = loc.syndrome(values);
    let single = match variant {
        SingleVariant::SecDedParity => values.iter().sum::<i64>() % 2 != 0,
        _ => s % 2 == 1,
    };
    if s == 0 {
        return Ok(DecodeOutcome::checked(w, big_q));
    }
    if !single || !correct_single(loc, s, &mut w) {
        return Ok(DecodeOutcome::Failure);
    }
    Ok(DecodeOutcome::checked(w, big_q))
}

fn check_variant(loc: &Locators, variant: SingleVariant) -> Result<()> {
    let ok = match variant {
        SingleVariant::Sec | SingleVariant::SecDedParity => !loc.odd_conditions(),
        SingleVariant::SecDedOddQ => {
            loc.odd_conditions() && loc.q() % 2 == 1 && loc.suffix_kind() == SuffixKind::PowersOfQ
        }
        SingleVariant::SecDedEvenQ => loc.odd_conditions() && loc.suffix_kind() == SuffixKind::FSequence,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Param(format!(
            "locators (q = {}, modulus {}) do not fit the {} variant",
            loc.q(),
            loc.modulus(),
            variant.name()
        )))
    }
}

/// Sphere-packing lower bound `ceil(log_q(n+1))` on the redundancy of any
/// single-error-correcting scheme of length `n`.
pub fn redundancy_lower_bound(q: i64, n: usize) -> usize {
    ceil_log(q, n as i64 + 1) as usize
}

/// A single-error scheme instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleScheme {
    variant: SingleVariant,
    ell: usize,
    locators: Locators,
}

impl SingleScheme {
    pub fn new(variant: SingleVariant, ell: usize, locators: Locators) -> Result<Self> {
        check_variant(&locators, variant)?;
        if ell == 0 {
            return Err(Error::Param("ell must be positive".into()));
        }
        Ok(Self { variant, ell, locators })
    }

    /// Single-error correction of length `n` (modulus `2n+1`).
    pub fn sec(q: i64, ell: usize, n: usize) -> Result<Self> {
        Self::new(SingleVariant::Sec, ell, build_locators_basic(q, n)?)
    }

    /// Single-error correction with double-error detection of total length
    /// `n`, choosing the variant from `q`.
    pub fn sec_ded(q: i64, ell: usize, n: usize, opts: LocatorOptions) -> Result<Self> {
        let variant = SingleVariant::ded_for(q);
        let loc = match variant {
            SingleVariant::SecDedParity => {
                if n < 2 {
                    return Err(Error::Param(format!("length {n} too short")));
                }
                build_locators_basic(q, n - 1)?
            }
            _ => build_locators_ded(q, n, opts)?,
        };
        Self::new(variant, ell, loc)
    }

    pub fn variant(&self) -> SingleVariant {
        self.variant
    }

    pub fn locators(&self) -> &Locators {
        &self.locators
    }

    fn parity_col(&self) -> usize {
        usize::from(self.variant == SingleVariant::SecDedParity)
    }
}

impl Scheme for SingleScheme {
    fn params(&self) -> SchemeParams {
        let sigma = usize::from(self.variant != SingleVariant::Sec);
        SchemeParams {
            scheme: if sigma == 0 { "sec" } else { "sec-ded" }.into(),
            variant: Some(self.variant.name().into()),
            metric: self.metric(),
            q: self.q(),
            ell: self.ell,
            n: self.n(),
            k: self.k(),
            big_q: self.big_q(),
            p: None,
            tau: 1,
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
        self.locators.n() + self.parity_col()
    }

    fn k(&self) -> usize {
        self.locators.k()
    }

    fn redundancy_row(&self, info: &[i64]) -> Result<Vec<i64>> {
        let mut red = e1_redundancy(info, &self.locators)?;
        if self.parity_col() == 1 {
            let sum: i64 = info.iter().chain(&red).sum();
            red.push(sum % 2);
        }
        Ok(red)
    }

    fn decode(&self, y: &ReadVector) -> Result<DecodeOutcome> {
        decode_sec_ded(y, &self.locators, self.variant, self.big_q())
    }
}

/// Parity-only detection: one even-parity column, no correction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityScheme {
    q: i64,
    ell: usize,
    k: usize,
}

impl ParityScheme {
    pub fn new(q: i64, ell: usize, n: usize) -> Result<Self> {
        if q < 2 || ell == 0 || n < 2 {
            return Err(Error::Param(format!("invalid parity scheme q={q}, ell={ell}, n={n}")));
        }
        Ok(Self { q, ell, k: n - 1 })
    }
}

impl Scheme for ParityScheme {
    fn params(&self) -> SchemeParams {
        SchemeParams {
            scheme: "parity".into(),
            variant: None,
            metric: self.metric(),
            q: self.q,
            ell: self.ell,
            n: self.n(),
            k: self.k,
            big_q: self.big_q(),
            p: None,
            tau: 0,
            sigma: 1,
        }
    }

    fn q(&self) -> i64 {
        self.q
    }

    fn ell(&self) -> usize {
        self.ell
    }

    fn n(&self) -> usize {
        self.k + 1
    }

    fn k(&self) -> usize {
        self.k
    }

    fn redundancy_row(&self, info: &[i64]) -> Result<Vec<i64>> {
        Ok(vec![info.iter().sum::<i64>() % 2])
    }

    fn decode(&self, y: &ReadVector) -> Result<DecodeOutcome> {
        let values = y.require_no_erasures("parity")?;
        check_read_len(y, self.n())?;
        if values.iter().sum::<i64>() % 2 != 0 {
            return Ok(DecodeOutcome::Failure);
        }
        Ok(DecodeOutcome::checked(values[..self.k].to_vec(), self.big_q()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::output_alphabet;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example_aprime() -> QMatrix {
        QMatrix::from_rows(
            2,
            &[
                vec![1, 0, 1, 1, 0, 1, 0, 0, 1, 0],
                vec![0, 0, 0, 1, 0, 1, 1, 0, 0, 1],
                vec![0, 1, 0, 0, 0, 1, 0, 1, 1, 1],
            ],
        )
        .unwrap()
    }

    #[test]
    fn binary_length_fifteen_encoding() {
        let loc = build_locators_basic(2, 15).unwrap();
        let a = encode_e1(&example_aprime(), &loc).unwrap();
        let suffixes: Vec<Vec<i64>> = (0..3).map(|i| a.row(i)[10..].to_vec()).collect();
        assert_eq!(
            suffixes,
            vec![vec![1, 1, 1, 0, 1], vec![0, 0, 1, 0, 1], vec![0, 0, 0, 1, 0]]
        );
        for i in 0..3 {
            assert_eq!(loc.syndrome(a.row(i)), 0);
        }
        let c = a.left_mul(&[1, 1, 1]).unwrap();
        assert_eq!(c, vec![1, 1, 1, 2, 0, 3, 1, 1, 2, 2, 1, 1, 2, 1, 2]);

        let mut y = c.clone();
        y[5] -= 1;
        assert_eq!(loc.syndrome(&y), 21);
        let out = decode_d1(&ReadVector::clean(y), &loc, output_alphabet(2, 3)).unwrap();
        assert_eq!(out, DecodeOutcome::Prefix(c[..10].to_vec()));
    }

    #[test]
    fn zero_input_encodes_to_zero() {
        let loc = build_locators_basic(3, 7).unwrap();
        let a = encode_e1(&QMatrix::zeros(3, 2, loc.k()), &loc).unwrap();
        assert!(a.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn rows_satisfy_congruence_for_random_ternary_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let loc = build_locators_basic(3, 7).unwrap();
        for _ in 0..50 {
            let data: Vec<i64> = (0..2 * loc.k()).map(|_| rng.gen_range(0..3)).collect();
            let aprime = QMatrix::new(3, 2, loc.k(), data).unwrap();
            let a = encode_e1(&aprime, &loc).unwrap();
            assert_eq!(a.prefix(loc.k()), aprime);
            for i in 0..2 {
                let direct: i64 = a.row(i).iter().zip(loc.alpha()).map(|(x, w)| x * w).sum();
                assert_eq!(direct % 15, 0);
            }
        }
    }

    #[test]
    fn every_single_error_is_corrected() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let scheme = SingleScheme::sec(2, 3, 15).unwrap();
        for _ in 0..30 {
            let data: Vec<i64> = (0..3 * scheme.k()).map(|_| rng.gen_range(0..2)).collect();
            let a = scheme.encode(&QMatrix::new(2, 3, scheme.k(), data).unwrap()).unwrap();
            let u: Vec<i64> = (0..3).map(|_| rng.gen_range(0..2)).collect();
            let c = a.left_mul(&u).unwrap();
            for j in 0..scheme.n() {
                for delta in [-1, 1] {
                    let mut y = c.clone();
                    y[j] += delta;
                    let out = scheme.decode(&ReadVector::clean(y)).unwrap();
                    if (0..scheme.big_q()).contains(&(c[j] + delta)) || j >= scheme.k() {
                        assert_eq!(out, DecodeOutcome::Prefix(c[..scheme.k()].to_vec()));
                    }
                }
            }
        }
    }

    #[test]
    fn single_decoder_rejects_erasures() {
        let scheme = SingleScheme::sec(2, 1, 7).unwrap();
        let y = ReadVector::from_options(&[None, Some(0), Some(0), Some(0), Some(0), Some(0), Some(0)]);
        assert!(matches!(scheme.decode(&y), Err(Error::Erasure(_))));
    }

    #[test]
    fn parity_extension_example() {
        let a = QMatrix::from_rows(2, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]).unwrap();
        let ext = parity_extend(&a).unwrap();
        assert_eq!(
            ext.row_vecs(),
            vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![1, 1, 0, 0]]
        );
        let scheme = ParityScheme::new(2, 3, 4).unwrap();
        assert_eq!(scheme.encode(&a).unwrap(), ext);
        let c = ext.left_mul(&[1, 0, 1]).unwrap();
        assert!(!scheme.decode(&ReadVector::clean(c.clone())).unwrap().is_failure());
        let mut y = c;
        y[2] += 1;
        assert!(scheme.decode(&ReadVector::clean(y)).unwrap().is_failure());
    }

    #[test]
    fn octal_detection_variant() {
        let scheme = SingleScheme::sec_ded(8, 2, 13, LocatorOptions::default()).unwrap();
        assert_eq!(scheme.variant(), SingleVariant::SecDedEvenQ);
        assert_eq!((scheme.n(), scheme.k()), (13, 11));
        let zero = scheme.encode(&QMatrix::zeros(8, 2, 11)).unwrap();
        assert!(zero.data().iter().all(|&v| v == 0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let data: Vec<i64> = (0..22).map(|_| rng.gen_range(0..8)).collect();
            let a = scheme.encode(&QMatrix::new(8, 2, 11, data).unwrap()).unwrap();
            for i in 0..2 {
                assert_eq!(scheme.locators().syndrome(a.row(i)), 0);
                let direct: i64 = a.row(i).iter().zip(scheme.locators().alpha()).map(|(x, w)| x * w).sum();
                assert_eq!(direct % 54, 0);
            }
        }
    }

    fn detection_sweep(scheme: &SingleScheme, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = scheme.q();
        let (ell, k, n) = (scheme.ell(), scheme.k(), scheme.n());
        for _ in 0..4 {
            let data: Vec<i64> = (0..ell * k).map(|_| rng.gen_range(0..q)).collect();
            let a = scheme.encode(&QMatrix::new(q, ell, k, data).unwrap()).unwrap();
            // keep entries away from the alphabet edges so no error is clamped
            let u: Vec<i64> = (0..ell).map(|_| rng.gen_range(1..q)).collect();
            let c = a.left_mul(&u).unwrap();
            let want = DecodeOutcome::Prefix(c[..k].to_vec());
            assert_eq!(scheme.decode(&ReadVector::clean(c.clone())).unwrap(), want);
            for i in 0..n {
                for di in [-1i64, 1] {
                    let mut y1 = c.clone();
                    y1[i] += di;
                    let ok1 = y1.iter().all(|v| (0..scheme.big_q()).contains(v));
                    if ok1 {
                        assert_eq!(scheme.decode(&ReadVector::clean(y1.clone())).unwrap(), want);
                    }
                    for j in i..n {
                        for dj in [-1i64, 1] {
                            let mut y2 = y1.clone();
                            y2[j] += dj;
                            if y2 == c || !y2.iter().all(|v| (0..scheme.big_q()).contains(v)) {
                                continue;
                            }
                            let out = scheme.decode(&ReadVector::clean(y2)).unwrap();
                            assert!(out == want || out.is_failure(), "i={i} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn detection_variants_never_miscorrect_two_errors() {
        detection_sweep(&SingleScheme::sec_ded(8, 2, 13, LocatorOptions::default()).unwrap(), 1);
        detection_sweep(&SingleScheme::sec_ded(5, 2, 11, LocatorOptions::default()).unwrap(), 2);
        // 5^2 = 25 = 2n+1: the midpoint suffix locator is harmless for detection.
        let exempt = LocatorOptions {
            allow_midpoint_suffix: true,
        };
        detection_sweep(&SingleScheme::sec_ded(5, 2, 12, exempt).unwrap(), 5);
        detection_sweep(&SingleScheme::sec_ded(2, 3, 16, LocatorOptions::default()).unwrap(), 3);
        detection_sweep(&SingleScheme::sec_ded(4, 2, 20, LocatorOptions::default()).unwrap(), 4);
    }

    #[test]
    fn detection_variant_reports_two_errors() {
        let scheme = SingleScheme::sec_ded(8, 1, 13, LocatorOptions::default()).unwrap();
        let a = scheme.encode(&QMatrix::new(8, 1, 11, vec![3; 11]).unwrap()).unwrap();
        let mut y = a.left_mul(&[1]).unwrap();
        y[0] += 1;
        y[1] += 1;
        assert!(scheme.decode(&ReadVector::clean(y)).unwrap().is_failure());
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(redundancy_lower_bound(2, 15), 4);
        assert_eq!(redundancy_lower_bound(8, 13), 2);
        for q in 2..10 {
            assert_eq!(redundancy_lower_bound(q, (q - 1) as usize), 1);
        }
    }

    #[test]
    fn variant_mismatch_is_rejected() {
        let loc = build_locators_basic(8, 13).unwrap();
        assert!(SingleScheme::new(SingleVariant::SecDedEvenQ, 1, loc).is_err());
    }
}
