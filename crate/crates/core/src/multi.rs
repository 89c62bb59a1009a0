//! Schemes correcting any prescribed number `tau` of L1 errors.
//!
//! [`RecursiveScheme`] protects an `ell x n` matrix (`n = (p-1)/2`) with the
//! base-`q` digit planes of its Berlekamp syndrome matrix `S = A H^T mod p`.
//! Because `u S^{(j)}` is what the device outputs for those columns, the
//! decoder can rebuild `s = u S mod p` and hence the error syndrome. The
//! planes are protected in turn by a second Berlekamp code over a much
//! smaller prime, whose own syndrome digits are simply repeated `2 tau + 1`
//! times:
//!
//! ```text
//!   | A (n) | level-1 planes (tau m) | (2 tau + 1) x level-2 planes (tau m~) |
//! ```
//!
//! [`LargeAlphabetScheme`] covers alphabets containing a prime `p > 2 tau`:
//! rows are reduced modulo `p` and systematically Berlekamp-encoded.

use serde::{Deserialize, Serialize};

use crate::arith::{base_q_digits, ceil_log, checked_pow, is_prime, modulo, next_prime, prev_prime};
use crate::berlekamp::BerlekampCode;
use crate::error::{Error, Result};
use crate::locators::{build_locators_basic, Locators};
use crate::matrix::{DecodeOutcome, QMatrix, ReadVector};
use crate::scheme::{check_read_len, Scheme, SchemeParams};
use crate::single::e1_redundancy;

/// `S = A H^T mod p`, one row of `tau` syndrome entries per matrix row.
pub fn syndrome_matrix(a: &QMatrix, code: &BerlekampCode) -> Result<Vec<Vec<i64>>> {
    (0..a.rows()).map(|i| code.syndrome(a.row(i))).collect()
}

/// Base-`q` digit planes `S^{(0)}, ..., S^{(m-1)}` of a syndrome matrix.
pub fn digit_split(s: &[Vec<i64>], q: i64, m: u32) -> Result<Vec<QMatrix>> {
    let rows = s.len();
    let cols = s.first().map_or(0, Vec::len);
    let mut planes = vec![Vec::with_capacity(rows * cols); m as usize];
    for row in s {
        for &v in row {
            for (plane, d) in planes.iter_mut().zip(base_q_digits(v, q, m)?.digits) {
                plane.push(d);
            }
        }
    }
    planes
        .into_iter()
        .map(|data| QMatrix::new(q, rows, cols, data))
        .collect()
}

fn plane_digits(values: &[i64], q: i64, m: u32) -> Result<Vec<i64>> {
    // column j * len + v holds digit j of value v
    let mut out = vec![0; values.len() * m as usize];
    for (v, &x) in values.iter().enumerate() {
        for (j, d) in base_q_digits(x, q, m)?.digits.into_iter().enumerate() {
            out[j * values.len() + v] = d;
        }
    }
    Ok(out)
}

/// Inverse of [`plane_digits`] on device outputs, reduced modulo `p`.
fn plane_values(cols: &[i64], q: i64, m: usize, p: i64) -> Vec<i64> {
    let width = cols.len() / m;
    (0..width)
        .map(|v| (0..m).rev().fold(0, |acc, j| modulo(acc * q + cols[j * width + v], p)))
        .collect()
}

fn median(values: &mut [i64]) -> i64 {
    values.sort_unstable();
    values[values.len() / 2]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RecursiveRepr", into = "RecursiveRepr")]
pub struct RecursiveScheme {
    q: i64,
    ell: usize,
    tau: usize,
    trimmed: bool,
    /// Single-error locators when the protected matrix is itself single-error encoded.
    locators: Option<Locators>,
    level1: BerlekampCode,
    m: usize,
    level2: BerlekampCode,
    m2: usize,
}

#[derive(Serialize, Deserialize)]
struct RecursiveRepr {
    q: i64,
    ell: usize,
    tau: usize,
    p: i64,
    trimmed: bool,
}

impl TryFrom<RecursiveRepr> for RecursiveScheme {
    type Error = Error;

    fn try_from(r: RecursiveRepr) -> Result<Self> {
        RecursiveScheme::new(r.q, r.ell, r.tau, r.p as u64, r.trimmed)
    }
}

impl From<RecursiveScheme> for RecursiveRepr {
    fn from(s: RecursiveScheme) -> Self {
        RecursiveRepr {
            q: s.q,
            ell: s.ell,
            tau: s.tau,
            p: s.level1.p(),
            trimmed: s.trimmed,
        }
    }
}

impl RecursiveScheme {
    /// A `tau`-error-correcting scheme of raw length `n = (p-1)/2`.
    ///
    /// With `trimmed`, the protected matrix is the single-error encoding of
    /// an `ell x (n - m)` input; its syndrome column for `beta^1` is then
    /// identically zero and is not stored (requires `tau >= 2`).
    pub fn new(q: i64, ell: usize, tau: usize, p: u64, trimmed: bool) -> Result<Self> {
        if q < 2 || ell == 0 || tau == 0 {
            return Err(Error::Param(format!("invalid q = {q}, ell = {ell}, tau = {tau}")));
        }
        if !is_prime(p) || p <= 2 * tau as u64 || p < 3 {
            return Err(Error::Param(format!(
                "p = {p} must be an odd prime greater than 2 tau = {}",
                2 * tau
            )));
        }
        if trimmed && tau < 2 {
            return Err(Error::Param("trimmed mode needs tau >= 2".into()));
        }
        let n = ((p - 1) / 2) as usize;
        let (locators, beta) = if trimmed {
            let loc = build_locators_basic(q, n)?;
            let beta = loc.alpha().to_vec();
            (Some(loc), beta)
        } else {
            (None, (1..=n as i64).collect())
        };
        let level1 = BerlekampCode::new(p, beta, tau)?;
        let m = ceil_log(q, p as i64) as usize;
        let stored = tau - usize::from(trimmed);
        let n2 = stored * m;
        let p2 = next_prime(2 * n2 as u64 + 1);
        let level2 = BerlekampCode::new(p2, (1..=n2 as i64).collect(), tau)?;
        let m2 = ceil_log(q, p2 as i64) as usize;
        checked_pow(q, m as u32)?;
        Ok(Self {
            q,
            ell,
            tau,
            trimmed,
            locators,
            level1,
            m,
            level2,
            m2,
        })
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn p(&self) -> i64 {
        self.level1.p()
    }

    /// Columns of the protected matrix, `(p-1)/2`.
    pub fn raw_len(&self) -> usize {
        self.level1.n()
    }

    /// Digits per level-1 syndrome entry, `ceil(log_q p)`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Level-2 prime: the smallest prime at least `2 n~ + 1`.
    pub fn p2(&self) -> i64 {
        self.level2.p()
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    /// Width of the level-1 block, `n~`.
    pub fn n2(&self) -> usize {
        self.level2.n()
    }

    /// Width of one level-2 copy, `tau m~`.
    fn n3(&self) -> usize {
        self.tau * self.m2
    }

    pub fn level1(&self) -> &BerlekampCode {
        &self.level1
    }

    pub fn trimmed(&self) -> bool {
        self.trimmed
    }

    fn stored_syndrome<'a>(&self, s: &'a [i64]) -> &'a [i64] {
        &s[usize::from(self.trimmed)..]
    }

    /// The appended level-1 and level-2 columns of a protected row.
    fn protect(&self, row: &[i64]) -> Result<Vec<i64>> {
        let s = self.level1.syndrome(row)?;
        let block = plane_digits(self.stored_syndrome(&s), self.q, self.m as u32)?;
        let s2 = self.level2.syndrome(&block)?;
        let copy = plane_digits(&s2, self.q, self.m2 as u32)?;
        let mut out = block;
        for _ in 0..2 * self.tau + 1 {
            out.extend_from_slice(&copy);
        }
        Ok(out)
    }

    fn correct(&self, y: &[i64]) -> Result<Option<Vec<i64>>> {
        let (n, n2, n3, tau) = (self.raw_len(), self.n2(), self.n3(), self.tau);
        let (ya, rest) = y.split_at(n);
        let (yb, tail) = rest.split_at(n2);
        // Level 3: coordinate-wise median of the 2 tau + 1 copies.
        let copy: Vec<i64> = (0..n3)
            .map(|c| {
                let mut vals: Vec<i64> = (0..2 * tau + 1).map(|r| tail[r * n3 + c]).collect();
                median(&mut vals)
            })
            .collect();
        // Level 2: rebuild u S~ and correct the level-1 block.
        let p2 = self.level2.p();
        let s2 = plane_values(&copy, self.q, self.m2, p2);
        let sy2 = self.level2.syndrome(yb)?;
        let e_syn: Vec<i64> = sy2.iter().zip(&s2).map(|(a, b)| modulo(a - b, p2)).collect();
        let Some(eb) = self.level2.decode(&e_syn)? else {
            return Ok(None);
        };
        let block: Vec<i64> = yb.iter().zip(&eb).map(|(y, e)| y - e).collect();
        // Level 1: rebuild u S and correct the protected matrix.
        let p = self.level1.p();
        let mut s = Vec::with_capacity(tau);
        if self.trimmed {
            s.push(0);
        }
        s.extend(plane_values(&block, self.q, self.m, p));
        let sy = self.level1.syndrome(ya)?;
        let e_syn: Vec<i64> = sy.iter().zip(&s).map(|(a, b)| modulo(a - b, p)).collect();
        let Some(ea) = self.level1.decode(&e_syn)? else {
            return Ok(None);
        };
        Ok(Some(ya.iter().zip(&ea).map(|(y, e)| y - e).collect()))
    }

    /// Appended width `tau m + (2 tau + 1) tau m~` (raw mode).
    pub fn appended_width(&self) -> usize {
        self.n2() + (2 * self.tau + 1) * self.n3()
    }
}

impl Scheme for RecursiveScheme {
    fn params(&self) -> SchemeParams {
        SchemeParams {
            scheme: "recursive".into(),
            variant: Some(if self.trimmed { "trimmed" } else { "raw" }.into()),
            metric: self.metric(),
            q: self.q,
            ell: self.ell,
            n: self.n(),
            k: self.k(),
            big_q: self.big_q(),
            p: Some(self.p()),
            tau: self.tau,
            sigma: 0,
        }
    }

    fn q(&self) -> i64 {
        self.q
    }

    fn ell(&self) -> usize {
        self.ell
    }

    fn n(&self) -> usize {
        self.raw_len() + self.appended_width()
    }

    fn k(&self) -> usize {
        match &self.locators {
            Some(loc) => loc.k(),
            None => self.raw_len(),
        }
    }

    fn redundancy_row(&self, info: &[i64]) -> Result<Vec<i64>> {
        let mut red = match &self.locators {
            Some(loc) => e1_redundancy(info, loc)?,
            None => Vec::new(),
        };
        let row: Vec<i64> = info.iter().chain(&red).copied().collect();
        red.extend(self.protect(&row)?);
        Ok(red)
    }

    fn decode(&self, y: &ReadVector) -> Result<DecodeOutcome> {
        let values = y.require_no_erasures("recursive")?;
        check_read_len(y, self.n())?;
        Ok(match self.correct(values)? {
            Some(c) => DecodeOutcome::checked(c[..self.k()].to_vec(), self.big_q()),
            None => DecodeOutcome::Failure,
        })
    }
}

/// Berlekamp encoding over the largest prime `p <= q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LargeRepr", into = "LargeRepr")]
pub struct LargeAlphabetScheme {
    q: i64,
    ell: usize,
    code: BerlekampCode,
}

#[derive(Serialize, Deserialize)]
struct LargeRepr {
    q: i64,
    ell: usize,
    n: usize,
    tau: usize,
}

impl TryFrom<LargeRepr> for LargeAlphabetScheme {
    type Error = Error;

    fn try_from(r: LargeRepr) -> Result<Self> {
        LargeAlphabetScheme::new(r.q, r.ell, r.n, r.tau)
    }
}

impl From<LargeAlphabetScheme> for LargeRepr {
    fn from(s: LargeAlphabetScheme) -> Self {
        LargeRepr {
            q: s.q,
            ell: s.ell,
            n: s.code.n(),
            tau: s.code.tau(),
        }
    }
}

impl LargeAlphabetScheme {
    /// Length `n <= (p-1)/2` with locators `1..n`, where `p` is the largest
    /// prime not exceeding `q`.
    pub fn new(q: i64, ell: usize, n: usize, tau: usize) -> Result<Self> {
        if ell == 0 || tau == 0 {
            return Err(Error::Param(format!("invalid ell = {ell}, tau = {tau}")));
        }
        let p = prev_prime(q.max(0) as u64)
            .filter(|&p| p > 2 * tau as u64 && p > 2)
            .ok_or_else(|| Error::Param(format!("no odd prime p with 2 tau = {} < p <= q = {q}", 2 * tau)))?;
        let max_n = ((p - 1) / 2) as usize;
        if n > max_n || n <= tau {
            return Err(Error::Param(format!(
                "length {n} must lie in ({tau}, {max_n}] for p = {p}"
            )));
        }
        let code = BerlekampCode::new(p, (1..=n as i64).collect(), tau)?;
        Ok(Self { q, ell, code })
    }

    /// The longest instance: `n = (p-1)/2`.
    pub fn max_length(q: i64, ell: usize, tau: usize) -> Result<Self> {
        let p = prev_prime(q.max(0) as u64).unwrap_or(0);
        Self::new(q, ell, ((p.max(1) - 1) / 2) as usize, tau)
    }

    pub fn code(&self) -> &BerlekampCode {
        &self.code
    }

    pub fn p(&self) -> i64 {
        self.code.p()
    }
}

impl Scheme for LargeAlphabetScheme {
    fn params(&self) -> SchemeParams {
        SchemeParams {
            scheme: "large-alphabet".into(),
            variant: None,
            metric: self.metric(),
            q: self.q,
            ell: self.ell,
            n: self.n(),
            k: self.k(),
            big_q: self.big_q(),
            p: Some(self.p()),
            tau: self.code.tau(),
            sigma: 0,
        }
    }

    fn q(&self) -> i64 {
        self.q
    }

    fn ell(&self) -> usize {
        self.ell
    }

    fn n(&self) -> usize {
        self.code.n()
    }

    fn k(&self) -> usize {
        self.code.k()
    }

    fn redundancy_row(&self, info: &[i64]) -> Result<Vec<i64>> {
        let c = self.code.systematic_encode(info)?;
        Ok(c[self.k()..].to_vec())
    }

    fn decode(&self, y: &ReadVector) -> Result<DecodeOutcome> {
        let values = y.require_no_erasures("large-alphabet")?;
        check_read_len(y, self.n())?;
        let s = self.code.syndrome(values)?;
        Ok(match self.code.decode(&s)? {
            Some(e) => {
                let w = values[..self.k()].iter().zip(&e).map(|(y, e)| y - e).collect();
                DecodeOutcome::checked(w, self.big_q())
            }
            None => DecodeOutcome::Failure,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, q: i64, rows: usize, cols: usize) -> QMatrix {
        let data = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
        QMatrix::new(q, rows, cols, data).unwrap()
    }

    #[test]
    fn syndrome_matrix_of_single_error_encoding_has_zero_first_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let loc = build_locators_basic(2, 15).unwrap();
        let code = BerlekampCode::from_locators(31, &loc, 3).unwrap();
        let a = crate::single::encode_e1(&random_matrix(&mut rng, 2, 3, 10), &loc).unwrap();
        let s = syndrome_matrix(&a, &code).unwrap();
        assert!(s.iter().all(|row| row[0] == 0));
        let zero = syndrome_matrix(&QMatrix::zeros(2, 2, 15), &code).unwrap();
        assert_eq!(zero, vec![vec![0; 3]; 2]);
    }

    #[test]
    fn syndrome_matrix_commutes_with_combination() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let code = BerlekampCode::new(31, (1..=15).collect(), 2).unwrap();
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 3, 4, 15);
            let u: Vec<i64> = (0..4).map(|_| rng.gen_range(0..3)).collect();
            let s = syndrome_matrix(&a, &code).unwrap();
            let c = a.left_mul(&u).unwrap();
            let direct = code.syndrome(&c).unwrap();
            for v in 0..2 {
                let via: i64 = (0..4).map(|i| u[i] * s[i][v]).sum();
                assert_eq!(via % 31, direct[v]);
            }
        }
    }

    #[test]
    fn digit_planes_reconstruct() {
        let planes = digit_split(&[vec![23, 0], vec![7, 30]], 2, 5).unwrap();
        let cell: Vec<i64> = planes.iter().map(|p| p.get(0, 0)).collect();
        assert_eq!(cell, vec![1, 1, 1, 0, 1]);
        for i in 0..2 {
            for v in 0..2 {
                let back: i64 = (0..5).map(|j| planes[j].get(i, v) << j).sum();
                assert_eq!(back, [[23, 0], [7, 30]][i][v]);
            }
        }
        assert!(digit_split(&[vec![0]], 3, 2).unwrap().iter().all(|p| p.data() == [0]));
    }

    #[test]
    fn redundancy_matches_formula() {
        for (q, tau, p) in [(2i64, 1usize, 31u64), (2, 2, 31), (3, 2, 101), (4, 3, 211)] {
            let s = RecursiveScheme::new(q, 2, tau, p, false).unwrap();
            let m = ceil_log(q, p as i64) as usize;
            let p2 = next_prime(2 * (tau * m) as u64 + 1);
            let m2 = ceil_log(q, p2 as i64) as usize;
            assert_eq!(s.n() - s.k(), tau * m + (2 * tau + 1) * tau * m2);
            assert_eq!(s.m(), ceil_log(q, 2 * s.raw_len() as i64 + 1) as usize);
        }
    }

    #[test]
    fn zero_matrix_encodes_to_zero() {
        let s = RecursiveScheme::new(2, 2, 2, 31, false).unwrap();
        let a = s.encode(&QMatrix::zeros(2, 2, s.k())).unwrap();
        assert!(a.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn tau_one_block_is_syndrome_digits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = RecursiveScheme::new(2, 3, 1, 31, false).unwrap();
        let a = random_matrix(&mut rng, 2, 3, 15);
        let enc = s.encode(&a).unwrap();
        let syn = syndrome_matrix(&a, s.level1()).unwrap();
        let planes = digit_split(&syn, 2, 5).unwrap();
        for i in 0..3 {
            let block: Vec<i64> = planes.iter().map(|p| p.get(i, 0)).collect();
            assert_eq!(&enc.row(i)[15..20], block.as_slice());
        }
    }

    /// Every error of L1 weight <= w on a few random codewords; returns the
    /// number of wrong or failed decodings.
    fn sweep(scheme: &dyn Scheme, w: i64, words: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (q, ell, n, k) = (scheme.q(), scheme.ell(), scheme.n(), scheme.k());
        let mut bad = 0;
        for _ in 0..words {
            let a = scheme.encode(&random_matrix(&mut rng, q, ell, k)).unwrap();
            let u: Vec<i64> = (0..ell).map(|_| rng.gen_range(0..q)).collect();
            let c = a.left_mul(&u).unwrap();
            let want = DecodeOutcome::Prefix(c[..k].to_vec());
            let mut check = |y: Vec<i64>| {
                if y.iter().all(|v| (0..scheme.big_q()).contains(v))
                    && scheme.decode(&ReadVector::clean(y)).unwrap() != want
                {
                    bad += 1;
                }
            };
            check(c.clone());
            for i in 0..n {
                for di in [-1i64, 1] {
                    let mut y = c.clone();
                    y[i] += di;
                    check(y.clone());
                    if w >= 2 {
                        y[i] += di;
                        check(y.clone());
                        y[i] -= di;
                        for j in i + 1..n {
                            for dj in [-1i64, 1] {
                                let mut y2 = y.clone();
                                y2[j] += dj;
                                check(y2);
                            }
                        }
                    }
                }
            }
        }
        bad
    }

    #[test]
    fn recursive_tau_one_corrects_everywhere() {
        let s = RecursiveScheme::new(2, 3, 1, 31, false).unwrap();
        assert_eq!(sweep(&s, 1, 5, 4), 0);
    }

    #[test]
    fn recursive_tau_two_corrects_everywhere() {
        let s = RecursiveScheme::new(2, 2, 2, 31, false).unwrap();
        assert_eq!(sweep(&s, 2, 2, 5), 0);
        let t = RecursiveScheme::new(3, 2, 2, 23, true).unwrap();
        assert_eq!(sweep(&t, 2, 2, 6), 0);
    }

    #[test]
    fn trimmed_mode_saves_columns() {
        let raw = RecursiveScheme::new(2, 2, 2, 31, false).unwrap();
        let trimmed = RecursiveScheme::new(2, 2, 2, 31, true).unwrap();
        assert_eq!(trimmed.n2(), raw.n2() - raw.m());
        assert!(trimmed.n() - trimmed.k() <= raw.n() - raw.k());
        assert!(RecursiveScheme::new(2, 2, 1, 31, true).is_err());
    }

    #[test]
    fn recursive_tau_three_uses_exhaustive_decoding() {
        let s = RecursiveScheme::new(2, 1, 3, 13, false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = s.encode(&random_matrix(&mut rng, 2, 1, s.k())).unwrap();
        let c = a.left_mul(&[1]).unwrap();
        for trial in 0..30 {
            let mut y = c.clone();
            for t in 0..3 {
                let j = (trial * 7 + t * 11) % s.n();
                y[j] += 1;
            }
            let out = s.decode(&ReadVector::clean(y)).unwrap();
            assert_eq!(out, DecodeOutcome::Prefix(c[..s.k()].to_vec()));
        }
    }

    #[test]
    fn large_alphabet_construction() {
        let s = LargeAlphabetScheme::max_length(8, 2, 2).unwrap();
        assert_eq!((s.p(), s.n(), s.k()), (7, 3, 1));
        assert_eq!(s.n() - s.k(), 2);
        assert!(LargeAlphabetScheme::new(4, 1, 1, 2).is_err());
        assert!(LargeAlphabetScheme::new(8, 1, 4, 1).is_err());
        let zero = s.encode(&QMatrix::zeros(8, 2, 1)).unwrap();
        assert!(zero.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn large_alphabet_reduces_to_berlekamp_codewords() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = LargeAlphabetScheme::new(32, 3, 15, 2).unwrap();
        assert_eq!(s.p(), 31);
        for _ in 0..20 {
            let a = s.encode(&random_matrix(&mut rng, 32, 3, s.k())).unwrap();
            let u: Vec<i64> = (0..3).map(|_| rng.gen_range(0..32)).collect();
            let c = a.left_mul(&u).unwrap();
            assert_eq!(s.code().syndrome(&c).unwrap(), vec![0, 0]);
        }
    }

    #[test]
    fn large_alphabet_corrects() {
        assert_eq!(sweep(&LargeAlphabetScheme::new(8, 2, 3, 1).unwrap(), 1, 10, 10), 0);
        assert_eq!(sweep(&LargeAlphabetScheme::new(8, 2, 3, 2).unwrap(), 2, 10, 11), 0);
        assert_eq!(sweep(&LargeAlphabetScheme::new(13, 2, 6, 2).unwrap(), 2, 5, 12), 0);
    }
}
