//! Hamming-metric scheme with a bound `theta` on every error magnitude.
//!
//! Each row of `A'` is reduced modulo a prime `p > 2 theta`, extended by a
//! systematic Reed-Solomon encoder over GF(p), and the `n~ - k` redundancy
//! symbols are written as `m = ceil(log_q p)` blocks of base-`q` digits:
//!
//! ```text
//!   | A' (k) | A^(0) (n~-k) | A^(1) (n~-k) | ... | A^(m-1) (n~-k) |
//! ```
//!
//! The packing map [`HammingScheme::lambda`] folds the digit blocks back into
//! field symbols. It is additive, so `lambda(u A)` is a Reed-Solomon codeword
//! and each integer error lands on a single field symbol.

use serde::{Deserialize, Serialize};

use crate::arith::{base_q_digits, ceil_log, is_prime, modulo};
use crate::berlekamp::solve_mod;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{output_alphabet, DecodeOutcome, ReadVector};
use crate::metric::Metric;
use crate::scheme::{check_read_len, Scheme, SchemeParams};

/// Polynomials over GF(p), lowest degree first.
type Poly = Vec<i64>;

fn poly_eval(f: PrimeField, poly: &[i64], x: i64) -> i64 {
    poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

fn poly_derivative(f: PrimeField, poly: &[i64]) -> Poly {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(c, i as i64))
        .collect()
}

fn poly_trim(mut poly: Poly) -> Poly {
    while poly.len() > 1 && poly.last() == Some(&0) {
        poly.pop();
    }
    poly
}

/// A (possibly shortened) narrow-sense Reed-Solomon code over GF(p) with
/// locators `X_i = g^i` for a primitive `g` and parity checks
/// `sum_i c_i X_i^b = 0`, `b = 1 .. d-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReedSolomon {
    field: PrimeField,
    k: usize,
    distance: usize,
    locators: Vec<i64>,
    /// `generator[i]` holds the redundancy of the `i`-th unit message.
    generator: Vec<Vec<i64>>,
}

impl ReedSolomon {
    pub fn new(p: u64, length: usize, k: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if length as i64 > field.p() - 1 {
            return Err(Error::Param(format!(
                "no Reed-Solomon code of length {length} over GF({p}); at most {} symbols",
                p - 1
            )));
        }
        if k == 0 || k >= length {
            return Err(Error::Param(format!("dimension {k} must lie in [1, {length})")));
        }
        let g = field.primitive_element();
        let locators: Vec<i64> = (0..length).map(|i| field.pow(g, i as u64)).collect();
        let mut code = Self {
            field,
            k,
            distance: length - k + 1,
            locators,
            generator: Vec::new(),
        };
        let r = length - k;
        code.generator = (0..k)
            .map(|i| {
                let mut aug: Vec<Vec<i64>> = (1..=r)
                    .map(|b| {
                        let mut row: Vec<i64> = (k..length).map(|j| code.check(b, j)).collect();
                        row.push(field.neg(code.check(b, i)));
                        row
                    })
                    .collect();
                solve_mod(&mut aug, field)
            })
            .collect::<Result<_>>()?;
        Ok(code)
    }

    fn check(&self, b: usize, i: usize) -> i64 {
        self.field.pow(self.locators[i], b as u64)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.locators.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Minimum Hamming distance `n - k + 1`.
    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn locators(&self) -> &[i64] {
        &self.locators
    }

    pub fn encode(&self, message: &[i64]) -> Result<Vec<i64>> {
        if message.len() != self.k {
            return Err(Error::Shape(format!(
                "message of length {}, expected {}",
                message.len(),
                self.k
            )));
        }
        let f = self.field;
        let mut c: Vec<i64> = message.iter().map(|&m| f.reduce(m)).collect();
        let mut red = vec![0; self.n() - self.k];
        for (&m, g) in c.iter().zip(&self.generator) {
            for (r, &gt) in red.iter_mut().zip(g) {
                *r = f.add(*r, f.mul(m, gt));
            }
        }
        c.extend(red);
        Ok(c)
    }

    /// `(S_1, ..., S_{d-1})`.
    pub fn syndrome(&self, word: &[i64]) -> Vec<i64> {
        let f = self.field;
        (1..self.distance)
            .map(|b| {
                word.iter()
                    .zip(&self.locators)
                    .fold(0, |acc, (&y, &x)| f.add(acc, f.mul(f.reduce(y), f.pow(x, b as u64))))
            })
            .collect()
    }

    /// Bounded-distance errors-and-erasures decoding.
    ///
    /// Returns the error vector (including the values at erased positions,
    /// where `word` is taken to hold 0) whenever `2 errors + erasures < d`;
    /// `None` when no such error vector exists.
    pub fn decode(&self, word: &[i64], erasures: &[usize]) -> Option<Vec<i64>> {
        let f = self.field;
        let n = self.n();
        let rho = erasures.len();
        let two_t = self.distance - 1;
        if word.len() != n || rho > two_t || erasures.iter().any(|&j| j >= n) {
            return None;
        }
        let s = self.syndrome(word);
        let mut gamma: Poly = vec![1];
        for &j in erasures {
            let mut next = vec![0; gamma.len() + 1];
            for (i, &c) in gamma.iter().enumerate() {
                next[i] = f.add(next[i], c);
                next[i + 1] = f.sub(next[i + 1], f.mul(c, self.locators[j]));
            }
            gamma = next;
        }
        // Berlekamp-Massey seeded with the erasure locator.
        let mut lambda = gamma.clone();
        let mut b = gamma;
        let mut l = rho;
        for r in rho + 1..=two_t {
            let delta = (0..lambda.len())
                .filter(|&j| j < r)
                .fold(0, |acc, j| f.add(acc, f.mul(lambda[j], s[r - j - 1])));
            let mut shifted = vec![0];
            shifted.extend(&b);
            if delta == 0 {
                b = shifted;
                continue;
            }
            let mut next = lambda.clone();
            next.resize(next.len().max(shifted.len()), 0);
            for (i, &c) in shifted.iter().enumerate() {
                next[i] = f.sub(next[i], f.mul(delta, c));
            }
            if 2 * l < r + rho {
                let inv = f.inv(delta).ok()?;
                b = lambda.iter().map(|&c| f.mul(c, inv)).collect();
                l = r + rho - l;
            } else {
                b = shifted;
            }
            lambda = next;
        }
        let lambda = poly_trim(lambda);
        if lambda.len() - 1 != l || 2 * (l - rho) + rho > two_t {
            return None;
        }
        // Error evaluator and Forney's formula at the roots among the locators.
        let mut omega = vec![0; two_t];
        for (i, &a) in lambda.iter().enumerate() {
            for (j, &sj) in s.iter().enumerate() {
                if i + j < two_t {
                    omega[i + j] = f.add(omega[i + j], f.mul(a, sj));
                }
            }
        }
        let dlambda = poly_derivative(f, &lambda);
        let mut e = vec![0; n];
        let mut roots = 0;
        for (i, &x) in self.locators.iter().enumerate() {
            let xinv = f.inv(x).ok()?;
            if poly_eval(f, &lambda, xinv) != 0 {
                continue;
            }
            roots += 1;
            let den = poly_eval(f, &dlambda, xinv);
            e[i] = f.neg(f.div(poly_eval(f, &omega, xinv), den).ok()?);
        }
        if roots != l {
            return None;
        }
        let fixed: Vec<i64> = word.iter().zip(&e).map(|(&y, &d)| f.sub(y, d)).collect();
        self.syndrome(&fixed).iter().all(|&v| v == 0).then_some(e)
    }
}

/// Construction parameters of a [`HammingScheme`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HammingParams {
    pub q: i64,
    pub ell: usize,
    pub k: usize,
    pub tau: usize,
    /// Bound on error magnitudes; `ell (q-1)^2` when absent.
    #[serde(default)]
    pub theta: Option<i64>,
    /// Field size; the smallest admissible prime when absent.
    #[serde(default)]
    pub p: Option<u64>,
    /// Extra detection capability.
    #[serde(default)]
    pub sigma: usize,
    /// Erasures tolerated alongside `tau` errors.
    #[serde(default)]
    pub rho: usize,
}

impl HammingParams {
    pub fn new(q: i64, ell: usize, k: usize, tau: usize) -> Self {
        Self {
            q,
            ell,
            k,
            tau,
            theta: None,
            p: None,
            sigma: 0,
            rho: 0,
        }
    }

    pub fn theta(self, theta: i64) -> Self {
        Self {
            theta: Some(theta),
            ..self
        }
    }

    pub fn prime(self, p: u64) -> Self {
        Self { p: Some(p), ..self }
    }

    pub fn erasures(self, rho: usize) -> Self {
        Self { rho, ..self }
    }

    pub fn detect(self, sigma: usize) -> Self {
        Self { sigma, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HammingParams", into = "HammingParams")]
pub struct HammingScheme {
    params: HammingParams,
    theta: i64,
    m: usize,
    code: ReedSolomon,
}

impl TryFrom<HammingParams> for HammingScheme {
    type Error = Error;

    fn try_from(params: HammingParams) -> Result<Self> {
        HammingScheme::new(params)
    }
}

impl From<HammingScheme> for HammingParams {
    fn from(s: HammingScheme) -> Self {
        s.params
    }
}

impl HammingScheme {
    pub fn new(params: HammingParams) -> Result<Self> {
        let HammingParams { q, ell, k, tau, .. } = params;
        if q < 2 || ell == 0 || k == 0 || tau == 0 {
            return Err(Error::Param(format!(
                "invalid q = {q}, ell = {ell}, k = {k}, tau = {tau}"
            )));
        }
        let big_q = output_alphabet(q, ell);
        let theta = params.theta.unwrap_or(big_q - 1);
        if theta < 1 || theta > big_q - 1 {
            return Err(Error::Param(format!("theta = {theta} must lie in [1, {}]", big_q - 1)));
        }
        let d = 2 * tau + params.sigma + params.rho + 1;
        let length = k + d - 1;
        // Erased entries are recovered modulo p, which pins them down only if p >= Q.
        let floor = if params.rho > 0 {
            (2 * theta).max(big_q - 1)
        } else {
            2 * theta
        };
        let usable = |p: u64| is_prime(p) && p as i64 > floor && p as usize > length;
        let p = match params.p {
            Some(p) if usable(p) => p,
            Some(p) => {
                let reason = if !is_prime(p) {
                    format!("{p} is not prime")
                } else if p as i64 <= 2 * theta {
                    format!("p = {p} must exceed 2 theta = {}", 2 * theta)
                } else if p as i64 <= floor {
                    format!("p = {p} must be at least Q = {big_q} to recover erased entries")
                } else {
                    format!("a distance-{d} Reed-Solomon code with k = {k} needs p > {length}")
                };
                return Err(Error::Param(reason));
            }
            None => (floor as u64 + 1..).find(|&p| usable(p)).expect("primes are unbounded"),
        };
        let code = ReedSolomon::new(p, length, k)?;
        let m = ceil_log(q, p as i64) as usize;
        Ok(Self {
            params: HammingParams { p: Some(p), ..params },
            theta,
            m,
            code,
        })
    }

    pub fn p(&self) -> i64 {
        self.code.field().p()
    }

    pub fn theta(&self) -> i64 {
        self.theta
    }

    /// Digits per redundancy symbol, `ceil(log_q p)`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn inner(&self) -> &ReedSolomon {
        &self.code
    }

    /// Redundancy symbols of the inner code, `n~ - k`.
    fn r(&self) -> usize {
        self.code.n() - self.code.k()
    }

    /// Fold an integer vector of length `n` into `n~` field symbols.
    pub fn lambda(&self, x: &[i64]) -> Vec<i64> {
        let (k, r, p, q) = (self.params.k, self.r(), self.p(), self.params.q);
        let mut out: Vec<i64> = x[..k].iter().map(|&v| modulo(v, p)).collect();
        out.extend((0..r).map(|v| {
            (0..self.m)
                .rev()
                .fold(0, |acc, j| modulo(acc * q + x[k + v + j * r], p))
        }));
        out
    }

    /// Field positions fed by erased entries.
    fn lambda_erasures(&self, erased: &[bool]) -> Vec<usize> {
        let (k, r) = (self.params.k, self.r());
        let mut hit = vec![false; self.code.n()];
        for (j, _) in erased.iter().enumerate().filter(|(_, &e)| e) {
            hit[if j < k { j } else { k + (j - k) % r }] = true;
        }
        (0..hit.len()).filter(|&i| hit[i]).collect()
    }
}

/// The bound `ceil(1 + (p-1)(2 tau - 1)/p) * ceil(log_p n~) * ceil(log_q p)`
/// on the redundancy obtainable with BCH inner codes.
pub fn redundancy_bound_hamming(q: i64, p: i64, tau: usize, inner_len: usize) -> Result<usize> {
    if tau == 0 {
        return Err(Error::Param("the bound needs tau >= 1".into()));
    }
    let num = p + (p - 1) * (2 * tau as i64 - 1);
    let lead = (num + p - 1) / p;
    Ok(lead as usize * ceil_log(p, inner_len as i64) as usize * ceil_log(q, p) as usize)
}

impl Scheme for HammingScheme {
    fn params(&self) -> SchemeParams {
        SchemeParams {
            scheme: "hamming".into(),
            variant: None,
            metric: self.metric(),
            q: self.params.q,
            ell: self.params.ell,
            n: self.n(),
            k: self.k(),
            big_q: self.big_q(),
            p: Some(self.p()),
            tau: self.params.tau,
            sigma: self.params.sigma,
        }
    }

    fn q(&self) -> i64 {
        self.params.q
    }

    fn ell(&self) -> usize {
        self.params.ell
    }

    fn n(&self) -> usize {
        self.params.k + self.m * self.r()
    }

    fn k(&self) -> usize {
        self.params.k
    }

    fn metric(&self) -> Metric {
        Metric::Hamming
    }

    fn supports_erasures(&self) -> bool {
        self.params.rho > 0
    }

    fn redundancy_row(&self, info: &[i64]) -> Result<Vec<i64>> {
        let c = self.code.encode(info)?;
        let r = self.r();
        let mut out = vec![0; self.m * r];
        for (v, &sym) in c[self.params.k..].iter().enumerate() {
            for (j, d) in base_q_digits(sym, self.params.q, self.m as u32)?
                .digits
                .into_iter()
                .enumerate()
            {
                out[v + j * r] = d;
            }
        }
        Ok(out)
    }

    fn decode(&self, y: &ReadVector) -> Result<DecodeOutcome> {
        check_read_len(y, self.n())?;
        if y.has_erasures() && !self.supports_erasures() {
            return Err(Error::Erasure("hamming without erasure capacity"));
        }
        let erasures = self.lambda_erasures(y.erased());
        let word = self.lambda(y.values());
        let Some(e) = self.code.decode(&word, &erasures) else {
            return Ok(DecodeOutcome::Failure);
        };
        let f = self.code.field();
        let prefix = (0..self.params.k)
            .map(|j| {
                if y.erased()[j] {
                    f.sub(word[j], e[j])
                } else {
                    y.values()[j] - f.signed_value(e[j])
                }
            })
            .collect();
        Ok(DecodeOutcome::checked(prefix, self.big_q()))
    }
}
