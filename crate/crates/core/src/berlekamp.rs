//! Lee-metric Berlekamp codes over GF(p).
//!
//! The parity-check matrix has rows `(beta_j^{2v+1})_j` for `v < tau`, so the
//! syndrome of `y` is `s_v = sum_j y_j beta_j^{2v+1}`. With nonzero locators
//! satisfying `beta_i != +-beta_j`, the minimum Lee distance is at least
//! `2 tau + 1`.
//!
//! Decoders return the error vector (signed, Lee representatives) or `None`
//! for a syndrome that no error within the budget explains.

use serde::{Deserialize, Serialize};

use crate::error::{check_guard, Error, Result};
use crate::field::PrimeField;
use crate::locators::Locators;
use crate::metric::{l1_norm, sphere_volume_l1};

/// Default bound on the number of error patterns the exhaustive decoder visits.
pub const ORACLE_GUARD: u128 = 10_000_000;

/// Syndrome components `(s_0, ..., s_{tau-1})` for the odd powers `1, 3, ..., 2tau-1`.
pub type LeeSyndrome = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BerlekampRepr", into = "BerlekampRepr")]
pub struct BerlekampCode {
    field: PrimeField,
    beta: Vec<i64>,
    tau: usize,
    /// `lookup[r] = (j, +1)` if `beta_j = r`, `(j, -1)` if `beta_j = p - r`.
    lookup: Vec<Option<(usize, i8)>>,
    /// Odd powers `beta_j^{2v+1}`, indexed `[v][j]`.
    powers: Vec<Vec<i64>>,
    /// Systematic generator: redundancy contribution of each message unit,
    /// indexed `[i][t]` for the last `tau` positions.
    generator: Option<Vec<Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
struct BerlekampRepr {
    p: i64,
    beta: Vec<i64>,
    tau: usize,
}

impl TryFrom<BerlekampRepr> for BerlekampCode {
    type Error = Error;

    fn try_from(r: BerlekampRepr) -> Result<Self> {
        BerlekampCode::new(r.p as u64, r.beta, r.tau)
    }
}

impl From<BerlekampCode> for BerlekampRepr {
    fn from(c: BerlekampCode) -> Self {
        BerlekampRepr {
            p: c.field.p(),
            beta: c.beta,
            tau: c.tau,
        }
    }
}

impl BerlekampCode {
    pub fn new(p: u64, beta: Vec<i64>, tau: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let p = field.p();
        if tau == 0 || 2 * tau as i64 >= p {
            return Err(Error::Param(format!("tau = {tau} needs 0 < 2 tau < p = {p}")));
        }
        let mut lookup = vec![None; p as usize];
        for (j, &b) in beta.iter().enumerate() {
            if !(1..p).contains(&b) {
                return Err(Error::Param(format!(
                    "locator beta[{j}] = {b} is not a nonzero element of GF({p})"
                )));
            }
            if lookup[b as usize].is_some() || lookup[(p - b) as usize].is_some() {
                return Err(Error::Param(format!(
                    "locator beta[{j}] = {b} repeats or negates an earlier locator"
                )));
            }
            lookup[b as usize] = Some((j, 1));
            lookup[(p - b) as usize] = Some((j, -1));
        }
        let powers = (0..tau)
            .map(|v| beta.iter().map(|&b| field.pow(b, 2 * v as u64 + 1)).collect())
            .collect();
        let mut code = Self {
            field,
            beta,
            tau,
            lookup,
            powers,
            generator: None,
        };
        if code.n() > tau {
            code.generator = Some(code.build_generator()?);
        }
        Ok(code)
    }

    /// Locators `alpha mod p`, e.g. from the single-error construction.
    pub fn from_locators(p: u64, loc: &Locators, tau: usize) -> Result<Self> {
        let beta = loc.alpha().iter().map(|&a| a.rem_euclid(p as i64)).collect();
        Self::new(p, beta, tau)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> i64 {
        self.field.p()
    }

    pub fn beta(&self) -> &[i64] {
        &self.beta
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    /// Dimension of the systematic encoder: `n - tau`.
    pub fn k(&self) -> usize {
        self.n().saturating_sub(self.tau)
    }

    /// The same locators with a different error budget.
    pub fn with_tau(&self, tau: usize) -> Result<Self> {
        Self::new(self.p() as u64, self.beta.clone(), tau)
    }

    pub fn syndrome(&self, y: &[i64]) -> Result<LeeSyndrome> {
        if y.len() != self.n() {
            return Err(Error::Shape(format!(
                "word of length {} for code length {}",
                y.len(),
                self.n()
            )));
        }
        let f = self.field;
        Ok(self
            .powers
            .iter()
            .map(|row| {
                row.iter()
                    .zip(y)
                    .fold(0, |acc, (&h, &v)| f.add(acc, f.mul(h, f.reduce(v))))
            })
            .collect())
    }

    /// `(j, +-1)` for a field element equal to `+-beta_j`.
    pub fn locate(&self, r: i64) -> Option<(usize, i64)> {
        self.lookup[self.field.reduce(r) as usize].map(|(j, s)| (j, s as i64))
    }

    /// Single-error decoder for `tau = 1` syndromes (only `s_0` is used).
    pub fn decode_tau1(&self, s: &[i64]) -> Option<Vec<i64>> {
        let mut e = vec![0; self.n()];
        let s1 = self.field.reduce(*s.first()?);
        if s1 != 0 {
            let (j, sign) = self.locate(s1)?;
            e[j] = sign;
        }
        Some(e)
    }

    /// Double-error decoder from `(s_0, s_1)`.
    ///
    /// Two unit errors with `x_i = e_i beta_i` have `x_1 + x_2 = s_0` and
    /// `x_1^3 + x_2^3 = s_1`, so they are the roots of
    /// `x^2 - s_0 x + (s_0^2 - s_1/s_0)/3`. A `+-2` error at one position is
    /// the double root. The result is always re-checked against the syndrome.
    pub fn decode_tau2(&self, s: &[i64]) -> Option<Vec<i64>> {
        if self.tau < 2 {
            return None;
        }
        let f = self.field;
        let (s1, s2) = (f.reduce(s[0]), f.reduce(*s.get(1)?));
        let n = self.n();
        if s1 == 0 {
            // x_1 = -x_2 would need beta_i = +-beta_j for distinct positions.
            return (s2 == 0).then(|| vec![0; n]);
        }
        let candidate = if s2 == f.pow(s1, 3) {
            self.decode_tau1(&[s1])?
        } else {
            let ratio = f.div(s2, s1).ok()?;
            let third = f.inv(3).ok()?;
            let c = f.mul(third, f.sub(f.mul(s1, s1), ratio));
            let mut roots = f.quadratic_roots(f.neg(s1), c);
            match roots.len() {
                0 => return None,
                1 => roots.push(roots[0]),
                _ => {}
            }
            let mut e = vec![0; n];
            for r in roots {
                if r == 0 {
                    continue;
                }
                let (j, sign) = self.locate(r)?;
                e[j] += sign;
            }
            e
        };
        let ok = l1_norm(&candidate) <= 2 && self.syndrome(&candidate).ok()?[..2] == [s1, s2];
        ok.then_some(candidate)
    }

    /// Exhaustive bounded-distance decoding: the unique error of L1 weight at
    /// most `budget` with syndrome `s`, or `None`.
    ///
    /// Errors with [`Error::Guard`] when the search space exceeds
    /// [`ORACLE_GUARD`], and with [`Error::Internal`] if two errors match.
    pub fn decode_oracle(&self, s: &[i64], budget: usize) -> Result<Option<Vec<i64>>> {
        let n = self.n();
        check_guard(
            "Berlekamp oracle patterns",
            sphere_volume_l1(n as u64, budget as u64),
            ORACLE_GUARD,
        )?;
        let target: Vec<i64> = s.iter().map(|&v| self.field.reduce(v)).collect();
        if target.len() != self.tau {
            return Err(Error::Shape(format!(
                "syndrome has {} components, code has {}",
                target.len(),
                self.tau
            )));
        }
        let mut found: Option<Vec<i64>> = None;
        let mut e = vec![0i64; n];
        let mut acc = vec![0i64; self.tau];
        self.search(0, budget as i64, &mut e, &mut acc, &target, &mut found)?;
        Ok(found)
    }

    fn search(
        &self,
        pos: usize,
        budget: i64,
        e: &mut Vec<i64>,
        acc: &mut Vec<i64>,
        target: &[i64],
        found: &mut Option<Vec<i64>>,
    ) -> Result<()> {
        if pos == e.len() || budget == 0 {
            if acc.as_slice() == target {
                if let Some(prev) = found {
                    return Err(Error::Internal(format!(
                        "errors {prev:?} and {e:?} share a syndrome within the decoding radius"
                    )));
                }
                *found = Some(e.clone());
            }
            return Ok(());
        }
        let f = self.field;
        for v in -budget..=budget {
            for (t, row) in self.powers.iter().enumerate() {
                acc[t] = f.add(acc[t], f.mul(row[pos], f.reduce(v)));
            }
            e[pos] = v;
            let res = self.search(pos + 1, budget - v.abs(), e, acc, target, found);
            for (t, row) in self.powers.iter().enumerate() {
                acc[t] = f.sub(acc[t], f.mul(row[pos], f.reduce(v)));
            }
            e[pos] = 0;
            res?;
        }
        Ok(())
    }

    /// Bounded-distance decoding up to `tau` errors: the direct decoders for
    /// `tau <= 2`, the exhaustive one beyond.
    pub fn decode(&self, s: &[i64]) -> Result<Option<Vec<i64>>> {
        match self.tau {
            1 => Ok(self.decode_tau1(s)),
            2 => Ok(self.decode_tau2(s)),
            t => self.decode_oracle(s, t),
        }
    }

    /// Solve for the redundancy contributions of each message unit: the last
    /// `tau` columns of the parity-check matrix form a scaled Vandermonde
    /// matrix in `beta^2`, invertible because `beta_i != +-beta_j`.
    fn build_generator(&self) -> Result<Vec<Vec<i64>>> {
        let f = self.field;
        let (k, tau) = (self.k(), self.tau);
        let mut gen = Vec::with_capacity(k);
        for i in 0..k {
            // R r = -h_i, with R[v][t] = beta_{k+t}^{2v+1}.
            let mut aug: Vec<Vec<i64>> = (0..tau)
                .map(|v| {
                    let mut row: Vec<i64> = (0..tau).map(|t| self.powers[v][k + t]).collect();
                    row.push(f.neg(self.powers[v][i]));
                    row
                })
                .collect();
            gen.push(solve_mod(&mut aug, f)?);
        }
        Ok(gen)
    }

    /// Systematic encoding: the message followed by `tau` redundancy symbols.
    pub fn systematic_encode(&self, message: &[i64]) -> Result<Vec<i64>> {
        let gen = self
            .generator
            .as_ref()
            .ok_or_else(|| Error::Param(format!("length {} leaves no message symbols", self.n())))?;
        if message.len() != self.k() {
            return Err(Error::Shape(format!(
                "message of length {}, expected {}",
                message.len(),
                self.k()
            )));
        }
        let f = self.field;
        let mut red = vec![0i64; self.tau];
        for (&m, g) in message.iter().zip(gen) {
            for (r, &gt) in red.iter_mut().zip(g) {
                *r = f.add(*r, f.mul(f.reduce(m), gt));
            }
        }
        let mut c: Vec<i64> = message.iter().map(|&m| f.reduce(m)).collect();
        c.extend(red);
        Ok(c)
    }
}

/// Gauss-Jordan elimination on an augmented `t x (t+1)` system over GF(p).
pub(crate) fn solve_mod(aug: &mut [Vec<i64>], f: PrimeField) -> Result<Vec<i64>> {
    let t = aug.len();
    for col in 0..t {
        let pivot = (col..t)
            .find(|&r| aug[r][col] != 0)
            .ok_or_else(|| Error::Param("singular redundancy submatrix".into()))?;
        aug.swap(col, pivot);
        let inv = f.inv(aug[col][col])?;
        for x in aug[col].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for r in 0..t {
            if r != col && aug[r][col] != 0 {
                let factor = aug[r][col];
                let pivot_row = aug[col].clone();
                for (x, &v) in aug[r].iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, v));
                }
            }
        }
    }
    Ok(aug.iter().map(|row| row[t]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locators::build_locators_basic;

    fn example_code(tau: usize) -> BerlekampCode {
        let loc = build_locators_basic(2, 15).unwrap();
        BerlekampCode::from_locators(31, &loc, tau).unwrap()
    }

    /// All integer vectors of length `n` with L1 weight exactly `w`.
    fn patterns(n: usize, w: i64) -> Vec<Vec<i64>> {
        fn rec(pos: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if pos == cur.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for v in -left..=left {
                cur[pos] = v;
                rec(pos + 1, left - v.abs(), cur, out);
            }
            cur[pos] = 0;
        }
        let mut out = Vec::new();
        rec(0, w, &mut vec![0; n], &mut out);
        out
    }

    #[test]
    fn rejects_bad_locators() {
        assert!(BerlekampCode::new(31, vec![3, 28], 1).is_err());
        assert!(BerlekampCode::new(31, vec![3, 3], 1).is_err());
        assert!(BerlekampCode::new(31, vec![0, 3], 1).is_err());
        assert!(BerlekampCode::new(5, vec![1, 2], 3).is_err());
        assert!(BerlekampCode::new(33, vec![1, 2], 1).is_err());
    }

    #[test]
    fn example_read_vector_syndrome() {
        let code = example_code(1);
        let y = [1, 1, 1, 2, 0, 2, 1, 1, 2, 2, 1, 1, 2, 1, 2];
        assert_eq!(code.syndrome(&y).unwrap(), vec![21]);
        let mut e = vec![0; 15];
        e[5] = 1;
        assert_eq!(code.decode_tau1(&[10]), Some(e));
        assert_eq!(code.decode_tau1(&[0]), Some(vec![0; 15]));
    }

    #[test]
    fn tau1_inverts_every_unit_error() {
        let code = example_code(1);
        for e in patterns(15, 1) {
            let s = code.syndrome(&e).unwrap();
            assert_eq!(code.decode_tau1(&s), Some(e));
        }
    }

    #[test]
    fn tau2_worked_syndrome() {
        let code = example_code(2);
        let e = code.decode_tau2(&[29, 8]).unwrap();
        let mut want = vec![0; 15];
        want[13] = 1;
        want[5] = -1;
        assert_eq!(e, want);
        assert_eq!(code.decode_oracle(&[29, 8], 2).unwrap(), Some(want));
        assert_eq!(code.decode_tau2(&[0, 0]), Some(vec![0; 15]));
        assert_eq!(code.decode_tau2(&[0, 5]), None);
    }

    #[test]
    fn tau2_matches_oracle_on_every_weight_two_error() {
        let code = example_code(2);
        for w in 0..=2 {
            for e in patterns(15, w) {
                let s = code.syndrome(&e).unwrap();
                assert_eq!(code.decode_tau2(&s).as_ref(), Some(&e), "e = {e:?}");
            }
        }
        // spot-check oracle equivalence on a subset (the oracle is slower)
        for e in patterns(15, 2).into_iter().step_by(17) {
            let s = code.syndrome(&e).unwrap();
            assert_eq!(code.decode_oracle(&s, 2).unwrap(), Some(e));
        }
    }

    #[test]
    fn tau2_never_claims_more_than_two_errors() {
        let code = example_code(2);
        for s1 in 0..31 {
            for s2 in 0..31 {
                if let Some(e) = code.decode_tau2(&[s1, s2]) {
                    assert!(l1_norm(&e) <= 2);
                    assert_eq!(code.syndrome(&e).unwrap(), vec![s1, s2]);
                }
            }
        }
    }

    #[test]
    fn oracle_on_weight_three_errors() {
        let code = BerlekampCode::new(13, vec![1, 2, 3, 4, 5, 6], 2).unwrap();
        for e in patterns(6, 3).into_iter().step_by(7) {
            let s = code.syndrome(&e).unwrap();
            if let Some(found) = code.decode_oracle(&s, 2).unwrap() {
                assert_ne!(found, e);
                assert!(l1_norm(&found) <= 2);
            }
        }
        let code3 = code.with_tau(3).unwrap();
        for e in patterns(6, 3).into_iter().step_by(5) {
            let s = code3.syndrome(&e).unwrap();
            assert_eq!(code3.decode(&s).unwrap(), Some(e));
        }
    }

    #[test]
    fn oracle_guard() {
        let code = BerlekampCode::new(1009, (1..=400).collect(), 4).unwrap();
        assert!(matches!(code.decode_oracle(&[0, 0, 0, 0], 4), Err(Error::Guard { .. })));
    }

    #[test]
    fn systematic_encoding() {
        let code = BerlekampCode::new(31, (1..=15).collect(), 3).unwrap();
        assert_eq!(code.k(), 12);
        assert_eq!(code.systematic_encode(&[0; 12]).unwrap(), vec![0; 15]);
        for i in 0..12 {
            let mut m = vec![0; 12];
            m[i] = 1;
            let c = code.systematic_encode(&m).unwrap();
            assert_eq!(&c[..12], m.as_slice());
            assert_eq!(code.syndrome(&c).unwrap(), vec![0, 0, 0]);
        }
        let m: Vec<i64> = (0..12).map(|i| (i * 7 + 3) % 31).collect();
        let c = code.systematic_encode(&m).unwrap();
        assert_eq!(code.syndrome(&c).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn syndrome_is_linear() {
        let code = example_code(2);
        let f = code.field();
        let x: Vec<i64> = (0..15).map(|i| (i * i + 1) % 31).collect();
        let y: Vec<i64> = (0..15).map(|i| (5 * i + 2) % 31).collect();
        let (a, b) = (7, 19);
        let combo: Vec<i64> = x
            .iter()
            .zip(&y)
            .map(|(&u, &v)| f.add(f.mul(a, u), f.mul(b, v)))
            .collect();
        let sx = code.syndrome(&x).unwrap();
        let sy = code.syndrome(&y).unwrap();
        let sc = code.syndrome(&combo).unwrap();
        for v in 0..2 {
            assert_eq!(sc[v], f.add(f.mul(a, sx[v]), f.mul(b, sy[v])));
        }
    }

    #[test]
    fn minimum_lee_distance_of_small_codes() {
        for (p, n, tau) in [(11u64, 5usize, 1usize), (11, 5, 2), (13, 6, 2), (7, 3, 1), (13, 5, 2)] {
            let code = BerlekampCode::new(p, (1..=n as i64).collect(), tau).unwrap();
            let f = code.field();
            let k = code.k() as u32;
            let mut best = u64::MAX;
            for idx in 1..(p as i64).pow(k) {
                let mut rest = idx;
                let m: Vec<i64> = (0..k)
                    .map(|_| {
                        let d = rest % p as i64;
                        rest /= p as i64;
                        d
                    })
                    .collect();
                let c = code.systematic_encode(&m).unwrap();
                let w: u64 = c.iter().map(|&v| f.lee_abs(v) as u64).sum();
                best = best.min(w);
            }
            assert!(best > 2 * tau as u64, "p={p} n={n} tau={tau}: {best}");
        }
    }
}
