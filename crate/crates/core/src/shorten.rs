//! Shortening: pin leading information columns to zero and drop them.
//!
//! Removes the length restrictions of the locator-based schemes (for instance
//! `n = (p-1)/2` for the recursive scheme) at no cost in distance, since the
//! dropped entries of every codeword `u A` are known to be zero.

use crate::error::{Error, Result};
use crate::matrix::{DecodeOutcome, ReadVector};
use crate::metric::Metric;
use crate::scheme::{check_read_len, Scheme, SchemeParams};

pub struct Shortened<S> {
    inner: S,
    dropped: usize,
}

impl<S: Scheme> Shortened<S> {
    /// Keep `k` of the inner scheme's information columns.
    pub fn new(inner: S, k: usize) -> Result<Self> {
        if k == 0 || k > inner.k() {
            return Err(Error::Param(format!(
                "shortened dimension {k} must lie in [1, {}]",
                inner.k()
            )));
        }
        let dropped = inner.k() - k;
        Ok(Self { inner, dropped })
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }

    pub fn dropped(&self) -> usize {
        self.dropped
    }
}

impl<S: Scheme> Scheme for Shortened<S> {
    fn params(&self) -> SchemeParams {
        let mut params = self.inner.params();
        params.variant = Some(match params.variant {
            Some(v) => format!("{v}+shortened"),
            None => "shortened".into(),
        });
        params.n = self.n();
        params.k = self.k();
        params
    }

    fn q(&self) -> i64 {
        self.inner.q()
    }

    fn ell(&self) -> usize {
        self.inner.ell()
    }

    fn n(&self) -> usize {
        self.inner.n() - self.dropped
    }

    fn k(&self) -> usize {
        self.inner.k() - self.dropped
    }

    fn metric(&self) -> Metric {
        self.inner.metric()
    }

    fn supports_erasures(&self) -> bool {
        self.inner.supports_erasures()
    }

    fn redundancy_row(&self, info: &[i64]) -> Result<Vec<i64>> {
        let mut full = vec![0; self.dropped];
        full.extend_from_slice(info);
        self.inner.redundancy_row(&full)
    }

    fn decode(&self, y: &ReadVector) -> Result<DecodeOutcome> {
        check_read_len(y, self.n())?;
        let mut values = vec![0; self.dropped];
        values.extend_from_slice(y.values());
        let mut erased = vec![false; self.dropped];
        erased.extend_from_slice(y.erased());
        Ok(match self.inner.decode(&ReadVector::new(values, erased)?)? {
            DecodeOutcome::Prefix(p) => DecodeOutcome::Prefix(p[self.dropped..].to_vec()),
            DecodeOutcome::Failure => DecodeOutcome::Failure,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::DoubleScheme;
    use crate::matrix::QMatrix;
    use crate::multi::RecursiveScheme;

    #[test]
    fn shortened_double_scheme_corrects() {
        let inner = DoubleScheme::dec(2, 2, 31).unwrap();
        let s = Shortened::new(inner, 4).unwrap();
        assert_eq!(s.n(), s.inner().n() - s.dropped());
        let a = s
            .encode(&QMatrix::from_rows(2, &[vec![1, 0, 1, 1], vec![0, 1, 1, 0]]).unwrap())
            .unwrap();
        let c = a.left_mul(&[1, 1]).unwrap();
        for i in 0..s.n() {
            for j in i..s.n() {
                let mut y = c.clone();
                y[i] += 1;
                y[j] = (y[j] - 1).max(0);
                if y[j] == c[j] && i != j {
                    continue;
                }
                let out = s.decode(&ReadVector::clean(y)).unwrap();
                assert_eq!(out, DecodeOutcome::Prefix(c[..4].to_vec()), "errors at {i}, {j}");
            }
        }
    }

    #[test]
    fn shortened_recursive_scheme() {
        let s = Shortened::new(RecursiveScheme::new(3, 2, 1, 31, false).unwrap(), 5).unwrap();
        let a = s
            .encode(&QMatrix::from_rows(3, &[vec![2, 0, 1, 1, 2], vec![1, 2, 2, 0, 0]]).unwrap())
            .unwrap();
        let c = a.left_mul(&[2, 1]).unwrap();
        let mut y = c.clone();
        y[7] += 1;
        assert_eq!(
            s.decode(&ReadVector::clean(y)).unwrap(),
            DecodeOutcome::Prefix(c[..5].to_vec())
        );
        assert!(Shortened::new(RecursiveScheme::new(3, 2, 1, 31, false).unwrap(), 16).is_err());
    }
}
