//! The interface shared by every systematic DPE coding scheme.
//!
//! A scheme maps an `ell x k` matrix `A'` to an `ell x n` matrix
//! `A = (A' | A'')` whose redundancy columns depend only on the row they
//! belong to. After the device computes `y = u A + e`, the decoder recovers
//! the `k`-prefix of `u A` or reports failure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{output_alphabet, DecodeOutcome, QMatrix, ReadVector};
use crate::metric::Metric;

/// Integer parameters of a scheme instance, for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeParams {
    pub scheme: String,
    pub variant: Option<String>,
    pub metric: Metric,
    pub q: i64,
    pub ell: usize,
    pub n: usize,
    pub k: usize,
    /// Output alphabet size `ell (q-1)^2 + 1`.
    pub big_q: i64,
    /// Field characteristic, where the scheme uses one.
    pub p: Option<i64>,
    /// Designed number of correctable errors.
    pub tau: usize,
    /// Additional detectable errors beyond `tau`.
    pub sigma: usize,
}

impl SchemeParams {
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }
}

pub trait Scheme: Send + Sync {
    fn params(&self) -> SchemeParams;

    fn q(&self) -> i64;

    fn ell(&self) -> usize;

    fn n(&self) -> usize;

    fn k(&self) -> usize;

    fn metric(&self) -> Metric {
        Metric::L1
    }

    fn big_q(&self) -> i64 {
        output_alphabet(self.q(), self.ell())
    }

    /// Redundancy columns appended to one information row.
    fn redundancy_row(&self, info: &[i64]) -> Result<Vec<i64>>;

    fn decode(&self, y: &ReadVector) -> Result<DecodeOutcome>;

    /// Whether [`Scheme::decode`] accepts erased entries.
    fn supports_erasures(&self) -> bool {
        false
    }

    /// Encode one information row into a full codeword row.
    fn encode_row(&self, info: &[i64]) -> Result<Vec<i64>> {
        check_info_row(info, self.k(), self.q())?;
        let mut row = info.to_vec();
        row.extend(self.redundancy_row(info)?);
        debug_assert_eq!(row.len(), self.n());
        Ok(row)
    }

    /// Encode every row of `A'`.
    fn encode(&self, aprime: &QMatrix) -> Result<QMatrix> {
        if aprime.q() != self.q() {
            return Err(Error::Param(format!(
                "matrix alphabet {} does not match scheme alphabet {}",
                aprime.q(),
                self.q()
            )));
        }
        if aprime.rows() != self.ell() {
            return Err(Error::Shape(format!(
                "scheme expects {} rows, matrix has {}",
                self.ell(),
                aprime.rows()
            )));
        }
        let mut data = Vec::with_capacity(aprime.rows() * self.n());
        for i in 0..aprime.rows() {
            data.extend(self.encode_row(aprime.row(i))?);
        }
        QMatrix::new(self.q(), aprime.rows(), self.n(), data)
    }
}

pub(crate) fn check_info_row(info: &[i64], k: usize, q: i64) -> Result<()> {
    if info.len() != k {
        return Err(Error::Shape(format!(
            "information row has length {}, expected {k}",
            info.len()
        )));
    }
    if let Some(bad) = info.iter().find(|v| !(0..q).contains(*v)) {
        return Err(Error::Param(format!("information entry {bad} outside [0, {q})")));
    }
    Ok(())
}

pub(crate) fn check_read_len(y: &ReadVector, n: usize) -> Result<()> {
    if y.len() != n {
        return Err(Error::Shape(format!(
            "read vector has length {}, expected {n}",
            y.len()
        )));
    }
    Ok(())
}
