//! Matrices over `Sigma_q`, read vectors with erasure flags, and decoder outcomes.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Output alphabet size `Q = ell (q-1)^2 + 1` of a DPE with `ell` rows.
pub fn output_alphabet(q: i64, ell: usize) -> i64 {
    ell as i64 * (q - 1) * (q - 1) + 1
}

/// A dense row-major `rows x cols` matrix with entries in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct QMatrix {
    q: i64,
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    q: i64,
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl TryFrom<RawMatrix> for QMatrix {
    type Error = Error;

    fn try_from(m: RawMatrix) -> Result<Self> {
        QMatrix::new(m.q, m.rows, m.cols, m.data)
    }
}

impl QMatrix {
    pub fn new(q: i64, rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if q < 2 {
            return param(format!("alphabet size must be at least 2, got {q}"));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !(0..q).contains(*v)) {
            return param(format!("matrix entry {bad} outside alphabet [0, {q})"));
        }
        Ok(Self { q, rows, cols, data })
    }

    pub fn from_rows(q: i64, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(q, rows.len(), cols, rows.concat())
    }

    pub fn zeros(q: i64, rows: usize, cols: usize) -> Self {
        Self {
            q,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The first `k` columns.
    pub fn prefix(&self, k: usize) -> QMatrix {
        let data = (0..self.rows).flat_map(|i| self.row(i)[..k].to_vec()).collect();
        QMatrix {
            q: self.q,
            rows: self.rows,
            cols: k,
            data,
        }
    }

    /// `u A` over the integers, with overflow checking.
    pub fn left_mul(&self, u: &[i64]) -> Result<Vec<i64>> {
        if u.len() != self.rows {
            return Err(Error::Shape(format!(
                "input vector of length {} against {} matrix rows",
                u.len(),
                self.rows
            )));
        }
        let mut out = vec![0i64; self.cols];
        for (i, &ui) in u.iter().enumerate() {
            for (acc, &a) in out.iter_mut().zip(self.row(i)) {
                *acc = ui
                    .checked_mul(a)
                    .and_then(|t| acc.checked_add(t))
                    .ok_or(Error::Overflow("vector-matrix product"))?;
            }
        }
        Ok(out)
    }
}

/// A DPE read vector: integer entries plus per-entry erasure flags.
///
/// Erased entries hold 0 and carry no information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadVector {
    values: Vec<i64>,
    erased: Vec<bool>,
}

impl ReadVector {
    pub fn new(values: Vec<i64>, erased: Vec<bool>) -> Result<Self> {
        if values.len() != erased.len() {
            return Err(Error::Shape("value and erasure vectors differ in length".into()));
        }
        let values = values
            .into_iter()
            .zip(&erased)
            .map(|(v, &e)| if e { 0 } else { v })
            .collect();
        Ok(Self { values, erased })
    }

    pub fn clean(values: Vec<i64>) -> Self {
        let erased = vec![false; values.len()];
        Self { values, erased }
    }

    pub fn from_options(entries: &[Option<i64>]) -> Self {
        Self {
            values: entries.iter().map(|v| v.unwrap_or(0)).collect(),
            erased: entries.iter().map(Option::is_none).collect(),
        }
    }

    pub fn to_options(&self) -> Vec<Option<i64>> {
        self.values
            .iter()
            .zip(&self.erased)
            .map(|(&v, &e)| (!e).then_some(v))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn erased(&self) -> &[bool] {
        &self.erased
    }

    pub fn has_erasures(&self) -> bool {
        self.erased.iter().any(|&e| e)
    }

    pub fn erasure_count(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }

    /// Clamp non-erased entries into `[0, big_q)`.
    pub fn coerce(mut self, big_q: i64) -> Self {
        for v in &mut self.values {
            *v = (*v).clamp(0, big_q - 1);
        }
        self
    }

    pub(crate) fn require_no_erasures(&self, decoder: &'static str) -> Result<&[i64]> {
        if self.has_erasures() {
            return Err(Error::Erasure(decoder));
        }
        Ok(&self.values)
    }
}

/// Result of decoding a read vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecodeOutcome {
    /// The recovered `k`-prefix of `u A`.
    Prefix(Vec<i64>),
    /// Errors were detected but cannot be corrected ("e").
    Failure,
}

impl DecodeOutcome {
    pub fn prefix(&self) -> Option<&[i64]> {
        match self {
            DecodeOutcome::Prefix(p) => Some(p),
            DecodeOutcome::Failure => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, DecodeOutcome::Failure)
    }

    /// A corrected prefix, or failure if any entry left `[0, big_q)`.
    pub(crate) fn checked(prefix: Vec<i64>, big_q: i64) -> Self {
        if prefix.iter().all(|v| (0..big_q).contains(v)) {
            DecodeOutcome::Prefix(prefix)
        } else {
            DecodeOutcome::Failure
        }
    }
}
