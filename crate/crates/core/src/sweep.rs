//! Exhaustive error-pattern sweeps over random codewords of the induced code.
//!
//! For each of `words` random `(A', u)` pairs, every error pattern of the
//! configured family is added to `c = u E(A')` and the decoder's answer is
//! classified as correct, detected (`"e"`) or wrong.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::{DecodeOutcome, QMatrix, ReadVector};
use crate::par::Exec;
use crate::scheme::Scheme;

/// A sparse error: `(position, value)` pairs with distinct positions.
pub type SparseError = Vec<(usize, i64)>;

/// Families of error patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "lowercase")]
pub enum Pattern {
    /// All errors with L1 weight in `[min_weight, max_weight]`.
    L1 { min_weight: u64, max_weight: u64 },
    /// All errors on at most `max_weight` positions with values in
    /// `[-magnitude, magnitude]`, each combined with every choice of exactly
    /// `erasures` erased positions.
    Hamming {
        max_weight: usize,
        magnitude: i64,
        erasures: usize,
    },
}

impl Pattern {
    pub fn l1_up_to(weight: u64) -> Self {
        Pattern::L1 {
            min_weight: 0,
            max_weight: weight,
        }
    }

    pub fn l1_exactly(weight: u64) -> Self {
        Pattern::L1 {
            min_weight: weight,
            max_weight: weight,
        }
    }

    /// Every `(error, erased positions)` pair of the family for length `n`.
    pub fn enumerate(&self, n: usize) -> Vec<(SparseError, Vec<usize>)> {
        match *self {
            Pattern::L1 { min_weight, max_weight } => {
                let mut out = Vec::new();
                for w in min_weight..=max_weight {
                    l1_exact(n, 0, w as i64, &mut Vec::new(), &mut out);
                }
                out.into_iter().map(|e| (e, Vec::new())).collect()
            }
            Pattern::Hamming {
                max_weight,
                magnitude,
                erasures,
            } => {
                let values: Vec<i64> = (-magnitude..=magnitude).filter(|&v| v != 0).collect();
                let mut errors = Vec::new();
                bounded(n, 0, max_weight, &values, &mut Vec::new(), &mut errors);
                let mut erasure_sets = Vec::new();
                subsets(n, 0, erasures, &mut Vec::new(), &mut erasure_sets);
                let mut out = Vec::with_capacity(errors.len() * erasure_sets.len());
                for e in &errors {
                    for s in &erasure_sets {
                        out.push((e.clone(), s.clone()));
                    }
                }
                out
            }
        }
    }
}

/// All sparse vectors with positions `>= start` and L1 weight exactly `w`.
fn l1_exact(n: usize, start: usize, w: i64, cur: &mut SparseError, out: &mut Vec<SparseError>) {
    if w == 0 {
        out.push(cur.clone());
        return;
    }
    for j in start..n {
        for mag in 1..=w {
            for v in [mag, -mag] {
                cur.push((j, v));
                l1_exact(n, j + 1, w - mag, cur, out);
                cur.pop();
            }
        }
    }
}

fn bounded(n: usize, start: usize, left: usize, values: &[i64], cur: &mut SparseError, out: &mut Vec<SparseError>) {
    out.push(cur.clone());
    if left == 0 {
        return;
    }
    for j in start..n {
        for &v in values {
            cur.push((j, v));
            bounded(n, j + 1, left - 1, values, cur, out);
            cur.pop();
        }
    }
}

fn subsets(n: usize, start: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for j in start..n {
        cur.push(j);
        subsets(n, j + 1, size, cur, out);
        cur.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub words: usize,
    pub seed: u64,
    pub pattern: Pattern,
    #[serde(default)]
    pub exec: Exec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub words: usize,
    pub trials: u64,
    pub correct: u64,
    pub detected: u64,
    pub wrong: u64,
}

impl SweepReport {
    fn absorb(&mut self, other: SweepReport) {
        self.trials += other.trials;
        self.correct += other.correct;
        self.detected += other.detected;
        self.wrong += other.wrong;
    }

    /// Every trial decoded to the right prefix.
    pub fn all_correct(&self) -> bool {
        self.correct == self.trials
    }
}

/// A random codeword `u E(A')` of the induced code together with its prefix.
pub fn random_codeword(scheme: &dyn Scheme, rng: &mut ChaCha8Rng) -> Result<Vec<i64>> {
    let (q, ell, k) = (scheme.q(), scheme.ell(), scheme.k());
    let data = (0..ell * k).map(|_| rng.gen_range(0..q)).collect();
    let a = scheme.encode(&QMatrix::new(q, ell, k, data)?)?;
    let u: Vec<i64> = (0..ell).map(|_| rng.gen_range(0..q)).collect();
    a.left_mul(&u)
}

/// Decode `c + e` with the given positions erased and classify the answer.
pub fn classify(scheme: &dyn Scheme, c: &[i64], error: &[(usize, i64)], erased: &[usize]) -> Result<SweepReport> {
    let mut values = c.to_vec();
    for &(j, v) in error {
        values[j] += v;
    }
    let mut flags = vec![false; c.len()];
    for &j in erased {
        flags[j] = true;
    }
    let out = scheme.decode(&ReadVector::new(values, flags)?)?;
    let mut r = SweepReport {
        trials: 1,
        ..SweepReport::default()
    };
    match out {
        DecodeOutcome::Prefix(p) if p == c[..scheme.k()] => r.correct = 1,
        DecodeOutcome::Prefix(_) => r.wrong = 1,
        DecodeOutcome::Failure => r.detected = 1,
    }
    Ok(r)
}

pub fn sweep(scheme: &dyn Scheme, cfg: &SweepConfig) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let words = (0..cfg.words)
        .map(|_| random_codeword(scheme, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let patterns = cfg.pattern.enumerate(scheme.n());
    const CHUNK: usize = 512;
    let jobs: Vec<(usize, usize)> = (0..words.len())
        .flat_map(|w| (0..patterns.len()).step_by(CHUNK).map(move |s| (w, s)))
        .collect();
    let partial = cfg.exec.try_map(jobs, |(w, start)| {
        let mut r = SweepReport::default();
        for (e, erased) in &patterns[start..(start + CHUNK).min(patterns.len())] {
            r.absorb(classify(scheme, &words[w], e, erased)?);
        }
        Ok(r)
    })?;
    let mut report = SweepReport {
        words: words.len(),
        ..SweepReport::default()
    };
    for r in partial {
        report.absorb(r);
    }
    Ok(report)
}
