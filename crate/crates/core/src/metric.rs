//! L1 (Manhattan) and Hamming metrics over integer vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    L1,
    Hamming,
}

impl Metric {
    pub fn weight(self, e: &[i64]) -> u64 {
        match self {
            Metric::L1 => l1_norm(e),
            Metric::Hamming => e.iter().filter(|&&v| v != 0).count() as u64,
        }
    }

    pub fn distance(self, x: &[i64], y: &[i64]) -> Result<u64> {
        match self {
            Metric::L1 => l1_dist(x, y),
            Metric::Hamming => hamming_dist(x, y),
        }
    }
}

pub fn l1_norm(e: &[i64]) -> u64 {
    e.iter().map(|v| v.unsigned_abs()).sum()
}

fn check_len(x: &[i64], y: &[i64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!(
            "vectors of length {} and {} cannot be compared",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

pub fn l1_dist(x: &[i64], y: &[i64]) -> Result<u64> {
    check_len(x, y)?;
    Ok(x.iter().zip(y).map(|(a, b)| a.abs_diff(*b)).sum())
}

pub fn hamming_dist(x: &[i64], y: &[i64]) -> Result<u64> {
    check_len(x, y)?;
    Ok(x.iter().zip(y).filter(|(a, b)| a != b).count() as u64)
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of points of `Z^n` within L1 distance `t` of a fixed point:
/// `sum_{i <= min(t,n)} 2^i C(n,i) C(t,i)`.
pub fn sphere_volume_l1(n: u64, t: u64) -> u128 {
    (0..=t.min(n))
        .map(|i| {
            (1u128 << i)
                .checked_mul(binomial(n, i))
                .and_then(|v| v.checked_mul(binomial(t, i)))
                .expect("sphere volume overflows u128")
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_and_distances() {
        assert_eq!(l1_norm(&[0, 0, 0]), 0);
        assert_eq!(l1_norm(&[1, -1, 0]), 2);
        let mut e = vec![0i64; 15];
        e[5] = -1;
        e[13] = 1;
        assert_eq!(l1_norm(&e), 2);
        assert_eq!(hamming_dist(&[0, 0, 0], &[0, 0, 0]).unwrap(), 0);
        assert_eq!(hamming_dist(&[0, 0, 0], &[0, 5, 0]).unwrap(), 1);
        assert!(hamming_dist(&[0, 0], &[0, 0, 0]).is_err());
        assert_eq!(l1_dist(&[0, 5, 0], &[1, 0, 0]).unwrap(), 6);
        assert_eq!(Metric::Hamming.weight(&[0, 3, -2]), 2);
    }

    fn brute_volume(n: u32, t: i64) -> u128 {
        let side = (2 * t + 1) as u64;
        (0..side.pow(n))
            .filter(|&idx| {
                let mut rest = idx;
                let mut w = 0;
                for _ in 0..n {
                    w += ((rest % side) as i64 - t).abs();
                    rest /= side;
                }
                w <= t
            })
            .count() as u128
    }

    #[test]
    fn sphere_volume_matches_enumeration() {
        for n in 1..=4u32 {
            for t in 0..=3i64 {
                assert_eq!(sphere_volume_l1(n as u64, t as u64), brute_volume(n, t), "n={n} t={t}");
            }
        }
        assert_eq!(brute_volume(3, 2), 25);
    }

    #[test]
    fn sphere_volume_radius_one_and_zero() {
        for n in 1..200u64 {
            assert_eq!(sphere_volume_l1(n, 1), (2 * n + 1) as u128);
            assert_eq!(sphere_volume_l1(n, 0), 1);
        }
    }
}
