//! Integer utilities shared by every scheme: remaindering, base-`q` and
//! mixed-radix digit expansions, and the odd weight sequence `f_j(q)` used by
//! the even-alphabet detection variants.

use crate::error::{param, Error, Result};

/// Nonnegative remainder of `x` modulo `m` (the `MOD` operation).
///
/// Panics if `m <= 0`.
#[inline]
pub fn modulo(x: i64, m: i64) -> i64 {
    assert!(m > 0, "modulus must be positive");
    x.rem_euclid(m)
}

/// `(a * b) mod m` without intermediate overflow.
#[inline]
pub fn mul_mod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

/// `base^exp mod m` by square-and-multiply.
pub fn pow_mod(base: i64, mut exp: u64, m: i64) -> i64 {
    let mut acc = modulo(1, m);
    let mut b = modulo(base, m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Exact `base^exp`, or an overflow error.
pub fn checked_pow(base: i64, exp: u32) -> Result<i64> {
    base.checked_pow(exp).ok_or(Error::Overflow("integer power"))
}

/// Smallest `m >= 0` with `q^m >= x`, i.e. `ceil(log_q x)` for `x >= 1`.
pub fn ceil_log(q: i64, x: i64) -> u32 {
    assert!(q >= 2, "base must be at least 2");
    let mut m = 0;
    let mut acc: i64 = 1;
    while acc < x {
        acc = acc.saturating_mul(q);
        m += 1;
    }
    m
}

/// A residue `value` in `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: i64,
    modulus: i64,
}

impl Residue {
    pub fn new(x: i64, modulus: i64) -> Result<Self> {
        if modulus <= 0 {
            return param(format!("modulus must be positive, got {modulus}"));
        }
        Ok(Self {
            value: modulo(x, modulus),
            modulus,
        })
    }

    pub fn value(self) -> i64 {
        self.value
    }

    pub fn modulus(self) -> i64 {
        self.modulus
    }
}

/// Digits of a number in some radix, least-significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    pub digits: Vec<i64>,
    pub base: i64,
}

/// Base-`q` expansion of `x` into exactly `m` digits, least significant first.
pub fn base_q_digits(x: i64, q: i64, m: u32) -> Result<DigitVector> {
    if q < 2 {
        return param(format!("base must be at least 2, got {q}"));
    }
    let limit = q.checked_pow(m);
    if x < 0 || limit.is_some_and(|l| x >= l) {
        return param(format!("{x} is not representable with {m} base-{q} digits"));
    }
    let mut rest = x;
    let digits = (0..m)
        .map(|_| {
            let d = rest % q;
            rest /= q;
            d
        })
        .collect();
    Ok(DigitVector { digits, base: q })
}

/// Inverse of [`base_q_digits`]: `sum_j d_j q^j`.
pub fn base_q_value(digits: &[i64], q: i64) -> Result<i64> {
    digits.iter().rev().try_fold(0i64, |acc, &d| {
        acc.checked_mul(q)
            .and_then(|v| v.checked_add(d))
            .ok_or(Error::Overflow("base-q value"))
    })
}

/// `f_j(q) = (q^{j+1} + (-1)^j) / (q + 1)`, defined for even `q > 2`.
///
/// Every term is odd and `f_0(q) = 1`.
pub fn f_seq(q: i64, j: u32) -> Result<i64> {
    if q <= 2 || q % 2 != 0 {
        return param(format!("f-sequence needs an even base greater than 2, got {q}"));
    }
    let num = checked_pow(q, j + 1)?;
    let signed = if j.is_multiple_of(2) { num + 1 } else { num - 1 };
    Ok(signed / (q + 1))
}

/// The weights `(f_0(q), ..., f_{m-1}(q))`.
pub fn f_weights(q: i64, m: u32) -> Result<Vec<i64>> {
    (0..m).map(|j| f_seq(q, j)).collect()
}

/// Mixed-radix expansion `x = sum_j b_j w_j` with every digit in `[0, q)`.
///
/// Digits are extracted greedily from the heaviest weight down, which is
/// exact for the `f_j(q)` weights (and for powers of `q`). The result is
/// returned least-significant first.
pub fn mixed_radix_digits(x: i64, weights: &[i64], q: i64) -> Result<DigitVector> {
    if x < 0 {
        return param(format!("cannot expand negative value {x}"));
    }
    let mut rest = x;
    let mut digits = vec![0; weights.len()];
    for (j, &w) in weights.iter().enumerate().rev() {
        let d = (rest / w).min(q - 1);
        digits[j] = d;
        rest -= d * w;
    }
    if rest != 0 {
        return param(format!(
            "{x} is not representable with weights {weights:?} and digits below {q}"
        ));
    }
    Ok(DigitVector { digits, base: q })
}

/// `sum_j d_j w_j` over a weight vector.
pub fn weighted_value(digits: &[i64], weights: &[i64]) -> Result<i64> {
    digits.iter().zip(weights).try_fold(0i64, |acc, (&d, &w)| {
        d.checked_mul(w)
            .and_then(|t| acc.checked_add(t))
            .ok_or(Error::Overflow("weighted digit value"))
    })
}

/// Deterministic primality test for `n < 2^32`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    // Miller-Rabin with bases {2, 3, 5, 7} is exact below 3_215_031_751;
    // adding 11 covers the whole u32 range.
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11] {
        let mut x = pow_mod(a as i64, d, n as i64) as u64;
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x as i64, x as i64, n as i64) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= x`.
pub fn next_prime(x: u64) -> u64 {
    let mut c = x.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Largest prime `<= x`, if any.
pub fn prev_prime(x: u64) -> Option<u64> {
    (2..=x).rev().find(|&c| is_prime(c))
}
