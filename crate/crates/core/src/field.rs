//! Arithmetic in the prime field GF(p) with the Lee-metric sign convention:
//! elements `(p+1)/2 .. p-1` are the "negative" ones.

use crate::arith::{is_prime, modulo, mul_mod, pow_mod};
use crate::error::{param, Error, Result};

/// Square roots are found by exhaustive search up to this modulus and by
/// Tonelli-Shanks above it.
pub const EXHAUSTIVE_SQRT_LIMIT: u64 = 10_000;

/// GF(p) for an odd prime `p < 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: i64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return param(format!("field modulus {p} exceeds 2^32"));
        }
        if p < 3 || !is_prime(p) {
            return param(format!("{p} is not an odd prime"));
        }
        Ok(Self { p: p as i64 })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> i64 {
        modulo(x, self.p)
    }

    #[inline]
    pub fn add(&self, a: i64, b: i64) -> i64 {
        modulo(a + b, self.p)
    }

    #[inline]
    pub fn sub(&self, a: i64, b: i64) -> i64 {
        modulo(a - b, self.p)
    }

    #[inline]
    pub fn neg(&self, a: i64) -> i64 {
        modulo(-a, self.p)
    }

    #[inline]
    pub fn mul(&self, a: i64, b: i64) -> i64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, a: i64, e: u64) -> i64 {
        pow_mod(a, e, self.p)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: i64) -> Result<i64> {
        let a = self.reduce(a);
        if a == 0 {
            return Err(Error::Domain(format!("0 has no inverse in GF({})", self.p)));
        }
        let (mut r0, mut r1) = (self.p, a);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        Ok(self.reduce(t0))
    }

    pub fn div(&self, a: i64, b: i64) -> Result<i64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn is_square(&self, a: i64) -> bool {
        let a = self.reduce(a);
        a == 0 || self.pow(a, ((self.p - 1) / 2) as u64) == 1
    }

    /// Some square root of `a`, if one exists.
    pub fn sqrt(&self, a: i64) -> Option<i64> {
        if self.p as u64 <= EXHAUSTIVE_SQRT_LIMIT {
            self.sqrt_exhaustive(a)
        } else {
            self.sqrt_tonelli_shanks(a)
        }
    }

    /// Smallest `x` with `x^2 = a`.
    pub fn sqrt_exhaustive(&self, a: i64) -> Option<i64> {
        let a = self.reduce(a);
        (0..self.p).find(|&x| self.mul(x, x) == a)
    }

    /// Tonelli-Shanks; returns the smaller of the two roots.
    pub fn sqrt_tonelli_shanks(&self, a: i64) -> Option<i64> {
        let p = self.p;
        let a = self.reduce(a);
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let mut q = (p - 1) as u64;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = (2..p)
            .find(|&z| !self.is_square(z))
            .expect("odd prime has a non-residue");
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r.min(p - r))
    }

    /// All roots of `x^2 + b x + c` in GF(p), ascending.
    pub fn quadratic_roots(&self, b: i64, c: i64) -> Vec<i64> {
        let b = self.reduce(b);
        let c = self.reduce(c);
        let disc = self.sub(self.mul(b, b), self.mul(4, c));
        let Some(root) = self.sqrt(disc) else {
            return Vec::new();
        };
        let half = self.inv(2).expect("p is odd");
        let x1 = self.mul(self.sub(root, b), half);
        let x2 = self.mul(self.sub(self.neg(root), b), half);
        let mut roots = vec![x1, x2];
        roots.sort_unstable();
        roots.dedup();
        roots
    }

    /// Signed representative in `[-(p-1)/2, (p-1)/2]`.
    pub fn signed_value(&self, z: i64) -> i64 {
        let z = self.reduce(z);
        if z <= (self.p - 1) / 2 {
            z
        } else {
            z - self.p
        }
    }

    /// The smallest generator of the multiplicative group.
    pub fn primitive_element(&self) -> i64 {
        let order = self.p - 1;
        let mut factors = Vec::new();
        let (mut rest, mut d) = (order, 2);
        while d * d <= rest {
            if rest % d == 0 {
                factors.push(d);
                while rest % d == 0 {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            factors.push(rest);
        }
        (2..self.p)
            .find(|&g| factors.iter().all(|&r| self.pow(g, (order / r) as u64) != 1))
            .unwrap_or(1)
    }

    /// Lee absolute value `min(z, p - z)`.
    pub fn lee_abs(&self, z: i64) -> i64 {
        self.signed_value(z).abs()
    }
}
