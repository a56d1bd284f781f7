//! Prime fields with moduli up to 62 bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive): values must fit in 62 bits.
pub const MODULUS_LIMIT: u64 = 1 << 62;

/// The field `Z/pZ` for a prime `p < 2^62`.
///
/// Elements are plain `u64` values in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MODULUS_LIMIT {
            return Err(Error::InvalidModulus(p, "exceeds 62 bits"));
        }
        if !is_prime(p) {
            return Err(Error::InvalidModulus(p, "not prime"));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces a signed integer into the field.
    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    /// Reduces an unsigned integer into the field.
    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    /// Parses a decimal integer string of any size and reduces it.
    pub fn parse_decimal(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        let (neg, digits) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("not a decimal integer: {s:?}")));
        }
        let mut acc = 0u64;
        for b in digits.bytes() {
            acc = self.add(self.mul(acc, 10), (b - b'0') as u64);
        }
        Ok(if neg { self.neg(acc) } else { acc })
    }

    /// Signed representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            -((self.p - a) as i64)
        } else {
            a as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p <= u32::MAX as u64 {
            (a * b) % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // extended Euclid on signed 128-bit to avoid overflow
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.p as i128) as u64)
    }

    pub fn is_square(&self, a: u64) -> bool {
        a == 0 || self.p == 2 || self.pow(a, (self.p - 1) / 2) == 1
    }

    /// A square root by Tonelli-Shanks, if one exists.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        if a == 0 || p == 2 {
            return Some(a);
        }
        if !self.is_square(a) {
            return None;
        }
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.is_square(z) {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Precomputed quotient for repeated multiplication by the constant `w`.
    #[inline]
    pub fn shoup(&self, w: u64) -> u64 {
        (((w as u128) << 64) / self.p as u128) as u64
    }

    /// `a * w mod p` given `w_shoup = self.shoup(w)`; requires `a < p`.
    #[inline]
    pub fn mul_shoup(&self, a: u64, w: u64, w_shoup: u64) -> u64 {
        let q = ((a as u128 * w_shoup as u128) >> 64) as u64;
        let r = a.wrapping_mul(w).wrapping_sub(q.wrapping_mul(self.p));
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(mut n: u64) -> u64 {
    while !is_prime(n) {
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(1_000_003));
        assert!(is_prime(1_000_033));
        assert!(is_prime(1_000_037));
        assert!(!is_prime(1_000_001));
        assert!(!is_prime(1));
        assert!(is_prime((1u64 << 61) - 1));
        // strong pseudoprime to several small bases
        assert!(!is_prime(3_215_031_751));
        assert_eq!(next_prime(1_000_000), 1_000_003);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(1 << 62).is_err());
        assert!(PrimeField::new((1u64 << 61) - 1).is_ok());
    }

    #[test]
    fn arithmetic() {
        let f = PrimeField::new(1_000_003).unwrap();
        for a in [1u64, 2, 17, 999_999, 1_000_002] {
            let ai = f.inv(a).unwrap();
            assert_eq!(f.mul(a, ai), 1);
        }
        assert_eq!(f.from_i64(-1), 1_000_002);
        assert_eq!(f.parse_decimal("-2000007").unwrap(), f.from_i64(-1));
        assert_eq!(f.parse_decimal("123456789012345678901234567890").unwrap(), {
            // 123456789012345678901234567890 mod 1000003 by chunks
            let mut acc = 0u64;
            for c in "123456789012345678901234567890".bytes() {
                acc = (acc * 10 + (c - b'0') as u64) % 1_000_003;
            }
            acc
        });
        let w = 123_456;
        let ws = f.shoup(w);
        for a in [0u64, 1, 5, 999_999, 1_000_002] {
            assert_eq!(f.mul_shoup(a, w, ws), f.mul(a, w));
        }
    }

    #[test]
    fn square_roots() {
        let f = PrimeField::new(1_000_033).unwrap();
        for a in 1..200u64 {
            match f.sqrt(a) {
                Some(r) => assert_eq!(f.mul(r, r), a),
                None => assert!(!f.is_square(a)),
            }
        }
        let big = PrimeField::new((1u64 << 61) - 1).unwrap();
        let r = big.sqrt(big.mul(987_654_321, 987_654_321)).unwrap();
        assert_eq!(big.mul(r, r), big.mul(987_654_321, 987_654_321));
    }
}
