use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::is_p_integral;
use crate::error::{Error, Result};

const WIDE: u128 = 1 << 64;

/// Arithmetic in `Z / p^n Z` with the modulus below `2^127`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZMod {
    prime: u64,
    exponent: u32,
    modulus: u128,
}

impl ZMod {
    pub fn new(prime: u64, exponent: u32) -> Result<Self> {
        let modulus = super::checked_pow(prime, exponent)
            .filter(|&m| m < (1u128 << 127))
            .ok_or(Error::PrecisionUnsupported {
                prime,
                precision: exponent,
            })?;
        Ok(ZMod {
            prime,
            exponent,
            modulus,
        })
    }

    /// Largest exponent this type supports for `prime`.
    pub fn max_exponent(prime: u64) -> u32 {
        let mut n = 0;
        let mut m: u128 = 1;
        while let Some(next) = m.checked_mul(prime as u128) {
            if next >= 1u128 << 127 {
                break;
            }
            m = next;
            n += 1;
        }
        n
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn reduce(&self, x: u128) -> u128 {
        x % self.modulus
    }

    pub fn reduce_signed(&self, x: i128) -> u128 {
        let m = self.modulus as i128;
        x.rem_euclid(m) as u128
    }

    pub fn from_bigint(&self, x: &BigInt) -> u128 {
        x.mod_floor(&BigInt::from(self.modulus))
            .to_u128()
            .expect("reduced value fits")
    }

    /// Image of a p-integral rational.
    pub fn from_rational(&self, x: &BigRational) -> Result<u128> {
        if !is_p_integral(x, self.prime) {
            return Err(Error::NonIntegral {
                value: x.to_string(),
                prime: self.prime,
            });
        }
        let n = self.from_bigint(x.numer());
        let d = self.from_bigint(x.denom());
        Ok(self.mul(n, self.inv(d).expect("denominator is a unit")))
    }

    pub fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + (self.modulus - b)
        }
    }

    pub fn neg(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u128, b: u128) -> u128 {
        if self.modulus <= WIDE {
            (a * b) % self.modulus
        } else {
            mul_wide(a, b, self.modulus)
        }
    }

    pub fn pow(&self, mut base: u128, mut e: u128) -> u128 {
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit, `None` when `p` divides `a`.
    pub fn inv(&self, a: u128) -> Option<u128> {
        if a % self.prime as u128 == 0 && self.exponent > 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, (a % self.modulus) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(self.reduce_signed(s0))
    }

    /// Splits a nonzero integer into `(v_p, unit mod p^n)`.
    pub fn split(&self, x: &BigInt) -> Option<(i64, u128)> {
        if x.is_zero() {
            return None;
        }
        let p = BigInt::from(self.prime);
        let mut x = x.clone();
        let mut v = 0;
        loop {
            let (q, r) = x.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            x = q;
            v += 1;
        }
        Some((v, self.from_bigint(&x)))
    }

    /// Splits a nonzero machine integer into `(v_p, unit mod p^n)`.
    pub fn split_i128(&self, mut x: i128) -> Option<(i64, u128)> {
        if x == 0 {
            return None;
        }
        let p = self.prime as i128;
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        Some((v, self.reduce_signed(x)))
    }
}

fn mul_wide(mut a: u128, mut b: u128, m: u128) -> u128 {
    a %= m;
    b %= m;
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc += a;
            if acc >= m {
                acc -= m;
            }
        }
        a += a;
        if a >= m {
            a -= m;
        }
        b >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let z = ZMod::new(7, 5).unwrap();
        for a in [1u128, 2, 3, 48, 16806] {
            let i = z.inv(a).unwrap();
            assert_eq!(z.mul(a, i), 1);
        }
        assert!(z.inv(14).is_none());
    }

    #[test]
    fn wide_modulus_agrees_with_bigint() {
        let z = ZMod::new(97, 19).unwrap();
        assert!(z.modulus() > WIDE);
        let a = z.modulus() - 12345;
        let b = z.modulus() / 3 + 7;
        let expect = (BigInt::from(a) * BigInt::from(b)) % BigInt::from(z.modulus());
        assert_eq!(BigInt::from(z.mul(a, b)), expect);
    }

    #[test]
    fn rejects_oversized_modulus() {
        assert!(ZMod::new(7, 60).is_err());
        assert_eq!(ZMod::max_exponent(2), 126);
    }

    #[test]
    fn rational_image() {
        let z = ZMod::new(7, 3).unwrap();
        let half = z.from_rational(&super::super::rational(1, 2)).unwrap();
        assert_eq!(z.mul(half, 2), 1);
    }
}
