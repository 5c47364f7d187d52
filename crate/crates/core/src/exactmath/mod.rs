//! Exact rational arithmetic with p-adic bookkeeping.
//!
//! Items:
//! - [`Valuation`], [`vp`], [`vp_int`]: valuations with an explicit infinity.
//! - [`trunc_digits`], [`trunc_neg_by_lambda`]: base-p digit truncations `[a]_i`.
//! - [`dwork_dash`]: the map `a -> (a + [-a]_0) / p`.
//! - [`ZMod`]: residues modulo `p^n` on `u128`.
//! - [`PadicValue`]: fixed relative-precision p-adic numbers.

mod padic;
mod zmod;

pub use padic::PadicValue;
pub use zmod::ZMod;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// A p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// `n / d` as a big rational.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Valuation of a machine integer; zero maps to `None`.
pub fn vp_u128(mut n: u128, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as u128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

pub fn vp_int(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        n = q;
        v += 1;
    }
}

pub fn vp(x: &BigRational, p: u64) -> Valuation {
    match (vp_int(x.numer(), p), vp_int(x.denom(), p)) {
        (Valuation::Infinite, _) => Valuation::Infinite,
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        (Valuation::Finite(_), Valuation::Infinite) => unreachable!("denominator is nonzero"),
    }
}

pub fn is_p_integral(x: &BigRational, p: u64) -> bool {
    vp_int(x.denom(), p) == Valuation::Finite(0)
}

/// The least non-negative representative of a p-integral rational modulo `p^n`.
pub fn residue_mod(x: &BigRational, p: u64, n: u32) -> Result<BigUint> {
    if !is_p_integral(x, p) {
        return Err(Error::NonIntegral {
            value: x.to_string(),
            prime: p,
        });
    }
    let modulus = BigInt::from(p).pow(n);
    if modulus.is_one() {
        return Ok(BigUint::zero());
    }
    let inv = mod_inverse_big(&x.denom().mod_floor(&modulus), &modulus)
        .expect("denominator is a unit");
    let r = (x.numer() * inv).mod_floor(&modulus);
    Ok(r.to_biguint().expect("mod_floor is non-negative"))
}

/// `[a]_i`: the integer in `[0, p^{i+1})` congruent to `a` modulo `p^{i+1}`.
pub fn trunc_digits(a: &BigRational, p: u64, i: u32) -> Result<BigUint> {
    residue_mod(a, p, i + 1)
}

/// `[-a/b]_{i-1} = (lambda p^i - a) / b`, where `lambda = a p^{-i} mod b`
/// is lifted to the window that places the result in `[0, p^i)`.
pub fn trunc_neg_by_lambda(a: &BigInt, b: &BigInt, p: u64, i: u32) -> Result<BigUint> {
    if i == 0 {
        return Err(Error::PrecisionExhausted("digit index must be at least 1".into()));
    }
    if !b.is_positive() {
        return Err(Error::InvalidDatum(format!("denominator {b} must be positive")));
    }
    let pb = BigInt::from(p);
    if b.mod_floor(&pb).is_zero() {
        return Err(Error::NonIntegral {
            value: format!("{a}/{b}"),
            prime: p,
        });
    }
    let pi = pb.pow(i);
    let lambda0 = if b.is_one() {
        BigInt::zero()
    } else {
        let inv = mod_inverse_big(&pi.mod_floor(b), b).expect("p is a unit mod b");
        (a * inv).mod_floor(b)
    };
    // smallest lambda with lambda p^i >= a
    let floor_lambda = a.div_ceil(&pi);
    let shift = (&floor_lambda - &lambda0).div_ceil(b);
    let lambda = lambda0 + shift * b;
    let value = (lambda * pi - a) / b;
    Ok(value.to_biguint().expect("window places the result in [0, p^i)"))
}

/// The Dwork dash `a' = (a + [-a]_0) / p`.
pub fn dwork_dash(a: &BigRational, p: u64) -> Result<BigRational> {
    let t = trunc_digits(&(-a), p, 0)?;
    let shifted = a + BigRational::from_integer(BigInt::from_biguint(Sign::Plus, t));
    Ok(shifted / BigRational::from_integer(BigInt::from(p)))
}

/// Modular inverse for big integers; `None` if `a` is not a unit.
pub fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in the closed interval `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// `p^n` if it fits in a `u128`.
pub fn checked_pow(p: u64, n: u32) -> Option<u128> {
    (p as u128).checked_pow(n)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Converts a small rational into an `(i128, i128)` pair with positive denominator.
pub fn small_parts(x: &BigRational) -> Option<(i128, i128)> {
    Some((x.numer().to_i128()?, x.denom().to_i128()?))
}

/// Integer part toward negative infinity.
pub fn floor_rational(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_of_rationals() {
        assert_eq!(vp(&rational(49, 3), 7), Valuation::Finite(2));
        assert_eq!(vp(&rational(3, 98), 7), Valuation::Finite(-2));
        assert_eq!(vp(&rational(0, 1), 7), Valuation::Infinite);
        assert!(Valuation::Finite(100) < Valuation::Infinite);
    }

    #[test]
    fn truncation_of_one_half() {
        // -1/2 = (p-1)/2 + (p-1)/2 p + ...
        let x = rational(-1, 2);
        assert_eq!(trunc_digits(&x, 7, 0).unwrap(), BigUint::from(3u32));
        assert_eq!(trunc_digits(&x, 7, 1).unwrap(), BigUint::from(24u32));
        assert!(trunc_digits(&rational(1, 7), 7, 0).is_err());
    }

    #[test]
    fn residue_formula_matches_direct_truncation() {
        for p in [7u64, 11, 13] {
            for (a, b) in [(1i64, 2i64), (1, 3), (2, 3), (1, 4), (3, 4), (7, 6), (5, 6), (4, 3)] {
                for i in 1..4 {
                    let direct = trunc_digits(&rational(-a, b), p, i - 1).unwrap();
                    let via = trunc_neg_by_lambda(&BigInt::from(a), &BigInt::from(b), p, i).unwrap();
                    assert_eq!(direct, via, "p={p} a={a}/{b} i={i}");
                }
            }
        }
    }

    #[test]
    fn dash_of_small_fractions() {
        // (1/2)' = 1/2 for odd p
        assert_eq!(dwork_dash(&rational(1, 2), 7).unwrap(), rational(1, 2));
        // p = 7: [-1/3]_0 = 2, (1/3 + 2)/7 = 1/3
        assert_eq!(dwork_dash(&rational(1, 3), 7).unwrap(), rational(1, 3));
        assert_eq!(dwork_dash(&rational(1, 3), 11).unwrap(), rational(2, 3));
        assert_eq!(dwork_dash(&rational(1, 1), 11).unwrap(), rational(1, 1));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("7/6"), Some(rational(7, 6)));
        assert_eq!(parse_rational(" 2 "), Some(rational(2, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn prime_listing() {
        assert_eq!(primes_between(7, 31), vec![7, 11, 13, 17, 19, 23, 29, 31]);
    }
}
