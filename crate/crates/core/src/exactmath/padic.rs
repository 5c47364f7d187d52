use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Valuation, ZMod};
use crate::error::{Error, Result};

/// A p-adic number `p^v * u + O(p^(v + m))` with `u` a unit known modulo `p^m`.
///
/// Zero is either exact or known only modulo some `p^a`. Mixed-prime arithmetic
/// through the operator traits panics; the `try_` methods report it instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicValue {
    prime: u64,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    ExactZero,
    Zero { absolute: i64 },
    Unit { valuation: i64, precision: u32, unit: u128 },
}

impl PadicValue {
    pub fn zero(prime: u64) -> Self {
        PadicValue {
            prime,
            repr: Repr::ExactZero,
        }
    }

    /// Zero known only modulo `p^absolute`.
    pub fn approximate_zero(prime: u64, absolute: i64) -> Self {
        PadicValue {
            prime,
            repr: Repr::Zero { absolute },
        }
    }

    /// `p^valuation * unit` with `unit` read modulo `p^precision`; extra factors of `p`
    /// in `unit` move into the valuation.
    pub fn from_parts(prime: u64, valuation: i64, unit: u128, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::PrecisionExhausted("relative precision must be positive".into()));
        }
        let z = ZMod::new(prime, precision)?;
        Ok(Self::normalize(prime, valuation, z.reduce(unit), precision))
    }

    fn normalize(prime: u64, valuation: i64, unit: u128, precision: u32) -> Self {
        let absolute = valuation + precision as i64;
        if unit == 0 {
            return Self::approximate_zero(prime, absolute);
        }
        let mut u = unit;
        let mut e = 0u32;
        while u % prime as u128 == 0 {
            u /= prime as u128;
            e += 1;
        }
        PadicValue {
            prime,
            repr: Repr::Unit {
                valuation: valuation + e as i64,
                precision: precision - e,
                unit: u,
            },
        }
    }

    pub fn from_rational(x: &BigRational, prime: u64, precision: u32) -> Result<Self> {
        if x.is_zero() {
            return Ok(Self::zero(prime));
        }
        let z = ZMod::new(prime, precision)?;
        if precision == 0 {
            return Err(Error::PrecisionExhausted("relative precision must be positive".into()));
        }
        let (vn, un) = z.split(x.numer()).expect("nonzero numerator");
        let (vd, ud) = z.split(x.denom()).expect("nonzero denominator");
        let unit = z.mul(un, z.inv(ud).expect("unit part is invertible"));
        Ok(PadicValue {
            prime,
            repr: Repr::Unit {
                valuation: vn - vd,
                precision,
                unit,
            },
        })
    }

    pub fn from_integer(n: i128, prime: u64, precision: u32) -> Result<Self> {
        if n == 0 {
            return Ok(Self::zero(prime));
        }
        let z = ZMod::new(prime, precision)?;
        if precision == 0 {
            return Err(Error::PrecisionExhausted("relative precision must be positive".into()));
        }
        let (v, unit) = z.split_i128(n).expect("nonzero");
        Ok(PadicValue {
            prime,
            repr: Repr::Unit {
                valuation: v,
                precision,
                unit,
            },
        })
    }

    pub fn one(prime: u64, precision: u32) -> Result<Self> {
        Self::from_integer(1, prime, precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Exact for nonzero values; a lower bound for approximate zeros.
    pub fn valuation(&self) -> Valuation {
        match self.repr {
            Repr::ExactZero => Valuation::Infinite,
            Repr::Zero { absolute } => Valuation::Finite(absolute),
            Repr::Unit { valuation, .. } => Valuation::Finite(valuation),
        }
    }

    /// Number of known p-adic digits after the leading one; `None` for zeros.
    pub fn relative_precision(&self) -> Option<u32> {
        match self.repr {
            Repr::Unit { precision, .. } => Some(precision),
            _ => None,
        }
    }

    /// The `a` in `O(p^a)`; `None` for an exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::ExactZero => None,
            Repr::Zero { absolute } => Some(absolute),
            Repr::Unit {
                valuation,
                precision,
                ..
            } => Some(valuation + precision as i64),
        }
    }

    pub fn unit(&self) -> Option<u128> {
        match self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// True for exact and approximate zeros.
    pub fn is_zero(&self) -> bool {
        !matches!(self.repr, Repr::Unit { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::ExactZero)
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.prime;
        Ok(match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) => other.clone(),
            (_, Repr::ExactZero) => self.clone(),
            (Repr::Zero { absolute: a }, Repr::Zero { absolute: b }) => {
                Self::approximate_zero(p, (*a).min(*b))
            }
            (Repr::Zero { absolute }, Repr::Unit { .. }) => other.truncate_absolute(*absolute),
            (Repr::Unit { .. }, Repr::Zero { absolute }) => self.truncate_absolute(*absolute),
            (
                Repr::Unit {
                    valuation: va,
                    precision: ma,
                    unit: ua,
                },
                Repr::Unit {
                    valuation: vb,
                    precision: mb,
                    unit: ub,
                },
            ) => {
                let v = (*va).min(*vb);
                let abs = (va + *ma as i64).min(vb + *mb as i64);
                let len = (abs - v) as u32;
                let z = ZMod::new(p, len).expect("length bounded by an operand precision");
                let shifted = |valuation: i64, unit: u128| {
                    let shift = (valuation - v) as u32;
                    if shift >= len {
                        0
                    } else {
                        z.mul(z.reduce(unit), z.pow(p as u128, shift as u128))
                    }
                };
                let s = z.add(shifted(*va, *ua), shifted(*vb, *ub));
                Self::normalize(p, v, s, len)
            }
        })
    }

    /// Drops digits at or beyond `p^absolute`.
    fn truncate_absolute(&self, absolute: i64) -> Self {
        match self.repr {
            Repr::ExactZero => Self::approximate_zero(self.prime, absolute),
            Repr::Zero { absolute: a } => Self::approximate_zero(self.prime, a.min(absolute)),
            Repr::Unit {
                valuation,
                precision,
                unit,
            } => {
                if valuation >= absolute {
                    Self::approximate_zero(self.prime, absolute)
                } else {
                    let m = ((absolute - valuation) as u32).min(precision);
                    let z = ZMod::new(self.prime, m).expect("smaller than existing precision");
                    PadicValue {
                        prime: self.prime,
                        repr: Repr::Unit {
                            valuation,
                            precision: m,
                            unit: z.reduce(unit),
                        },
                    }
                }
            }
        }
    }

    /// Caps the relative precision at `precision` digits.
    pub fn with_relative_precision(&self, precision: u32) -> Self {
        match self.repr {
            Repr::Unit { valuation, .. } => self.truncate_absolute(valuation + precision as i64),
            _ => self.clone(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        match self.repr {
            Repr::Unit {
                valuation,
                precision,
                unit,
            } => {
                let z = ZMod::new(self.prime, precision).expect("existing precision");
                PadicValue {
                    prime: self.prime,
                    repr: Repr::Unit {
                        valuation,
                        precision,
                        unit: z.neg(unit),
                    },
                }
            }
            _ => self.clone(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.prime;
        Ok(match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => Self::zero(p),
            (Repr::Zero { absolute: a }, Repr::Zero { absolute: b }) => Self::approximate_zero(p, a + b),
            (Repr::Zero { absolute }, Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::Zero { absolute }) => {
                Self::approximate_zero(p, absolute + valuation)
            }
            (
                Repr::Unit {
                    valuation: va,
                    precision: ma,
                    unit: ua,
                },
                Repr::Unit {
                    valuation: vb,
                    precision: mb,
                    unit: ub,
                },
            ) => {
                let m = (*ma).min(*mb);
                let z = ZMod::new(p, m).expect("bounded by operand precision");
                PadicValue {
                    prime: p,
                    repr: Repr::Unit {
                        valuation: va + vb,
                        precision: m,
                        unit: z.mul(z.reduce(*ua), z.reduce(*ub)),
                    },
                }
            }
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.prime;
        match (&self.repr, &other.repr) {
            (_, Repr::ExactZero) => Err(Error::DivisionByZero),
            (_, Repr::Zero { absolute }) => Err(Error::PrecisionExhausted(format!(
                "divisor is zero modulo p^{absolute}"
            ))),
            (Repr::ExactZero, _) => Ok(Self::zero(p)),
            (Repr::Zero { absolute }, Repr::Unit { valuation, .. }) => {
                Ok(Self::approximate_zero(p, absolute - valuation))
            }
            (
                Repr::Unit {
                    valuation: va,
                    precision: ma,
                    unit: ua,
                },
                Repr::Unit {
                    valuation: vb,
                    precision: mb,
                    unit: ub,
                },
            ) => {
                let m = (*ma).min(*mb);
                let z = ZMod::new(p, m).expect("bounded by operand precision");
                let inv = z.inv(z.reduce(*ub)).expect("units are invertible");
                Ok(PadicValue {
                    prime: p,
                    repr: Repr::Unit {
                        valuation: va - vb,
                        precision: m,
                        unit: z.mul(z.reduce(*ua), inv),
                    },
                })
            }
        }
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        match &mut out.repr {
            Repr::ExactZero => {}
            Repr::Zero { absolute } => *absolute += k,
            Repr::Unit { valuation, .. } => *valuation += k,
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            let m = self.relative_precision().unwrap_or(1);
            return Self::one(self.prime, m).expect("existing precision");
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.try_mul(self).expect("same prime");
        }
        acc
    }

    /// The value modulo `p^n` as an integer in `[0, p^n)`.
    pub fn residue(&self, n: u32) -> Result<u128> {
        let z = ZMod::new(self.prime, n)?;
        match self.repr {
            Repr::ExactZero => Ok(0),
            Repr::Zero { absolute } => {
                if absolute >= n as i64 {
                    Ok(0)
                } else {
                    Err(Error::PrecisionExhausted(format!(
                        "value known modulo p^{absolute}, residue requested modulo p^{n}"
                    )))
                }
            }
            Repr::Unit {
                valuation,
                precision,
                unit,
            } => {
                if valuation < 0 {
                    return Err(Error::NonIntegral {
                        value: self.to_string(),
                        prime: self.prime,
                    });
                }
                if valuation >= n as i64 {
                    return Ok(0);
                }
                if valuation + (precision as i64) < n as i64 {
                    return Err(Error::PrecisionExhausted(format!(
                        "value known modulo p^{}, residue requested modulo p^{n}",
                        valuation + precision as i64
                    )));
                }
                Ok(z.mul(z.pow(self.prime as u128, valuation as u128), z.reduce(unit)))
            }
        }
    }

    /// Whether the value vanishes modulo `p^n`.
    pub fn is_zero_mod(&self, n: i64) -> Result<bool> {
        match self.repr {
            Repr::ExactZero => Ok(true),
            Repr::Zero { absolute } => {
                if absolute >= n {
                    Ok(true)
                } else {
                    Err(Error::PrecisionExhausted(format!(
                        "zero known modulo p^{absolute}, tested modulo p^{n}"
                    )))
                }
            }
            Repr::Unit { valuation, .. } => Ok(valuation >= n),
        }
    }

    pub fn congruent(&self, other: &Self, n: i64) -> Result<bool> {
        self.try_sub(other)?.is_zero_mod(n)
    }

    /// The rational `p^v * u` represented by the stored digits.
    pub fn to_rational(&self) -> BigRational {
        match self.repr {
            Repr::Unit { valuation, unit, .. } => {
                let p = BigRational::from_integer(BigInt::from(self.prime));
                let u = BigRational::from_integer(BigInt::from(unit));
                if valuation >= 0 {
                    u * p.pow(valuation as i32)
                } else {
                    u / p.pow((-valuation) as i32)
                }
            }
            _ => BigRational::zero(),
        }
    }
}

impl fmt::Display for PadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime;
        match self.repr {
            Repr::ExactZero => write!(f, "0"),
            Repr::Zero { absolute } => write!(f, "O({p}^{absolute})"),
            Repr::Unit {
                valuation,
                precision,
                unit,
            } => write!(f, "{unit}*{p}^{valuation} + O({p}^{})", valuation + precision as i64),
        }
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait for &PadicValue {
            type Output = PadicValue;
            fn $method(self, rhs: &PadicValue) -> PadicValue {
                self.$try(rhs).expect("operands share a prime")
            }
        }
        impl $trait for PadicValue {
            type Output = PadicValue;
            fn $method(self, rhs: PadicValue) -> PadicValue {
                (&self).$try(&rhs).expect("operands share a prime")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for PadicValue {
    type Output = PadicValue;
    fn neg(self) -> PadicValue {
        self.negate()
    }
}

impl Neg for &PadicValue {
    type Output = PadicValue;
    fn neg(self) -> PadicValue {
        self.negate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;

    fn pv(n: i64, d: i64, prec: u32) -> PadicValue {
        PadicValue::from_rational(&rational(n, d), 7, prec).unwrap()
    }

    #[test]
    fn cancellation_leaves_flagged_zero() {
        let a = pv(1, 1, 5);
        let b = PadicValue::from_integer(1 + 7i128.pow(6), 7, 5).unwrap();
        let d = a.try_sub(&b).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.absolute_precision(), Some(5));
        assert!(matches!(a.try_div(&d), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn precision_bookkeeping() {
        let a = pv(49, 3, 4);
        assert_eq!(a.valuation(), Valuation::Finite(2));
        assert_eq!(a.absolute_precision(), Some(6));
        let b = pv(1, 7, 4);
        let s = a.try_add(&b).unwrap();
        assert_eq!(s.valuation(), Valuation::Finite(-1));
        assert_eq!(s.absolute_precision(), Some(3));
    }

    #[test]
    fn exact_zero_division() {
        let z = PadicValue::zero(7);
        assert!(matches!(pv(1, 1, 3).try_div(&z), Err(Error::DivisionByZero)));
    }

    #[test]
    fn mismatched_primes() {
        let a = PadicValue::from_integer(3, 7, 3).unwrap();
        let b = PadicValue::from_integer(3, 11, 3).unwrap();
        assert!(matches!(a.try_add(&b), Err(Error::PrimeMismatch(7, 11))));
    }

    #[test]
    fn residues_and_rational_round_trip() {
        let half = pv(1, 2, 3);
        assert_eq!(half.residue(3).unwrap(), 172);
        assert!(pv(1, 7, 3).residue(1).is_err());
        let x = pv(5, 3, 4);
        let back = PadicValue::from_rational(&x.to_rational(), 7, 4).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn powers() {
        let x = pv(3, 1, 4);
        assert_eq!(x.pow(3).residue(4).unwrap(), 27);
        assert_eq!(x.pow(0).residue(1).unwrap(), 1);
    }
}
