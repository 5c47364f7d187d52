//! Coefficients `H(k) = ∏ (r_j)_k / (q_j)_k`, truncated sums `F_s = Σ_{k<p^s} H(k)`
//! and the piecewise-constant valuation profile of `H`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::io::Write;

use crate::datum::{ordered_jumps, OrderedDatum};
use crate::error::{Error, Result};
use crate::exactmath::{trunc_digits, vp, PadicValue, Valuation, ZMod};

/// Default guard digits on top of the precision a check needs.
pub const GUARD_DIGITS: u32 = 3;

/// `v_p((a)_k) = Σ_{i≥1} ⌊(k + p^i - [-a]_{i-1} - 1) / p^i⌋`.
///
/// `Infinite` when `a` is a non-positive integer `> -k`, so that a factor vanishes.
pub fn pochhammer_valuation(a: &BigRational, k: u64, p: u64) -> Result<Valuation> {
    if k == 0 {
        return Ok(Valuation::Finite(0));
    }
    if a.is_integer() && a.numer() <= &BigInt::zero() && (-a.numer()) < BigInt::from(k) {
        return Ok(Valuation::Infinite);
    }
    let k = BigInt::from(k);
    let mut total = 0i64;
    let mut i = 1u32;
    loop {
        let pi = BigInt::from(p).pow(i);
        let c = BigInt::from(trunc_digits(&(-a), p, i - 1)?);
        if c >= k {
            return Ok(Valuation::Finite(total));
        }
        let term = (&k + &pi - &c - 1u32) / &pi;
        total += term.to_i64().expect("small count");
        i += 1;
    }
}

/// `v_p(H(k))` from the Pochhammer formula applied to all eight factors.
pub fn direct_valuation(datum: &OrderedDatum, k: u64) -> Result<i64> {
    let p = datum.prime;
    let mut v = 0i64;
    for (sign, params) in [(1i64, &datum.r), (-1, &datum.q)] {
        for a in params.iter() {
            match pochhammer_valuation(a, k, p)? {
                Valuation::Finite(x) => v += sign * x,
                Valuation::Infinite => unreachable!("parameters are positive"),
            }
        }
    }
    Ok(v)
}

/// Streams `(k, H(k))` for `k = 0, 1, 2, ...` with units kept modulo `p^M`.
#[derive(Clone, Debug)]
pub struct CoefficientStream {
    ring: ZMod,
    alpha: [(i128, i128); 4],
    beta: [(i128, i128); 4],
    constant: u128,
    k: u64,
    valuation: i64,
    unit: u128,
}

impl CoefficientStream {
    pub fn new(datum: &OrderedDatum, precision: u32) -> Result<Self> {
        let ring = ZMod::new(datum.prime, precision)?;
        let (alpha, beta) = datum.small_params();
        // ∏ e_j / ∏ d_j from writing r = n/d, q = m/e
        let mut num = 1 % ring.modulus();
        let mut den = 1 % ring.modulus();
        for &(_, d) in &alpha {
            den = ring.mul(den, ring.reduce_signed(d));
        }
        for &(_, e) in &beta {
            num = ring.mul(num, ring.reduce_signed(e));
        }
        let constant = ring.mul(num, ring.inv(den).expect("denominators are units"));
        Ok(CoefficientStream {
            ring,
            alpha,
            beta,
            constant,
            k: 0,
            valuation: 0,
            unit: 1 % ring.modulus(),
        })
    }

    pub fn precision(&self) -> u32 {
        self.ring.exponent()
    }

    fn current(&self) -> PadicValue {
        PadicValue::from_parts(self.ring.prime(), self.valuation, self.unit, self.ring.exponent())
            .expect("unit is coprime to p")
    }

    fn advance(&mut self) {
        let ring = &self.ring;
        let k = self.k as i128;
        let mut num = self.constant;
        let mut den = 1 % ring.modulus();
        for &(n, d) in &self.alpha {
            let (v, u) = ring.split_i128(n + k * d).expect("positive factor");
            self.valuation += v;
            num = ring.mul(num, u);
        }
        for &(n, d) in &self.beta {
            let (v, u) = ring.split_i128(n + k * d).expect("positive factor");
            self.valuation -= v;
            den = ring.mul(den, u);
        }
        let step = ring.mul(num, ring.inv(den).expect("unit"));
        self.unit = ring.mul(self.unit, step);
        self.k += 1;
    }
}

impl Iterator for CoefficientStream {
    type Item = (u64, PadicValue);

    fn next(&mut self) -> Option<Self::Item> {
        let out = (self.k, self.current());
        self.advance();
        Some(out)
    }
}

/// `H(k)` computed from scratch; its valuation is checked against the Pochhammer formula.
pub fn hyper_coefficient(datum: &OrderedDatum, k: u64, precision: u32) -> Result<PadicValue> {
    let (value, _) = CoefficientStream::new(datum, precision)?
        .nth(k as usize)
        .map(|(i, h)| (h, i))
        .expect("stream is infinite");
    let expected = direct_valuation(datum, k)?;
    if value.valuation() != Valuation::Finite(expected) {
        return Err(Error::StructureViolation {
            datum: datum.id(),
            prime: datum.prime,
            detail: format!("v_p(H({k})) = {} but the Pochhammer formula gives {expected}", value.valuation()),
        });
    }
    Ok(value)
}

/// `[F_0, F_1, ..., F_{s_max}]` from a single pass over `k < p^{s_max}`.
pub fn truncated_sums(datum: &OrderedDatum, s_max: u32, precision: u32) -> Result<Vec<PadicValue>> {
    let p = datum.prime;
    let mut out = Vec::with_capacity(s_max as usize + 1);
    let mut acc = PadicValue::zero(p);
    let mut stream = CoefficientStream::new(datum, precision)?;
    let mut bound = 1u64;
    for s in 0..=s_max {
        while stream.k < bound {
            let (_, h) = stream.next().expect("stream is infinite");
            acc = acc.try_add(&h)?;
        }
        out.push(acc.clone());
        if s < s_max {
            bound = bound
                .checked_mul(p)
                .ok_or_else(|| Error::PrecisionExhausted("p^s overflows the index range".into()))?;
        }
    }
    Ok(out)
}

/// `F_s` with `F_0 = 1`.
pub fn truncated_sum(datum: &OrderedDatum, s: u32, precision: u32) -> Result<PadicValue> {
    Ok(truncated_sums(datum, s, precision)?.pop().expect("nonempty"))
}

/// `H(0), ..., H(n-1)` as exact rationals.
pub fn exact_coefficients(datum: &OrderedDatum, n: u64) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n as usize);
    let mut h = BigRational::one();
    for k in 0..n {
        out.push(h.clone());
        let kk = BigRational::from_integer(BigInt::from(k));
        for a in &datum.r {
            h *= a + &kk;
        }
        for b in &datum.q {
            h /= b + &kk;
        }
    }
    out
}

/// `F_s` as an exact rational.
pub fn exact_truncated_sum(datum: &OrderedDatum, s: u32) -> BigRational {
    let n = datum.prime.pow(s);
    exact_coefficients(datum, n)
        .into_iter()
        .fold(BigRational::zero(), |acc, h| acc + h)
}

/// `v_p(H(k))` on `[0, len)` as a step function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationProfile {
    pub len: u64,
    /// Start index of each piece; the first entry is 0.
    pub breakpoints: Vec<u64>,
    pub values: Vec<i64>,
}

impl ValuationProfile {
    pub fn from_values(values: &[i64]) -> Self {
        let mut breakpoints = Vec::new();
        let mut vals = Vec::new();
        for (k, &v) in values.iter().enumerate() {
            if vals.last() != Some(&v) {
                breakpoints.push(k as u64);
                vals.push(v);
            }
        }
        ValuationProfile {
            len: values.len() as u64,
            breakpoints,
            values: vals,
        }
    }

    pub fn at(&self, k: u64) -> Option<i64> {
        if k >= self.len {
            return None;
        }
        let idx = self.breakpoints.partition_point(|&b| b <= k) - 1;
        Some(self.values[idx])
    }

    pub fn to_vec(&self) -> Vec<i64> {
        (0..self.len).map(|k| self.at(k).expect("in range")).collect()
    }

    /// Writes `k,vp` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["k", "vp"]).map_err(csv_error)?;
        for (k, v) in self.to_vec().into_iter().enumerate() {
            w.write_record([k.to_string(), v.to_string()]).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// The profile on `[0, p^s)` built level by level: on `[0, p^{l+1})`,
/// `v(H(k)) = v(H(k mod p^l)) + #{t^{(l)}_j < k} - #{u^{(l)}_j < k}`.
pub fn valuation_profile(datum: &OrderedDatum, s: u32) -> Result<ValuationProfile> {
    let p = datum.prime;
    let mut values = vec![0i64];
    for level in 0..s {
        let (t, u) = ordered_jumps(&datum.datum, p, level)?;
        let period = values.len();
        let len = period * p as usize;
        let mut next = Vec::with_capacity(len);
        for k in 0..len {
            let kk = k as u128;
            let up = t.iter().filter(|&&x| x < kk).count() as i64;
            let down = u.iter().filter(|&&x| x < kk).count() as i64;
            next.push(values[k % period] + up - down);
        }
        values = next;
    }
    Ok(ValuationProfile::from_values(&values))
}

/// The same profile from the Pochhammer formula at every index.
pub fn valuation_profile_direct(datum: &OrderedDatum, s: u32) -> Result<ValuationProfile> {
    let n = datum.prime.pow(s);
    let values = (0..n)
        .map(|k| direct_valuation(datum, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(ValuationProfile::from_values(&values))
}

/// Closed-form `v_p(H(k))` for `0 <= k < p`: levels `0, -1, 0, 2, 3, 2` on
/// `[0, u1], (u1, t1], (t1, t2], (t3, t4], (t4, u2], (u2, p-1]`.
pub fn base_case_valuation(datum: &OrderedDatum, k: u64) -> i64 {
    let (t, u) = (&datum.t, &datum.u);
    if k <= u[0] {
        0
    } else if k <= t[0] {
        -1
    } else if k <= t[1] {
        0
    } else if k <= t[3] {
        2
    } else if k <= u[1] {
        3
    } else {
        2
    }
}

/// `v_p(x)` as an `i64`, `None` for zero.
pub fn finite_vp(x: &BigRational, p: u64) -> Option<i64> {
    vp(x, p).finite()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{order_datum, HyperDatum};
    use crate::exactmath::rational;

    fn od(s: &str, p: u64) -> OrderedDatum {
        order_datum(&s.parse::<HyperDatum>().unwrap(), p).unwrap()
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_valuation(&rational(1, 1), 49, 7).unwrap(), Valuation::Finite(8));
        assert_eq!(pochhammer_valuation(&rational(1, 2), 5, 7).unwrap(), Valuation::Finite(1));
        assert_eq!(pochhammer_valuation(&rational(7, 1), 3, 7).unwrap(), Valuation::Finite(1));
        assert_eq!(pochhammer_valuation(&rational(-2, 1), 4, 7).unwrap(), Valuation::Infinite);
    }

    #[test]
    fn stream_matches_exact_coefficients() {
        for p in [7u64, 11, 13] {
            for d in HyperDatum::canonical() {
                let o = order_datum(&d, p).unwrap();
                let exact = exact_coefficients(&o, p);
                for ((k, h), e) in CoefficientStream::new(&o, 6).unwrap().zip(exact) {
                    let want = PadicValue::from_rational(&e, p, 6).unwrap();
                    assert_eq!(h, want, "{d} p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn first_sum_is_one() {
        let o = od("1/2,1/2,4/3", 7);
        let sums = truncated_sums(&o, 1, 8).unwrap();
        assert_eq!(sums[0].residue(8).unwrap(), 1);
        let exact = exact_truncated_sum(&o, 1);
        let want = PadicValue::from_rational(&exact, 7, 8).unwrap();
        assert!(sums[1].congruent(&want, 6).unwrap());
    }

    #[test]
    fn profiles_agree() {
        for d in HyperDatum::canonical() {
            let o = order_datum(&d, 11).unwrap();
            assert_eq!(valuation_profile(&o, 2).unwrap(), valuation_profile_direct(&o, 2).unwrap());
            let base = valuation_profile(&o, 1).unwrap();
            for k in 0..11 {
                assert_eq!(base.at(k).unwrap(), base_case_valuation(&o, k), "{d} k={k}");
            }
        }
    }

    #[test]
    fn profile_csv_shape() {
        let o = od("1/2,1/4,7/6", 23);
        let prof = valuation_profile(&o, 1).unwrap();
        let mut buf = Vec::new();
        prof.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,vp\n0,0\n"));
        assert_eq!(text.lines().count(), 24);
        assert_eq!(prof.values, vec![0, -1, 0, 2, 3, 2]);
    }
}
