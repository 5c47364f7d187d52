//! The rational functions
//! `R_i(t) = ∏_j (-t+1-p r_j')_{t_j} (-t+q_1)_{u_1+1} / ((-t+1-p q_1')_{u_1+1} (t)_p^{i+1})`
//! for `i = 1, 2`, their partial fractions, and the residue checks built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::congruence::{c_coefficients, nu, JValues, TARGET};
use crate::datum::OrderedDatum;
use crate::error::{Error, Result};
use crate::exactmath::{residue_mod, vp, Valuation};
use crate::series::exact_coefficients;

/// Dense polynomial over `Q`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c0 + c1 t`.
    pub fn linear(c0: BigRational, c1: BigRational) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Quotient and remainder of division by `t - z`.
    pub fn div_linear(&self, z: &BigRational) -> (Self, BigRational) {
        if self.coeffs.is_empty() {
            return (Self::zero(), BigRational::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![BigRational::zero(); n - 1];
        let mut carry = BigRational::zero();
        for idx in (0..n).rev() {
            let v = &self.coeffs[idx] + &carry * z;
            if idx == 0 {
                return (Self::new(q), v);
            }
            q[idx - 1] = v.clone();
            carry = v;
        }
        unreachable!("loop returns at idx 0")
    }

    /// `P(z), P'(z), P''(z)/2, ...`: the first `n` Taylor coefficients at `z`.
    pub fn taylor_at(&self, z: &BigRational, n: usize) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(n);
        let mut cur = self.clone();
        for _ in 0..n {
            let (q, r) = cur.div_linear(z);
            out.push(r);
            cur = q;
        }
        out
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, other: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        RationalPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, other: &RationalPoly) -> RationalPoly {
        self + &(-other)
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, other: &RationalPoly) -> RationalPoly {
        if self.is_zero() || other.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// A root of the denominator with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pole {
    pub root: BigRational,
    pub order: u32,
}

/// `R_i` as numerator, denominator and the expected poles.
#[derive(Clone, Debug)]
pub struct RFunction {
    pub prime: u64,
    pub i: u32,
    pub numerator: RationalPoly,
    pub denominator: RationalPoly,
    pub poles: Vec<Pole>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `∏_{m<n} (-t + c + m)`.
fn falling_block(c: &BigRational, n: u64) -> RationalPoly {
    (0..n).fold(RationalPoly::constant(BigRational::one()), |acc, m| {
        &acc * &RationalPoly::linear(c + q(m as i64), -BigRational::one())
    })
}

fn product_of_roots(roots: &[(BigRational, u32)]) -> RationalPoly {
    let mut acc = RationalPoly::constant(BigRational::one());
    for (z, e) in roots {
        let lin = RationalPoly::linear(-z, BigRational::one());
        for _ in 0..*e {
            acc = &acc * &lin;
        }
    }
    acc
}

pub fn build_r(datum: &OrderedDatum, i: u32) -> Result<RFunction> {
    if !(1..=2).contains(&i) {
        return Err(Error::InvalidDatum(format!("R_i is defined for i = 1, 2, not {i}")));
    }
    let p = datum.prime;
    let pp = q(p as i64);
    let one = BigRational::one();
    let u1 = datum.u[0];

    let mut numerator = RationalPoly::constant(one.clone());
    for j in 0..4 {
        let c = &one - &pp * &datum.r_dash[j];
        numerator = &numerator * &falling_block(&c, datum.t[j]);
    }
    numerator = &numerator * &falling_block(&datum.q[0], u1 + 1);

    let c = &one - &pp * &datum.q_dash[0];
    let shifted = falling_block(&c, u1 + 1);
    let integer_roots: Vec<(BigRational, u32)> = (0..p).map(|k| (q(-(k as i64)), i + 1)).collect();
    let denominator = &shifted * &product_of_roots(&integer_roots);

    let mut poles: Vec<Pole> = integer_roots
        .into_iter()
        .map(|(root, order)| Pole { root, order })
        .collect();
    for m in 0..=u1 {
        poles.push(Pole {
            root: &c + q(m as i64),
            order: 1,
        });
    }
    Ok(RFunction {
        prime: p,
        i,
        numerator,
        denominator,
        poles,
    })
}

/// Principal part at one pole: `coeffs[j]` multiplies `1/(t - root)^{order - j}`.
#[derive(Clone, Debug)]
pub struct PoleTerms {
    pub root: BigRational,
    pub order: u32,
    pub coeffs: Vec<BigRational>,
}

impl PoleTerms {
    /// The coefficient of `1/(t - root)`.
    pub fn residue(&self) -> &BigRational {
        self.coeffs.last().expect("order >= 1")
    }

    /// The coefficient of `1/(t - root)^order`.
    pub fn leading(&self) -> &BigRational {
        &self.coeffs[0]
    }
}

/// `R_i` split into principal parts; the integer poles `-k` come first in `k` order,
/// then the simple poles `k - p q_1'`, `k = 1, ..., u_1 + 1`.
#[derive(Clone, Debug)]
pub struct PartialFractionDecomp {
    pub prime: u64,
    pub i: u32,
    pub terms: Vec<PoleTerms>,
}

impl PartialFractionDecomp {
    fn integer(&self, k: u64) -> &PoleTerms {
        &self.terms[k as usize]
    }

    /// `A_k`, the coefficient of `1/(t+k)^{i+1}`.
    pub fn a(&self, k: u64) -> &BigRational {
        self.integer(k).leading()
    }

    /// `E_k`, the coefficient of `1/(t+k)^2` when `i = 2`.
    pub fn e(&self, k: u64) -> Option<&BigRational> {
        (self.i == 2).then(|| &self.integer(k).coeffs[1])
    }

    /// `B_k`, the coefficient of `1/(t+k)`.
    pub fn b(&self, k: u64) -> &BigRational {
        self.integer(k).residue()
    }

    /// Residues at the simple poles, in order of `k`.
    pub fn d(&self) -> Vec<&BigRational> {
        self.terms[self.prime as usize..]
            .iter()
            .map(PoleTerms::residue)
            .collect()
    }

    pub fn residue_sum(&self) -> BigRational {
        self.terms
            .iter()
            .fold(BigRational::zero(), |acc, t| acc + t.residue())
    }

    /// Rebuilds `num / den` over the common denominator `den` and compares numerators.
    pub fn reassembles(&self, r: &RFunction) -> bool {
        let mut total = RationalPoly::zero();
        for term in &self.terms {
            let mut quotient = r.denominator.clone();
            for j in 1..=term.order {
                let (next, rem) = quotient.div_linear(&term.root);
                if !rem.is_zero() {
                    return false;
                }
                quotient = next;
                let c = &term.coeffs[(term.order - j) as usize];
                total = &total + &quotient.scale(c);
            }
        }
        total == r.numerator
    }
}

/// Principal parts from local expansions: with `den = (t - z)^e g`, the Laurent
/// coefficients are the first `e` terms of the power series `num / g` at `z`.
pub fn decompose(r: &RFunction) -> Result<PartialFractionDecomp> {
    let total: u32 = r.poles.iter().map(|p| p.order).sum();
    if r.denominator.degree() != Some(total as usize) {
        return Err(Error::UnexpectedPole(format!(
            "denominator degree {:?} differs from the pole count {total}",
            r.denominator.degree()
        )));
    }
    let num_deg = r.numerator.degree().unwrap_or(0);
    if num_deg + 2 > total as usize {
        return Err(Error::UnexpectedPole("degree gap below 2".into()));
    }
    let mut terms = Vec::with_capacity(r.poles.len());
    for pole in &r.poles {
        let e = pole.order as usize;
        let d = r.denominator.taylor_at(&pole.root, 2 * e);
        if d[..e].iter().any(|x| !x.is_zero()) || d[e].is_zero() {
            return Err(Error::UnexpectedPole(format!(
                "{} is not a root of multiplicity {e}",
                pole.root
            )));
        }
        let g = &d[e..];
        let n = r.numerator.taylor_at(&pole.root, e);
        let mut c: Vec<BigRational> = Vec::with_capacity(e);
        for j in 0..e {
            let mut acc = n[j].clone();
            for m in 0..j {
                acc -= &c[m] * &g[j - m];
            }
            c.push(acc / &g[0]);
        }
        terms.push(PoleTerms {
            root: pole.root.clone(),
            order: pole.order,
            coeffs: c,
        });
    }
    Ok(PartialFractionDecomp {
        prime: r.prime,
        i: r.i,
        terms,
    })
}

/// `R_i` built and decomposed.
pub fn r_decomposition(datum: &OrderedDatum, i: u32) -> Result<(RFunction, PartialFractionDecomp)> {
    let r = build_r(datum, i)?;
    let d = decompose(&r)?;
    Ok((r, d))
}

/// `A_k = (t+k)^{i+1} R_i(t)` at `t = -k`, from the factored form.
pub fn a_direct(datum: &OrderedDatum, i: u32, k: u64) -> BigRational {
    let p = datum.prime;
    let pp = q(p as i64);
    let one = BigRational::one();
    let t = q(-(k as i64));
    let mut v = one.clone();
    for j in 0..4 {
        let c = &one - &pp * &datum.r_dash[j];
        for m in 0..datum.t[j] {
            v *= -&t + &c + q(m as i64);
        }
    }
    for m in 0..=datum.u[0] {
        v *= -&t + &datum.q[0] + q(m as i64);
    }
    let c = &one - &pp * &datum.q_dash[0];
    for m in 0..=datum.u[0] {
        v /= -&t + &c + q(m as i64);
    }
    for m in 0..p {
        if m != k {
            v /= (&t + q(m as i64)).pow(i as i32 + 1);
        }
    }
    v
}

fn valuation(x: &BigRational, p: u64) -> Option<i64> {
    vp(x, p).finite()
}

/// `v_p(D_k) >= 3 - i` at every simple pole, with `δ_k = D_k / p^{3-i}`.
#[derive(Clone, Debug)]
pub struct DkReport {
    pub min_valuation: Option<i64>,
    pub deltas: Vec<BigRational>,
    pub holds: bool,
}

pub fn dk_valuation_check(decomp: &PartialFractionDecomp) -> DkReport {
    let p = decomp.prime;
    let bound = 3 - decomp.i as i64;
    let scale = BigRational::from_integer(BigInt::from(p).pow(bound as u32));
    let ds = decomp.d();
    let min_valuation = ds.iter().filter_map(|d| valuation(d, p)).min();
    DkReport {
        min_valuation,
        deltas: ds.iter().map(|d| *d / &scale).collect(),
        holds: ds.iter().all(|d| vp(d, p).is_at_least(bound)),
    }
}

/// `A_k / (p H(k))` against `±1 mod p`, with one sign for all `k`.
#[derive(Clone, Debug)]
pub struct AkReport {
    /// The common sign, when every ratio is `≡ ±1` and they agree.
    pub sign: Option<i8>,
    /// `v_p(A_k) = 1 + v_p(H(k))` for every `k`.
    pub valuations_match: bool,
    pub consistent: bool,
}

pub fn ak_leading_check(decomp: &PartialFractionDecomp, datum: &OrderedDatum) -> Result<AkReport> {
    let p = decomp.prime;
    let h = exact_coefficients(datum, p);
    let pp = q(p as i64);
    let mut signs = Vec::with_capacity(p as usize);
    let mut valuations_match = true;
    for k in 0..p {
        let a = decomp.a(k);
        let ratio = a / (&pp * &h[k as usize]);
        valuations_match &= vp(&ratio, p) == Valuation::Finite(0);
        let res = residue_mod(&ratio, p, 1).ok();
        signs.push(match res {
            Some(x) if x == 1u32.into() => Some(1i8),
            Some(x) if x == (p - 1).into() => Some(-1),
            _ => None,
        });
    }
    let first = signs[0];
    let consistent = first.is_some() && signs.iter().all(|s| *s == first);
    Ok(AkReport {
        sign: if consistent { first } else { None },
        valuations_match,
        consistent,
    })
}

/// `B_k + A_k (J_1(k) + Σ ν(k,t_j)/(p r_j') + ν(u_1+1,k)/(p q_1') - ν(k,u_2)/(p q_2'))`
/// has valuation at least `2 + v_p(A_k)`, for `i = 1`. Returns the failing `k`.
pub fn b_relation_failures(
    decomp: &PartialFractionDecomp,
    datum: &OrderedDatum,
    j: &JValues,
) -> Result<Vec<u64>> {
    if decomp.i != 1 {
        return Err(Error::InvalidDatum("the B_k relation is stated for i = 1".into()));
    }
    let p = decomp.prime;
    let pp = q(p as i64);
    let mut failures = Vec::new();
    for k in 0..p {
        let mut corr = BigRational::from_integer(BigInt::from(j.j1[k as usize]));
        for idx in 0..4 {
            if nu(k, datum.t[idx]) == 1 {
                corr += (&pp * &datum.r_dash[idx]).recip();
            }
        }
        if nu(datum.u[0] + 1, k) == 1 {
            corr += (&pp * &datum.q_dash[0]).recip();
        }
        if nu(k, datum.u[1]) == 1 {
            corr -= (&pp * &datum.q_dash[1]).recip();
        }
        let a = decomp.a(k);
        let diff = decomp.b(k) + a * corr;
        let need = 2 + valuation(a, p).unwrap_or(0);
        if !vp(&diff, p).is_at_least(need) {
            failures.push(k);
        }
    }
    Ok(failures)
}

/// `σ p^i Σ_k B_k ≡ C_i (mod p^3)` with `σ` read off the sign of `A_k / (p H(k))`.
#[derive(Clone, Debug)]
pub struct ResidueCReport {
    pub sign: i8,
    pub scaled_sum: u128,
    pub c: u128,
    pub holds: bool,
}

pub fn residue_to_c_check(
    decomp: &PartialFractionDecomp,
    datum: &OrderedDatum,
    j: &JValues,
) -> Result<ResidueCReport> {
    let p = decomp.prime;
    let ak = ak_leading_check(decomp, datum)?;
    let leading = ak.sign.ok_or_else(|| Error::StructureViolation {
        datum: datum.id(),
        prime: p,
        detail: format!("A_k / (p H(k)) has no common sign for i = {}", decomp.i),
    })?;
    // A^(1) carries one extra factor of -1 relative to A^(2)
    let sign = if decomp.i == 1 { -leading } else { leading };
    let mut sum = (0..p).fold(BigRational::zero(), |acc, k| acc + decomp.b(k));
    sum *= BigRational::from_integer(BigInt::from(p).pow(decomp.i));
    if sign < 0 {
        sum = -sum;
    }
    let scaled: u128 = residue_mod(&sum, p, TARGET)?
        .try_into()
        .expect("below p^3");
    let (c1, c2) = c_coefficients(datum, j)?;
    let c = if decomp.i == 1 { c1 } else { c2 }.residue(TARGET)?;
    Ok(ResidueCReport {
        sign,
        scaled_sum: scaled,
        c,
        holds: scaled == c,
    })
}

/// `Σ_{m<a} 1/(t+m)` and `(Σ 1/(t+m))^2 - Σ 1/(t+m)^2`: the first two
/// logarithmic derivatives of `(t)_a`, exactly.
pub fn pochhammer_log_derivatives(t: &BigRational, a: u64) -> (BigRational, BigRational) {
    let mut s1 = BigRational::zero();
    let mut s2 = BigRational::zero();
    for m in 0..a {
        let inv = (t + q(m as i64)).recip();
        s2 += &inv * &inv;
        s1 += inv;
    }
    let second = &s1 * &s1 - s2;
    (s1, second)
}

/// `t + [-t]_0` and its valuation, floored at zero.
fn digit_shift(t: &BigRational, p: u64) -> Result<(BigRational, BigRational, u32)> {
    let d = BigRational::from_integer(BigInt::from(crate::exactmath::trunc_digits(&(-t), p, 0)?));
    let shift = t + &d;
    let v = match vp(&shift, p) {
        Valuation::Finite(v) if v > 0 => v as u32,
        _ => 0,
    };
    Ok((d, shift, v))
}

/// Context precision needed by [`log_derivative_identities`] for `t` and `n`.
pub fn log_derivative_precision(t: &BigRational, p: u64, n: u32) -> Result<u32> {
    Ok(3 * (n + digit_shift(t, p)?.2))
}

/// Checks both logarithmic-derivative identities for `(t)_a`, `0 <= a < p`, modulo
/// `p^n`. `G_1`, `G_2` are taken at depth `n + v_p(t + [-t]_0)`, so the context needs
/// the precision given by [`log_derivative_precision`].
pub fn log_derivative_identities(
    t: &BigRational,
    a: u64,
    ctx: &crate::gamma::GammaContext,
    n: u32,
) -> Result<(bool, bool)> {
    use crate::exactmath::PadicValue;
    use crate::gamma::g_pair;
    let p = ctx.prime();
    if a >= p {
        return Err(Error::InvalidDatum(format!("shift {a} is not below p = {p}")));
    }
    let (d, shift, v) = digit_shift(t, p)?;
    let (g1t, g2t) = g_pair(t, n + v, ctx)?;
    let (g1a, g2a) = g_pair(&(t + q(a as i64)), n + v, ctx)?;
    let nu_val = nu(a, d.to_integer().try_into().expect("digit"));
    let m = 2 * (n + v) + 2;
    let pv = |x: &BigRational| PadicValue::from_rational(x, p, m);
    let g = |x: &crate::gamma::GApprox| -> Result<PadicValue> {
        Ok(x.value.with_relative_precision(x.precision))
    };
    let (g1t, g2t, g1a, g2a) = (g(&g1t)?, g(&g2t)?, g(&g1a)?, g(&g2a)?);
    let correction = if nu_val == 1 && !shift.is_zero() {
        pv(&shift.recip())?
    } else {
        PadicValue::zero(p)
    };
    let first = g1a.try_sub(&g1t)?.try_add(&correction)?;
    let (e1, e2) = pochhammer_log_derivatives(t, a);
    let ok1 = pv(&e1)?.congruent(&first, n as i64)?;
    let second = first
        .try_mul(&first)?
        .try_add(&g2a.try_sub(&g2t)?)?
        .try_sub(&g1a.try_mul(&g1a)?)?
        .try_add(&g1t.try_mul(&g1t)?)?
        .try_sub(&correction.try_mul(&correction)?)?;
    let ok2 = pv(&e2)?.congruent(&second, n as i64)?;
    Ok((ok1, ok2))
}

/// Least common denominator of the coefficients.
pub fn common_denominator(poly: &RationalPoly) -> BigInt {
    poly.coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
        .abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::j_values;
    use crate::datum::{order_datum, HyperDatum};
    use crate::exactmath::rational;
    use crate::gamma::GammaContext;

    #[test]
    fn poly_basics() {
        let p = RationalPoly::new(vec![q(-1), q(0), q(1)]); // t^2 - 1
        let (quo, rem) = p.div_linear(&q(1));
        assert!(rem.is_zero());
        assert_eq!(quo, RationalPoly::new(vec![q(1), q(1)]));
        assert_eq!(p.taylor_at(&q(2), 3), vec![q(3), q(4), q(1)]);
        assert_eq!(p.derivative(), RationalPoly::new(vec![q(0), q(2)]));
        assert_eq!(&quo * &RationalPoly::linear(q(-1), q(1)), p);
    }

    #[test]
    fn degrees_of_r() {
        let d = order_datum(&"1/2,1/2,4/3".parse::<HyperDatum>().unwrap(), 7).unwrap();
        let r = build_r(&d, 1).unwrap();
        assert_eq!(r.numerator.degree(), Some(14));
        assert_eq!(r.denominator.degree(), Some(16));
        let r2 = build_r(&d, 2).unwrap();
        assert_eq!(r2.denominator.degree(), Some(23));
    }

    #[test]
    fn decomposition_checks_small() {
        for hd in HyperDatum::canonical() {
            for p in [7u64, 11] {
                let d = order_datum(&hd, p).unwrap();
                let ctx = GammaContext::new(p, 9).unwrap();
                let j = j_values(&d, &ctx, 3).unwrap();
                for i in [1, 2] {
                    let (r, dec) = r_decomposition(&d, i).unwrap();
                    assert!(dec.reassembles(&r), "{hd} p={p} i={i}");
                    assert!(dec.residue_sum().is_zero(), "{hd} p={p} i={i}");
                    assert!(dk_valuation_check(&dec).holds, "{hd} p={p} i={i}");
                    for k in 0..p {
                        assert_eq!(dec.a(k), &a_direct(&d, i, k));
                    }
                    let ak = ak_leading_check(&dec, &d).unwrap();
                    assert!(ak.consistent && ak.valuations_match, "{hd} p={p} i={i}");
                    let rc = residue_to_c_check(&dec, &d, &j).unwrap();
                    assert!(rc.holds, "{hd} p={p} i={i} {rc:?}");
                    if i == 1 {
                        assert!(b_relation_failures(&dec, &d, &j).unwrap().is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn unexpected_pole_is_reported() {
        let d = order_datum(&"1/2,1/2,7/6".parse::<HyperDatum>().unwrap(), 7).unwrap();
        let mut r = build_r(&d, 1).unwrap();
        r.poles[0].root = rational(1, 3);
        assert!(matches!(decompose(&r), Err(Error::UnexpectedPole(_))));
    }

    #[test]
    fn log_derivatives_of_pochhammer() {
        let ctx = GammaContext::new(11, 9).unwrap();
        for t in [rational(1, 2), rational(2, 3), rational(7, 4), rational(3, 5)] {
            for a in [1u64, 4, 9, 10] {
                let (ok1, ok2) = log_derivative_identities(&t, a, &ctx, 2).unwrap();
                assert!(ok1 && ok2, "t={t} a={a}");
            }
        }
        // t + 1 = 3 * 13^3 / 4
        let t = rational(6587, 4);
        assert_eq!(log_derivative_precision(&t, 13, 2).unwrap(), 15);
        let ctx = GammaContext::new(13, 15).unwrap();
        assert_eq!(log_derivative_identities(&t, 2, &ctx, 2).unwrap(), (true, true));
        let small = GammaContext::new(13, 9).unwrap();
        assert!(log_derivative_identities(&t, 2, &small, 2).is_err());
    }
}
