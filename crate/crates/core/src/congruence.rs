//! The reduction of `p^{s+1}F_{s+1} - p^sF_s · pF_1` to the inner sums `I(b)`
//! and the constants `C_1`, `C_2`.
//!
//! Writing `k = a + bp`, each coefficient splits as
//! `H(a) · H'(b) · Λ(a + bp) · (Γ_p-ratio)`, where `H'` uses the dashed
//! parameters and the Γ_p-ratio is `1 + J_1(a) bp + J_2(a) (bp)^2 mod p^3`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::time::Instant;

use crate::datum::OrderedDatum;
use crate::error::{Error, Result};
use crate::exactmath::{dwork_dash, trunc_digits, PadicValue, ZMod};
use crate::gamma::{g_pair, GammaContext};
use crate::report::CongruenceReport;
use crate::series::{truncated_sums, CoefficientStream, GUARD_DIGITS};

/// Modulus exponent of every congruence in this module.
pub const TARGET: u32 = 3;

/// `ν(a, x)`: 0 if `a <= x`, 1 otherwise.
pub fn nu(a: u64, x: u64) -> u8 {
    u8::from(a > x)
}

/// `ν(a, t_j)` and `ν(a, u_j)` for `a = 0, ..., p-1`.
#[derive(Clone, Debug)]
pub struct NuTable {
    pub t: Vec<[u8; 4]>,
    pub u: Vec<[u8; 4]>,
}

pub fn nu_table(datum: &OrderedDatum) -> NuTable {
    let p = datum.prime;
    let row = |xs: &[u64; 4], a: u64| [nu(a, xs[0]), nu(a, xs[1]), nu(a, xs[2]), nu(a, xs[3])];
    NuTable {
        t: (0..p).map(|a| row(&datum.t, a)).collect(),
        u: (0..p).map(|a| row(&datum.u, a)).collect(),
    }
}

fn one_plus(b: u64, x: &BigRational) -> BigRational {
    BigRational::one() + BigRational::from_integer(BigInt::from(b)) / x
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn lambda_raw(datum: &OrderedDatum, a: u64, b: u64) -> BigRational {
    let mut out = BigRational::one();
    for j in 0..4 {
        if nu(a, datum.t[j]) == 1 {
            out *= one_plus(b, &datum.r_dash[j]);
        }
        if nu(a, datum.u[j]) == 1 {
            out /= one_plus(b, &datum.q_dash[j]);
        }
    }
    out
}

/// Whether `b ≡ -q_2' (mod p)`, the case where `Λ` may have a pole at `p`.
pub fn is_exceptional(datum: &OrderedDatum, b: u64) -> Result<bool> {
    let p = datum.prime;
    let q2 = trunc_digits(&(-&datum.q_dash[1]), p, 0)?;
    Ok(BigInt::from(b % p) == BigInt::from(q2))
}

/// `Λ(a + bp) = ∏ (1 + b/r_j')^{ν(a,t_j)} (1 + b/q_j')^{-ν(a,u_j)}`.
///
/// Fails with `PoleAtB` when `a > u_2` and `b ≡ -q_2' (mod p)`.
pub fn lambda_factor(datum: &OrderedDatum, a: u64, b: u64) -> Result<BigRational> {
    if a > datum.u[1] && is_exceptional(datum, b)? {
        return Err(Error::PoleAtB {
            b,
            prime: datum.prime,
        });
    }
    Ok(lambda_raw(datum, a, b))
}

/// `Λ` with the factor `(1 + b/q_2')` restored for `a >= u_2`.
pub fn lambda_tilde(datum: &OrderedDatum, a: u64, b: u64) -> BigRational {
    let mut out = lambda_raw(datum, a, b);
    if a >= datum.u[1] {
        out *= one_plus(b, &datum.q_dash[1]);
    }
    out
}

/// The six-case closed form of `(1 + b/q_1') Λ(a + bp)`.
pub fn lambda_case_table(datum: &OrderedDatum, a: u64, b: u64) -> BigRational {
    let (t, u) = (&datum.t, &datum.u);
    let r = |j: usize| one_plus(b, &datum.r_dash[j]);
    if a <= u[0] {
        one_plus(b, &datum.q_dash[0])
    } else if a <= t[0] {
        BigRational::one()
    } else if a <= t[1] {
        r(0)
    } else if a <= t[3] {
        r(0) * r(1) * r(2)
    } else if a <= u[1] {
        r(0) * r(1) * r(2) * r(3)
    } else {
        r(0) * r(1) * r(2) * r(3) / one_plus(b, &datum.q_dash[1])
    }
}

/// Indices `a` where the case table disagrees with the definition of `Λ`.
pub fn lambda_table_mismatches(datum: &OrderedDatum, b: u64) -> Vec<u64> {
    (0..datum.prime)
        .filter(|&a| {
            one_plus(b, &datum.q_dash[0]) * lambda_raw(datum, a, b) != lambda_case_table(datum, a, b)
        })
        .collect()
}

/// `J_1(a)` and `J_2(a)` modulo `p^precision` for `a = 0, ..., p-1`.
#[derive(Clone, Debug)]
pub struct JValues {
    pub prime: u64,
    pub precision: u32,
    pub j1: Vec<u128>,
    pub j2: Vec<u128>,
}

impl JValues {
    pub fn j1(&self, a: u64) -> PadicValue {
        self.value(self.j1[a as usize])
    }

    pub fn j2(&self, a: u64) -> PadicValue {
        self.value(self.j2[a as usize])
    }

    fn value(&self, x: u128) -> PadicValue {
        PadicValue::from_parts(self.prime, 0, x, self.precision).expect("positive precision")
    }
}

/// Computes `J_1`, `J_2` from `G_1 mod p^{2r}`, `G_2 mod p^r`.
pub fn j_values(datum: &OrderedDatum, ctx: &GammaContext, r: u32) -> Result<JValues> {
    let p = datum.prime;
    if ctx.prime() != p {
        return Err(Error::PrimeMismatch(ctx.prime(), p));
    }
    if r < TARGET {
        return Err(Error::PrecisionExhausted(format!("J values need r >= {TARGET}, got {r}")));
    }
    let z = ZMod::new(p, r)?;
    let half = z.inv(2).expect("p is odd");
    let mut j1 = Vec::with_capacity(p as usize);
    let mut j2 = Vec::with_capacity(p as usize);
    for a in 0..p {
        let shift = int(a);
        let mut g1r = [0u128; 4];
        let mut g1q = [0u128; 4];
        let mut g2 = 0u128;
        for j in 0..4 {
            let (x1, x2) = g_pair(&(&datum.r[j] + &shift), r, ctx)?;
            let (y1, y2) = g_pair(&(&datum.q[j] + &shift), r, ctx)?;
            g1r[j] = z.reduce(x1.residue(r)?);
            g1q[j] = z.reduce(y1.residue(r)?);
            g2 = z.add(g2, z.sub(x2.residue(r)?, y2.residue(r)?));
        }
        let sum_r = g1r.iter().fold(0, |acc, &x| z.add(acc, x));
        let sum_q = g1q.iter().fold(0, |acc, &x| z.add(acc, x));
        let mut second = z.add(z.mul(half, g2), z.mul(sum_q, z.sub(sum_q, sum_r)));
        for i in 0..4 {
            for k in i + 1..4 {
                second = z.add(second, z.mul(g1r[i], g1r[k]));
                second = z.sub(second, z.mul(g1q[i], g1q[k]));
            }
        }
        j1.push(z.sub(sum_r, sum_q));
        j2.push(second);
    }
    Ok(JValues {
        prime: p,
        precision: r,
        j1,
        j2,
    })
}

/// `∏ Γ_p(r_j + x) / Γ_p(q_j + x)` modulo `p^N`.
fn gamma_quotient(datum: &OrderedDatum, ctx: &GammaContext, x: &BigRational) -> Result<u128> {
    let z = ctx.ring();
    let mut num = 1 % z.modulus();
    let mut den = 1 % z.modulus();
    for j in 0..4 {
        num = z.mul(num, ctx.gamma_rational(&(&datum.r[j] + x))?);
        den = z.mul(den, ctx.gamma_rational(&(&datum.q[j] + x))?);
    }
    Ok(z.mul(num, z.inv(den).expect("Γ_p is a unit")))
}

/// Checks `∏ Γ_p(r_j+a+bp)/Γ_p(q_j+a+bp) ≡ (b = 0 value)(1 + J_1 bp + J_2 (bp)^2) mod p^3`.
pub fn gamma_expansion_holds(
    datum: &OrderedDatum,
    ctx: &GammaContext,
    j: &JValues,
    a: u64,
    b: u64,
) -> Result<bool> {
    let p = datum.prime;
    let z3 = ZMod::new(p, TARGET)?;
    let at0 = z3.reduce(gamma_quotient(datum, ctx, &int(a))?);
    let atb = z3.reduce(gamma_quotient(datum, ctx, &int(a + b * p))?);
    let bp = z3.reduce((b as u128) * (p as u128));
    let series = z3.add(
        z3.add(1, z3.mul(z3.reduce(j.j1[a as usize]), bp)),
        z3.mul(z3.reduce(j.j2[a as usize]), z3.mul(bp, bp)),
    );
    Ok(atb == z3.mul(at0, series))
}

fn padic(x: &BigRational, p: u64, m: u32) -> Result<PadicValue> {
    PadicValue::from_rational(x, p, m)
}

/// `H(0), ..., H(p-1)` at relative precision `m`.
fn base_coefficients(datum: &OrderedDatum, m: u32) -> Result<Vec<PadicValue>> {
    Ok(CoefficientStream::new(datum, m)?
        .take(datum.prime as usize)
        .map(|(_, h)| h)
        .collect())
}

/// `(C_1, C_2)` summed over `[0, u_1]`, `(u_1, t_1]`, `(t_1, t_2]`.
pub fn c_coefficients(datum: &OrderedDatum, j: &JValues) -> Result<(PadicValue, PadicValue)> {
    let p = datum.prime;
    let m = TARGET + GUARD_DIGITS;
    let h = base_coefficients(datum, m)?;
    let pp = PadicValue::from_integer(p as i128, p, m)?;
    let inv_q1 = padic(&datum.q_dash[0].recip(), p, m)?;
    let inv_r1 = padic(&datum.r_dash[0].recip(), p, m)?;
    let (t, u) = (&datum.t, &datum.u);

    let mut c1 = PadicValue::zero(p);
    let mut c2 = PadicValue::zero(p);
    for a in 0..=t[1] {
        let ha = &h[a as usize];
        let pj1 = pp.try_mul(&j.j1(a))?;
        let (t1, t2) = if a <= u[0] {
            (pj1.try_add(&inv_q1)?, j.j1(a).try_mul(&inv_q1)?)
        } else if a <= t[0] {
            (pj1, pp.try_mul(&j.j2(a))?)
        } else {
            (pj1.try_add(&inv_r1)?, j.j1(a).try_mul(&inv_r1)?)
        };
        c1 = c1.try_add(&ha.try_mul(&t1)?)?;
        c2 = c2.try_add(&ha.try_mul(&t2)?)?;
    }
    Ok((c1.shift(1), c2.shift(2)))
}

/// One inner sum `I(b)` compared against `C_1 b + C_2 b^2`.
#[derive(Clone, Debug)]
pub struct InnerSumReport {
    pub b: u64,
    /// Smallest `s` with `b < p^s`.
    pub s: u32,
    pub exceptional: bool,
    pub i_b: PadicValue,
    /// `Ĩ(b)`, only when `b ≡ -q_2' (mod p)`.
    pub i_tilde: Option<PadicValue>,
    pub c_poly: PadicValue,
    /// `I(b)` (or `Ĩ(b)` when exceptional) `≡ C_1 b + C_2 b^2 mod p^3`.
    pub equivalent: bool,
    /// `p^s H(b) I(b) ≡ 0 mod p^3`.
    pub scaled_vanishes: bool,
    /// `p^s H(b) I(b) ≡ p^s H(b) Ĩ(b) mod p^3`, when exceptional.
    pub tilde_agrees: Option<bool>,
}

fn minimal_s(b: u64, p: u64) -> u32 {
    let mut s = 0;
    let mut bound = 1u64;
    while bound <= b {
        bound *= p;
        s += 1;
    }
    s
}

fn inner_sum_with(
    datum: &OrderedDatum,
    b: u64,
    j: &JValues,
    h: &[PadicValue],
    m: u32,
    tilde: bool,
) -> Result<PadicValue> {
    let p = datum.prime;
    let one = PadicValue::one(p, m)?;
    let bp = PadicValue::from_integer((b as i128) * (p as i128), p, m)?;
    let bp2 = bp.try_mul(&bp)?;
    let q1 = one_plus(b, &datum.q_dash[0]);
    let mut total = PadicValue::zero(p);
    for a in 0..p {
        let lam = if tilde {
            lambda_tilde(datum, a, b)
        } else {
            lambda_raw(datum, a, b)
        };
        let factor = padic(&(&q1 * lam), p, m)?;
        let series = one
            .try_add(&j.j1(a).try_mul(&bp)?)?
            .try_add(&j.j2(a).try_mul(&bp2)?)?;
        let bracket = factor.try_mul(&series)?.try_sub(&one)?;
        total = total.try_add(&h[a as usize].try_mul(&bracket)?.shift(1))?;
    }
    Ok(total)
}

/// Working precision for inner sums with `b < p^s`.
fn inner_precision(s: u32) -> u32 {
    TARGET + 2 * s + GUARD_DIGITS + 2
}

fn inner_report(
    datum: &OrderedDatum,
    b: u64,
    hb: &PadicValue,
    j: &JValues,
    h: &[PadicValue],
    c: &(PadicValue, PadicValue),
    m: u32,
) -> Result<InnerSumReport> {
    let p = datum.prime;
    let s = minimal_s(b, p);
    let n = TARGET as i64;
    let bb = PadicValue::from_integer(b as i128, p, m)?;
    let c_poly = c.0.try_mul(&bb)?.try_add(&c.1.try_mul(&bb.try_mul(&bb)?)?)?;
    let exceptional = is_exceptional(datum, b)?;
    let i_b = inner_sum_with(datum, b, j, h, m, false)?;
    let scale = hb.shift(s as i64);
    let scaled = scale.try_mul(&i_b)?;
    let scaled_vanishes = scaled.is_zero_mod(n)?;
    let (i_tilde, equivalent, tilde_agrees) = if exceptional {
        let it = inner_sum_with(datum, b, j, h, m, true)?;
        let eq = it.congruent(&c_poly, n)?;
        let agrees = scaled.congruent(&scale.try_mul(&it)?, n)?;
        (Some(it), eq, Some(agrees))
    } else {
        let eq = i_b.congruent(&c_poly, n)?;
        (None, eq, None)
    };
    Ok(InnerSumReport {
        b,
        s,
        exceptional,
        i_b,
        i_tilde,
        c_poly,
        equivalent,
        scaled_vanishes,
        tilde_agrees,
    })
}

/// `I(b)` for a single `b`.
pub fn inner_sum(datum: &OrderedDatum, b: u64, j: &JValues) -> Result<InnerSumReport> {
    let s = minimal_s(b, datum.prime);
    let m = inner_precision(s);
    let h = base_coefficients(datum, m)?;
    let hb = CoefficientStream::new(datum, m)?
        .nth(b as usize)
        .map(|(_, x)| x)
        .expect("stream is infinite");
    let c = c_coefficients(datum, j)?;
    inner_report(datum, b, &hb, j, &h, &c, m)
}

/// `I(b)` for every `b < p^s`.
pub fn inner_sums(datum: &OrderedDatum, s: u32, j: &JValues) -> Result<Vec<InnerSumReport>> {
    let p = datum.prime;
    let m = inner_precision(s);
    let h = base_coefficients(datum, m)?;
    let c = c_coefficients(datum, j)?;
    let n = p.pow(s);
    CoefficientStream::new(datum, m)?
        .take(n as usize)
        .map(|(b, hb)| inner_report(datum, b, &hb, j, &h, &c, m))
        .collect()
}

/// `p^{s+1} F_{s+1} ≡ p^s F_s · p F_1 (mod p^3)` with both residues recorded.
pub fn check_theorem(datum: &OrderedDatum, s: u32, precision: u32) -> Result<CongruenceReport> {
    let start = Instant::now();
    let p = datum.prime;
    let sums = truncated_sums(datum, s + 1, precision)?;
    let lhs = sums[s as usize + 1].shift(s as i64 + 1);
    let f1 = sums[1].shift(1);
    let rhs = sums[s as usize].shift(s as i64).try_mul(&f1)?;
    let l = lhs.residue(TARGET)?;
    let r = rhs.residue(TARGET)?;
    Ok(CongruenceReport::new(&datum.id(), p, s, "theorem")
        .compare(l, r, p, TARGET)
        .timed(start.elapsed().as_millis() as u64))
}

/// `(r)_k/(1)_k = -Γ_p(r+k)/(Γ_p(1+k)Γ_p(r)) · (r')_b/(1)_b · ((r'+b)p)^{ν(a,[-r]_0)}`
/// with `k = a + bp`, checked modulo `p^N` in relative precision.
pub fn shift_factorial_identity(r: &BigRational, k: u64, ctx: &GammaContext) -> Result<bool> {
    let p = ctx.prime();
    let n = ctx.precision();
    let (a, b) = (k % p, k / p);
    let t: u64 = trunc_digits(&(-r), p, 0)?
        .try_into()
        .map_err(|_| Error::PrecisionExhausted("digit".into()))?;
    let rd = dwork_dash(r, p)?;

    let mut lhs = BigRational::one();
    for i in 0..k {
        lhs = lhs * (r + int(i)) / int(i + 1);
    }
    let mut rat = BigRational::one();
    for i in 0..b {
        rat = rat * (&rd + int(i)) / int(i + 1);
    }
    if nu(a, t) == 1 {
        rat *= (&rd + int(b)) * int(p);
    }
    if lhs.is_zero() || rat.is_zero() {
        return Ok(lhs == rat);
    }
    let z = ctx.ring();
    let g = z.mul(
        ctx.gamma_rational(&(r + int(k)))?,
        z.inv(z.mul(ctx.gamma_residue(1 + k as u128), ctx.gamma_rational(r)?))
            .expect("Γ_p is a unit"),
    );
    let quotient = padic(&lhs, p, n)?.try_div(&padic(&rat, p, n)?)?;
    if quotient.valuation() != crate::exactmath::Valuation::Finite(0) {
        return Ok(false);
    }
    Ok(quotient.residue(n)? == z.neg(g))
}

/// `∏ (q_j')_b = ∏ (q_j)_b / (1 + b/q_1')` as exact rationals.
pub fn beta_dash_identity(datum: &OrderedDatum, b: u64) -> bool {
    let poch = |x: &BigRational| (0..b).fold(BigRational::one(), |acc, i| acc * (x + int(i)));
    let dashed: BigRational = datum.q_dash.iter().map(poch).product();
    let plain: BigRational = datum.q.iter().map(poch).product();
    dashed == plain / one_plus(b, &datum.q_dash[0])
}

/// Compares every `H(a + bp)`, `k < p^{s+1}`, with its factorization
/// `H(a) H'(b) Λ(a+bp) ∏ Γ_p(q_j+a)Γ_p(r_j+a+bp) / (Γ_p(r_j+a)Γ_p(q_j+a+bp))`
/// modulo `p^N`, and the two totals at the resulting absolute precision.
pub fn dash_rewrite_holds(datum: &OrderedDatum, s: u32, ctx: &GammaContext) -> Result<bool> {
    let p = datum.prime;
    let n = ctx.precision();
    let z = ctx.ring();
    let h = base_coefficients(datum, n)?;
    let mut dashed = Vec::new();
    let mut hd = BigRational::one();
    let count = p.pow(s);
    for b in 0..count {
        dashed.push(hd.clone());
        let bb = int(b);
        for x in &datum.r_dash {
            hd *= x + &bb;
        }
        for x in &datum.q_dash {
            hd /= x + &bb;
        }
    }
    let base: Vec<u128> = (0..p)
        .map(|a| gamma_quotient(datum, ctx, &int(a)))
        .collect::<Result<_>>()?;
    let mut direct = PadicValue::zero(p);
    let mut rebuilt = PadicValue::zero(p);
    let mut all = true;
    for (k, hk) in CoefficientStream::new(datum, n)?.take((count * p) as usize) {
        let (a, b) = (k % p, k / p);
        let gq = z.mul(
            gamma_quotient(datum, ctx, &int(k))?,
            z.inv(base[a as usize]).expect("unit"),
        );
        let gamma = PadicValue::from_parts(p, 0, gq, n)?;
        let rational = padic(&(&dashed[b as usize] * lambda_raw(datum, a, b)), p, n)?;
        let term = h[a as usize].try_mul(&rational)?.try_mul(&gamma)?;
        let v = hk.valuation().finite().unwrap_or(0);
        all &= hk.congruent(&term, v + n as i64)?;
        direct = direct.try_add(&hk)?;
        rebuilt = rebuilt.try_add(&term)?;
    }
    let abs = direct
        .absolute_precision()
        .unwrap_or(n as i64)
        .min(rebuilt.absolute_precision().unwrap_or(n as i64));
    Ok(all && direct.congruent(&rebuilt, abs)?)
}
