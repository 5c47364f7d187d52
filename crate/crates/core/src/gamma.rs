//! Morita's p-adic Gamma function and its Taylor coefficients `G_k`.
//!
//! `Γ_p(n) = (-1)^n ∏_{0<i<n, p∤i} i` on non-negative integers, extended to
//! `Z_p` by continuity. [`GammaContext`] evaluates `Γ_p` modulo `p^N` in
//! `O(N^2)` ring operations per call after an `O(N^3 p)` setup, by storing the
//! product of every aligned block of `p^l` consecutive `p`-free runs as a
//! polynomial in the block index.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactmath::{PadicValue, ZMod};

/// `Γ_p(n)` as an exact integer.
pub fn gamma_int(n: u64, p: u64) -> BigInt {
    let prod = (1..n).filter(|i| i % p != 0).fold(BigInt::one(), |acc, i| acc * i);
    if n % 2 == 0 {
        prod
    } else {
        -prod
    }
}

/// The representative `x_0 ∈ {1, ..., p}` of `x` modulo `p`, so that
/// `Γ_p(x) Γ_p(1 - x) = (-1)^{x_0}`.
pub fn reflection_exponent(x: &BigRational, p: u64) -> Result<u64> {
    let r = crate::exactmath::trunc_digits(x, p, 0)?;
    let r: u64 = r.try_into().expect("residue below p");
    Ok(if r == 0 { p } else { r })
}

type Poly = Vec<u128>;

/// Precomputed tables for `Γ_p` modulo `p^N`.
#[derive(Clone, Debug)]
pub struct GammaContext {
    ring: ZMod,
    /// `prefix[l][d](y)`: product of the first `d` blocks of size `p^l` inside
    /// the aligned block of size `p^{l+1}` with index `y`.
    prefix: Vec<Vec<Poly>>,
    /// `tail[a](j) = ∏_{i=1}^{a-1} (jp + i)`.
    tail: Vec<Poly>,
}

impl GammaContext {
    pub fn new(prime: u64, precision: u32) -> Result<Self> {
        if prime < 7 || !crate::exactmath::is_prime(prime) {
            return Err(Error::InvalidPrime {
                prime,
                reason: "expected a prime at least 7".into(),
            });
        }
        if precision == 0 {
            return Err(Error::PrecisionExhausted("precision must be positive".into()));
        }
        let ring = ZMod::new(prime, precision)?;
        let n = precision as usize;
        let p = prime as u128;

        let mut tail = Vec::with_capacity(prime as usize);
        let mut acc: Poly = vec![1 % ring.modulus()];
        tail.push(acc.clone());
        tail.push(acc.clone());
        for i in 1..p - 1 {
            acc = poly_mul(&ring, &acc, &[ring.reduce(i), ring.reduce(p)], n);
            tail.push(acc.clone());
        }
        let mut block = poly_mul(&ring, &acc, &[ring.reduce(p - 1), ring.reduce(p)], n);

        let mut prefix = Vec::new();
        for _ in 0..n.saturating_sub(1) {
            let mut level = Vec::with_capacity(prime as usize + 1);
            let mut running: Poly = vec![1 % ring.modulus()];
            level.push(running.clone());
            for d in 0..p {
                let shifted = compose_affine(&ring, &block, ring.reduce(p), ring.reduce(d), n);
                running = poly_mul(&ring, &running, &shifted, n);
                level.push(running.clone());
            }
            block = running;
            prefix.push(level);
        }
        Ok(GammaContext { ring, prefix, tail })
    }

    pub fn prime(&self) -> u64 {
        self.ring.prime()
    }

    pub fn precision(&self) -> u32 {
        self.ring.exponent()
    }

    pub fn ring(&self) -> &ZMod {
        &self.ring
    }

    /// `Γ_p(n) mod p^N` for a non-negative integer.
    pub fn gamma_residue(&self, n: u128) -> u128 {
        let ring = &self.ring;
        let p = self.prime() as u128;
        let n = ring.reduce(n);
        let (mut j, a) = (n / p, (n % p) as usize);
        let mut value = if a == 0 {
            1 % ring.modulus()
        } else {
            poly_eval(ring, &self.tail[a], ring.reduce(j))
        };
        let mut level = 0;
        while j > 0 {
            let digit = (j % p) as usize;
            j /= p;
            if digit > 0 {
                let poly = &self.prefix[level][digit];
                value = ring.mul(value, poly_eval(ring, poly, ring.reduce(j)));
            }
            level += 1;
        }
        if n % 2 == 1 {
            ring.neg(value)
        } else {
            value
        }
    }

    /// `Γ_p(x) mod p^N` for a p-integral rational.
    pub fn gamma_rational(&self, x: &BigRational) -> Result<u128> {
        let n = self.ring.from_rational(x)?;
        Ok(self.gamma_residue(n))
    }

    pub fn gamma(&self, x: &BigRational) -> Result<PadicValue> {
        let r = self.gamma_rational(x)?;
        PadicValue::from_parts(self.prime(), 0, r, self.precision())
    }
}

fn poly_mul(ring: &ZMod, a: &[u128], b: &[u128], n: usize) -> Poly {
    let len = (a.len() + b.len() - 1).min(n);
    let mut out = vec![0u128; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (k, &y) in b.iter().enumerate().take(len - i) {
            out[i + k] = ring.add(out[i + k], ring.mul(x, y));
        }
    }
    out
}

/// `h(s y + c)` as a polynomial in `y`, truncated below degree `n`.
fn compose_affine(ring: &ZMod, h: &[u128], s: u128, c: u128, n: usize) -> Poly {
    let mut out: Poly = vec![0];
    for &coef in h.iter().rev() {
        out = poly_mul(ring, &out, &[c, s], n);
        out[0] = ring.add(out[0], coef);
    }
    out
}

fn poly_eval(ring: &ZMod, h: &[u128], y: u128) -> u128 {
    h.iter().rev().fold(0, |acc, &c| ring.add(ring.mul(acc, y), c))
}

/// A Taylor coefficient `G_k(a)` known modulo `p^precision`.
#[derive(Clone, Debug)]
pub struct GApprox {
    pub base: BigRational,
    pub order: u32,
    pub value: PadicValue,
    pub precision: u32,
}

impl GApprox {
    /// The residue modulo `p^n` for `n <= precision`.
    pub fn residue(&self, n: u32) -> Result<u128> {
        if n > self.precision {
            return Err(Error::PrecisionExhausted(format!(
                "G_{} known modulo p^{}, requested p^{n}",
                self.order, self.precision
            )));
        }
        self.value.residue(n)
    }
}

/// `G_1(a), ..., G_t(a)` from the expansion
/// `Γ_p(a + m p^r) / Γ_p(a) ≡ Σ_k G_k(a)/k! (m p^r)^k  (mod p^{(t+1) r})`
/// sampled at `m = 1, ..., t`. `G_k` comes back modulo `p^{(t+1-k) r}`.
pub fn taylor_coefficients(
    ctx: &GammaContext,
    a: &BigRational,
    r: u32,
    t: u32,
) -> Result<Vec<GApprox>> {
    let p = ctx.prime();
    if t == 0 {
        return Ok(Vec::new());
    }
    if t as u64 >= p {
        return Err(Error::SingularSystem);
    }
    let k_total = (t + 1) * r;
    if ctx.precision() < k_total {
        return Err(Error::PrecisionExhausted(format!(
            "order {t} at r = {r} needs p^{k_total}, context has p^{}",
            ctx.precision()
        )));
    }
    let ring = ZMod::new(p, k_total)?;
    let pr = ring.pow(p as u128, r as u128);
    let base = ring.reduce(ctx.ring().from_rational(a)?);
    let g0 = ring.reduce(ctx.gamma_residue(base));
    let g0_inv = ring.inv(g0).expect("Γ_p takes unit values");

    let t_us = t as usize;
    let mut matrix = vec![vec![0u128; t_us + 1]; t_us];
    for (row, m) in (1..=t as u128).enumerate() {
        let arg = ring.add(base, ring.mul(m, pr));
        let ratio = ring.mul(ring.reduce(ctx.gamma_residue(arg)), g0_inv);
        for k in 0..t_us {
            matrix[row][k] = ring.pow(m, k as u128 + 1);
        }
        matrix[row][t_us] = ring.sub(ratio, 1);
    }
    let y = solve_unit_pivot(&ring, matrix)?;

    let mut out = Vec::with_capacity(t_us);
    let mut k_fact = 1u128;
    for (idx, yk) in y.into_iter().enumerate() {
        let k = idx as u32 + 1;
        k_fact = ring.mul(k_fact, k as u128);
        let scale = ring.pow(p as u128, (k * r) as u128);
        if yk % scale != 0 {
            return Err(Error::PrecisionExhausted(format!(
                "coefficient of (m p^r)^{k} is not divisible by p^{}",
                k * r
            )));
        }
        let prec = (t + 1 - k) * r;
        let sub = ZMod::new(p, prec)?;
        let ck = sub.reduce(yk / scale);
        let gk = sub.mul(ck, sub.reduce(k_fact));
        out.push(GApprox {
            base: a.clone(),
            order: k,
            value: PadicValue::from_parts(p, 0, gk, prec)?,
            precision: prec,
        });
    }
    Ok(out)
}

/// `G_1(a) mod p^r`.
pub fn g1_approx(a: &BigRational, r: u32, ctx: &GammaContext) -> Result<GApprox> {
    Ok(taylor_coefficients(ctx, a, r, 1)?.remove(0))
}

/// `G_2(a) mod p^r`.
pub fn g2_approx(a: &BigRational, r: u32, ctx: &GammaContext) -> Result<GApprox> {
    Ok(taylor_coefficients(ctx, a, r, 2)?.remove(1))
}

/// `(G_1(a) mod p^{2r}, G_2(a) mod p^r)` from one set of evaluations.
pub fn g_pair(a: &BigRational, r: u32, ctx: &GammaContext) -> Result<(GApprox, GApprox)> {
    let mut v = taylor_coefficients(ctx, a, r, 2)?;
    let g2 = v.pop().expect("two coefficients");
    let g1 = v.pop().expect("two coefficients");
    Ok((g1, g2))
}

/// `Γ_p(x+1) = -x Γ_p(x)` for `p ∤ x`, `-Γ_p(x)` otherwise, modulo `p^N`.
pub fn functional_equation_holds(ctx: &GammaContext, x: u128) -> bool {
    let ring = ctx.ring();
    let x = ring.reduce(x);
    let lhs = ctx.gamma_residue(ring.add(x, 1));
    let factor = if x % ctx.prime() as u128 == 0 { 1 } else { x };
    lhs == ring.neg(ring.mul(factor, ctx.gamma_residue(x)))
}

/// `Γ_p(x) Γ_p(1-x) = (-1)^{x_0}` modulo `p^N`.
pub fn reflection_holds(ctx: &GammaContext, x: u128) -> bool {
    let ring = ctx.ring();
    let x = ring.reduce(x);
    let prod = ring.mul(ctx.gamma_residue(x), ctx.gamma_residue(ring.sub(1, x)));
    let x0 = match (x % ctx.prime() as u128) as u64 {
        0 => ctx.prime(),
        r => r,
    };
    prod == if x0 % 2 == 0 { 1 } else { ring.neg(1) }
}

/// `(n-1)! = (-1)^n Γ_p(n) ⌊(n-1)/p⌋! p^{⌊(n-1)/p⌋}` as integers, `n >= 1`.
pub fn bridge_holds(n: u64, p: u64) -> bool {
    let q = (n - 1) / p;
    let mut rhs = gamma_int(n, p) * BigInt::from(crate::exactmath::factorial(q)) * BigInt::from(p).pow(q as u32);
    if n % 2 == 1 {
        rhs = -rhs;
    }
    BigInt::from(crate::exactmath::factorial(n - 1)) == rhs
}

/// `|Γ_p(x) - Γ_p(y)|_p <= |x - y|_p` at precision `N`.
pub fn lipschitz_holds(ctx: &GammaContext, x: u128, y: u128) -> bool {
    let ring = ctx.ring();
    let (x, y) = (ring.reduce(x), ring.reduce(y));
    let v = |d: u128| crate::exactmath::vp_u128(d, ctx.prime()).unwrap_or(ctx.precision());
    v(ring.sub(ctx.gamma_residue(x), ctx.gamma_residue(y))) >= v(ring.sub(x, y))
}

/// `Γ_p(a + m p^r)/Γ_p(a) - Σ_{k<=t} G_k(a)/k! (m p^r)^k ≡ 0 (mod p^{(t+1) r})`,
/// with `G_k` extracted from the samples `m = 1, ..., t`.
pub fn taylor_residual_vanishes(ctx: &GammaContext, a: &BigRational, m: u128, r: u32, t: u32) -> Result<bool> {
    let p = ctx.prime();
    let n = (t + 1) * r;
    let ring = ZMod::new(p, n)?;
    let gs = taylor_coefficients(ctx, a, r, t)?;
    let base = ring.reduce(ctx.ring().from_rational(a)?);
    let x = ring.mul(ring.reduce(m), ring.pow(p as u128, r as u128));
    let lhs = ring.mul(
        ring.reduce(ctx.gamma_residue(ring.add(base, x))),
        ring.inv(ring.reduce(ctx.gamma_residue(base))).expect("unit"),
    );
    let mut rhs = 1 % ring.modulus();
    let mut fact = 1u128;
    for g in &gs {
        fact = ring.mul(fact, g.order as u128);
        let gk = ring.reduce(g.value.residue(g.precision)?);
        let term = ring.mul(gk, ring.mul(ring.inv(fact).expect("k < p"), ring.pow(x, g.order as u128)));
        rhs = ring.add(rhs, term);
    }
    Ok(lhs == rhs)
}

/// Outcomes of the `G_k` identities at one argument, each modulo `p^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GIdentities {
    /// `G_1(a) = G_1(1-a)`.
    pub g1_symmetry: bool,
    /// `G_2(a) + G_2(1-a) = 2 G_1(a)^2`.
    pub g2_reflection: bool,
    /// `G_1(1)^2 = G_2(1)` and `G_1(0)^2 = G_2(0)`.
    pub endpoints: bool,
    /// `G_k(a + m p) ≡ G_k(a) (mod p)` for `k = 1, 2`.
    pub shift: bool,
}

impl GIdentities {
    pub fn all(&self) -> bool {
        self.g1_symmetry && self.g2_reflection && self.endpoints && self.shift
    }
}

pub fn g_identities(ctx: &GammaContext, a: &BigRational, m: u64, r: u32) -> Result<GIdentities> {
    let p = ctx.prime();
    let ring = ZMod::new(p, r)?;
    let pair = |x: &BigRational| -> Result<(u128, u128)> {
        let (g1, g2) = g_pair(x, r, ctx)?;
        Ok((g1.residue(r)?, g2.residue(r)?))
    };
    let one = BigRational::one();
    let (g1a, g2a) = pair(a)?;
    let (g1b, g2b) = pair(&(&one - a))?;
    let (g11, g21) = pair(&one)?;
    let (g10, g20) = pair(&BigRational::from_integer(0.into()))?;
    let shifted = a + BigRational::from_integer(BigInt::from(m) * BigInt::from(p));
    let (h1, h2) = pair(&shifted)?;
    Ok(GIdentities {
        g1_symmetry: g1a == g1b,
        g2_reflection: ring.add(g2a, g2b) == ring.mul(2, ring.mul(g1a, g1a)),
        endpoints: ring.mul(g11, g11) == g21 && ring.mul(g10, g10) == g20,
        shift: (h1 + p as u128 - g1a % p as u128) % p as u128 == 0 && (h2 + p as u128 - g2a % p as u128) % p as u128 == 0,
    })
}

/// Gaussian elimination on an augmented matrix whose pivots are units.
fn solve_unit_pivot(ring: &ZMod, mut m: Vec<Vec<u128>>) -> Result<Vec<u128>> {
    let n = m.len();
    let p = ring.prime() as u128;
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| m[r][col] % p != 0)
            .ok_or(Error::SingularSystem)?;
        m.swap(col, pivot);
        let inv = ring.inv(m[col][col]).expect("unit pivot");
        for c in col..=n {
            m[col][c] = ring.mul(m[col][c], inv);
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let f = m[r][col];
                for c in col..=n {
                    let delta = ring.mul(f, m[col][c]);
                    m[r][c] = ring.sub(m[r][c], delta);
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;
    use num_traits::ToPrimitive;

    fn naive_residue(n: u128, p: u64, modulus: u128) -> u128 {
        let mut acc = 1u128;
        for i in 1..n {
            if i % p as u128 != 0 {
                acc = acc * (i % modulus) % modulus;
            }
        }
        if n % 2 == 1 {
            (modulus - acc) % modulus
        } else {
            acc
        }
    }

    #[test]
    fn matches_naive_product() {
        for (p, n_prec) in [(7u64, 4u32), (11, 3), (13, 3)] {
            let ctx = GammaContext::new(p, n_prec).unwrap();
            let m = ctx.ring().modulus();
            for n in (0..m).step_by(37).chain(m - 5..m) {
                assert_eq!(ctx.gamma_residue(n), naive_residue(n, p, m), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn exact_values() {
        assert_eq!(gamma_int(0, 7), BigInt::from(1));
        assert_eq!(gamma_int(1, 7), BigInt::from(-1));
        assert_eq!(gamma_int(9, 7), BigInt::from(-5760));
    }

    #[test]
    fn small_arguments_agree_with_exact() {
        let ctx = GammaContext::new(11, 5).unwrap();
        let m = BigInt::from(ctx.ring().modulus());
        for n in 0..40u64 {
            let exact = ((gamma_int(n, 11) % &m) + &m) % &m;
            assert_eq!(ctx.gamma_residue(n as u128), exact.to_u128().unwrap());
        }
    }

    #[test]
    fn reflection_at_one_half() {
        // Γ_p(1/2)^2 = (-1)^{(p+1)/2}
        for p in [7u64, 11, 13, 17] {
            let ctx = GammaContext::new(p, 6).unwrap();
            let g = ctx.gamma_rational(&rational(1, 2)).unwrap();
            let sq = ctx.ring().mul(g, g);
            let x0 = reflection_exponent(&rational(1, 2), p).unwrap();
            let expect = if x0 % 2 == 0 { 1 } else { ctx.ring().modulus() - 1 };
            assert_eq!(sq, expect);
        }
    }

    #[test]
    fn taylor_orders_and_precisions() {
        let ctx = GammaContext::new(7, 9).unwrap();
        let (g1, g2) = g_pair(&rational(1, 3), 3, &ctx).unwrap();
        assert_eq!(g1.precision, 6);
        assert_eq!(g2.precision, 3);
        let h1 = g1_approx(&rational(1, 3), 3, &ctx).unwrap();
        assert_eq!(h1.residue(3).unwrap(), g1.residue(3).unwrap());
        assert!(taylor_coefficients(&ctx, &rational(1, 3), 4, 2).is_err());
    }

    #[test]
    fn identities_on_a_grid() {
        let ctx = GammaContext::new(11, 9).unwrap();
        for x in (0..ctx.ring().modulus()).step_by(1_000_003).take(200) {
            assert!(functional_equation_holds(&ctx, x));
            assert!(reflection_holds(&ctx, x));
            assert!(lipschitz_holds(&ctx, x, x + 11 * 11 * 5));
        }
        for n in 1..=33 {
            assert!(bridge_holds(n, 11));
        }
        for a in [rational(1, 2), rational(2, 3), rational(5, 7)] {
            let wide = GammaContext::new(11, 10).unwrap();
            for t in [0, 1, 2, 4] {
                assert!(taylor_residual_vanishes(&wide, &a, 17, 2, t).unwrap(), "a={a} t={t}");
            }
            assert!(g_identities(&ctx, &a, 3, 3).unwrap().all(), "a={a}");
        }
    }

    #[test]
    fn rejects_small_primes() {
        assert!(GammaContext::new(5, 3).is_err());
        assert!(GammaContext::new(9, 3).is_err());
    }
}
