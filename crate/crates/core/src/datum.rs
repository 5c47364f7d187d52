//! Hypergeometric data `α = {r1, 1-r1, r2, 1-r2}`, `β = {1, 1, q, 2-q}` and
//! their ordering by Dwork dash at a fixed prime.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactmath::{dwork_dash, is_prime, parse_rational, rational, trunc_digits};

/// `(r1, r2, q)` together with the multisets it generates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperDatum {
    pub r1: BigRational,
    pub r2: BigRational,
    pub q: BigRational,
}

const CANONICAL: [(i64, i64, i64, i64, i64, i64); 6] = [
    (1, 2, 1, 2, 4, 3),
    (1, 2, 1, 2, 7, 6),
    (1, 2, 1, 3, 7, 6),
    (1, 2, 1, 3, 5, 4),
    (1, 2, 1, 4, 7, 6),
    (1, 2, 1, 2, 5, 4),
];

impl HyperDatum {
    /// Requires `0 < r1, r2 < 1` and `1 < q < 2`.
    pub fn new(r1: BigRational, r2: BigRational, q: BigRational) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        let two = &one + &one;
        for r in [&r1, &r2] {
            if *r <= zero || *r >= one {
                return Err(Error::InvalidDatum(format!("{r} is not in (0, 1)")));
            }
        }
        if q <= one || q >= two {
            return Err(Error::InvalidDatum(format!("{q} is not in (1, 2)")));
        }
        Ok(HyperDatum { r1, r2, q })
    }

    /// The six tuples, in the order used throughout the reports.
    pub fn canonical() -> Vec<HyperDatum> {
        CANONICAL
            .iter()
            .map(|&(a, b, c, d, e, f)| HyperDatum {
                r1: rational(a, b),
                r2: rational(c, d),
                q: rational(e, f),
            })
            .collect()
    }

    pub fn is_canonical(&self) -> bool {
        Self::canonical().contains(self)
    }

    /// Position in [`HyperDatum::canonical`], or `None`.
    pub fn canonical_index(&self) -> Option<usize> {
        Self::canonical().iter().position(|d| d == self)
    }

    /// `"r1,r2,q"`, the syntax accepted by `FromStr`.
    pub fn id(&self) -> String {
        format!("{},{},{}", self.r1, self.r2, self.q)
    }

    pub fn alpha(&self) -> [BigRational; 4] {
        let one = BigRational::one();
        [
            self.r1.clone(),
            &one - &self.r1,
            self.r2.clone(),
            &one - &self.r2,
        ]
    }

    pub fn beta(&self) -> [BigRational; 4] {
        let one = BigRational::one();
        let two = &one + &one;
        [one.clone(), one, self.q.clone(), two - &self.q]
    }

    /// Rejects primes below 7 and primes dividing a parameter denominator.
    pub fn check_prime(&self, p: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::InvalidPrime {
                prime: p,
                reason: "not prime".into(),
            });
        }
        if p < 7 {
            return Err(Error::InvalidPrime {
                prime: p,
                reason: "primes below 7 are excluded".into(),
            });
        }
        let pb = BigInt::from(p);
        for x in [&self.r1, &self.r2, &self.q] {
            if (x.denom() % &pb).is_zero() {
                return Err(Error::InvalidPrime {
                    prime: p,
                    reason: format!("divides the denominator of {x}"),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for HyperDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HD({})", self.id())
    }
}

impl FromStr for HyperDatum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<_> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidDatum(format!("expected r1,r2,q but got {s:?}")));
        }
        let mut vals = Vec::with_capacity(3);
        for part in parts {
            vals.push(
                parse_rational(part)
                    .ok_or_else(|| Error::InvalidDatum(format!("cannot parse {part:?}")))?,
            );
        }
        let q = vals.pop().expect("three parts");
        let r2 = vals.pop().expect("three parts");
        let r1 = vals.pop().expect("three parts");
        HyperDatum::new(r1, r2, q)
    }
}

/// A datum relabelled at `p` so that the dashes increase.
#[derive(Clone, Debug)]
pub struct OrderedDatum {
    pub datum: HyperDatum,
    pub prime: u64,
    pub r: [BigRational; 4],
    pub q: [BigRational; 4],
    pub r_dash: [BigRational; 4],
    pub q_dash: [BigRational; 4],
    /// `t_j = [-r_j]_0`.
    pub t: [u64; 4],
    /// `u_j = [-q_j]_0`.
    pub u: [u64; 4],
    /// Structural facts that failed but were tolerated.
    pub notes: Vec<String>,
}

impl OrderedDatum {
    pub fn id(&self) -> String {
        self.datum.id()
    }

    /// `H(k)` parameters as `(numerator, denominator)` pairs.
    pub fn small_params(&self) -> ([(i128, i128); 4], [(i128, i128); 4]) {
        let conv = |x: &BigRational| {
            (
                x.numer().to_i128().expect("small numerator"),
                x.denom().to_i128().expect("small denominator"),
            )
        };
        (
            [conv(&self.r[0]), conv(&self.r[1]), conv(&self.r[2]), conv(&self.r[3])],
            [conv(&self.q[0]), conv(&self.q[1]), conv(&self.q[2]), conv(&self.q[3])],
        )
    }
}

fn sort_by_dash(
    params: [BigRational; 4],
    p: u64,
) -> Result<([BigRational; 4], [BigRational; 4], [u64; 4])> {
    let mut rows = Vec::with_capacity(4);
    for (idx, x) in params.into_iter().enumerate() {
        let dash = dwork_dash(&x, p)?;
        let t = trunc_digits(&(-&x), p, 0)?.to_u64().expect("digit below p");
        rows.push((dash, idx, x, t));
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut xs: [BigRational; 4] = Default::default();
    let mut ds: [BigRational; 4] = Default::default();
    let mut ts = [0u64; 4];
    for (slot, (dash, _, x, t)) in rows.into_iter().enumerate() {
        xs[slot] = x;
        ds[slot] = dash;
        ts[slot] = t;
    }
    Ok((xs, ds, ts))
}

/// Relabels `hd` at `p` and checks the interlacing of the `t_j` and `u_j`.
///
/// For the six canonical data a failed identity is an error; for other data it
/// is recorded in `notes`. The equality `t_4 = u_2` occurs for some canonical
/// pairs and is always recorded as a note.
pub fn order_datum(hd: &HyperDatum, p: u64) -> Result<OrderedDatum> {
    hd.check_prime(p)?;
    let (r, r_dash, t) = sort_by_dash(hd.alpha(), p)?;
    let (q, q_dash, u) = sort_by_dash(hd.beta(), p)?;
    let half = rational(1, 2);
    let one = BigRational::one();

    let mut failures = Vec::new();
    let mut notes = Vec::new();
    if t[0] + t[3] != p - 1 || t[1] + t[2] != p - 1 {
        failures.push(format!("t1+t4 = t2+t3 = p-1 fails for t = {t:?}"));
    }
    if u[0] + u[1] != p - 2 || u[2] != p - 1 || u[3] != p - 1 {
        failures.push(format!("u1+u2 = p-2, u3 = u4 = p-1 fails for u = {u:?}"));
    }
    let chain = u[0] < t[0] && t[0] <= t[1] && t[1] == t[2] && t[2] <= t[3] && t[3] <= u[1] && u[1] < u[2];
    if !chain {
        failures.push(format!("interlacing u1 < t1 <= t2 = t3 <= t4 < u2 < u3 fails for t = {t:?}, u = {u:?}"));
    } else if t[3] == u[1] {
        notes.push(format!("t4 = u2 = {}", t[3]));
    }
    if r[1] != half || r[2] != half {
        failures.push("middle alpha entries are not 1/2".into());
    }
    if q[2] != one || q[3] != one {
        failures.push("last beta entries are not 1".into());
    }

    if !failures.is_empty() {
        if hd.is_canonical() {
            return Err(Error::StructureViolation {
                datum: hd.id(),
                prime: p,
                detail: failures.join("; "),
            });
        }
        notes.extend(failures);
    }
    if !hd.is_canonical() {
        notes.push("non-canonical datum".into());
    }
    Ok(OrderedDatum {
        datum: hd.clone(),
        prime: p,
        r,
        q,
        r_dash,
        q_dash,
        t,
        u,
        notes,
    })
}

/// `α_i = {[-r]_i}` and `β_i = {[-q]_i}` by digit scan, each sorted ascending.
pub fn alpha_beta_truncations(hd: &HyperDatum, p: u64, i: u32) -> Result<(Vec<BigUint>, Vec<BigUint>)> {
    hd.check_prime(p)?;
    let scan = |params: [BigRational; 4]| -> Result<Vec<BigUint>> {
        let mut v = params
            .iter()
            .map(|x| trunc_digits(&(-x), p, i))
            .collect::<Result<Vec<_>>>()?;
        v.sort();
        Ok(v)
    };
    Ok((scan(hd.alpha())?, scan(hd.beta())?))
}

fn nearest(num: &BigInt, den: i64) -> BigInt {
    let den = BigInt::from(den);
    (2 * num + &den) / (2 * den)
}

/// Closed forms for `α_i`, `β_i` of the canonical parameter sets, sorted ascending;
/// `None` for parameters outside that family.
pub fn closed_form_truncations(hd: &HyperDatum, p: u64, i: u32) -> Option<(Vec<BigUint>, Vec<BigUint>)> {
    let n = BigInt::from(p).pow(i + 1);
    let one = BigInt::one();
    let half: BigInt = (&n - &one) / 2;
    let floor = |k: i64, d: i64| -> BigInt { (&n * k) / d };
    let r1 = &hd.r1;
    let mut alpha = if *r1 == rational(1, 2) && hd.r2 == rational(1, 2) {
        vec![half.clone(); 4]
    } else {
        let d = hd.r2.denom().to_i64()?;
        if hd.r1 != rational(1, 2) || !(d == 3 || d == 4) || hd.r2.numer() != &BigInt::one() {
            return None;
        }
        vec![floor(1, d), half.clone(), half.clone(), floor(d - 1, d)]
    };
    let qd = hd.q.denom().to_i64()?;
    let qn = hd.q.numer().to_i64()?;
    if qn != qd + 1 || !(qd == 3 || qd == 4 || qd == 6) {
        return None;
    }
    let mut beta = vec![
        nearest(&n, qd) - &one,
        nearest(&(&n * (qd - 1)), qd) - &one,
        &n - &one,
        &n - &one,
    ];
    alpha.sort();
    beta.sort();
    let conv = |v: Vec<BigInt>| v.into_iter().map(|x| x.to_biguint().expect("non-negative")).collect();
    Some((conv(alpha), conv(beta)))
}

/// Sorted `(t^{(i)}, u^{(i)})` with the interlacing
/// `p^i <= u1 < t1 <= t2 = t3 <= t4 < u2 < u3 = u4 = p^{i+1} - 1` verified.
pub fn ordered_jumps(hd: &HyperDatum, p: u64, i: u32) -> Result<([u128; 4], [u128; 4])> {
    let (a, b) = alpha_beta_truncations(hd, p, i)?;
    let conv = |v: Vec<BigUint>| -> [u128; 4] {
        let mut out = [0u128; 4];
        for (slot, x) in out.iter_mut().zip(v) {
            *slot = x.to_u128().expect("truncation fits in u128");
        }
        out
    };
    let (t, u) = (conv(a), conv(b));
    let top = (p as u128).pow(i + 1) - 1;
    let low = (p as u128).pow(i);
    let strict_top = if i == 0 { t[3] <= u[1] } else { t[3] < u[1] };
    let ok = (i == 0 || low <= u[0])
        && u[0] < t[0]
        && t[0] <= t[1]
        && t[1] == t[2]
        && t[2] <= t[3]
        && strict_top
        && u[1] < u[2]
        && u[2] == top
        && u[3] == top;
    if !ok {
        return Err(Error::StructureViolation {
            datum: hd.id(),
            prime: p,
            detail: format!("jump chain fails at level {i}: t = {t:?}, u = {u:?}"),
        });
    }
    Ok((t, u))
}
