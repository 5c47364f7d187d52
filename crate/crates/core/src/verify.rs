//! Batch runs of the checks over `(datum, prime)` work items.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::congruence::{c_coefficients, check_theorem, j_values, TARGET};
use crate::datum::{order_datum, HyperDatum, OrderedDatum};
use crate::error::{Error, Result};
use crate::exactmath::vp;
use crate::gamma::{
    bridge_holds, functional_equation_holds, g_identities, lipschitz_holds, reflection_holds,
    taylor_residual_vanishes, GammaContext,
};
use crate::modular::{
    check_conjecture_1_2, check_conjecture_1_5, check_ratio_coherence, form_assignment, load_form_for,
    ModularFormData,
};
use crate::report::{sort_reports, CongruenceReport};
use crate::residues::{dk_valuation_check, r_decomposition, residue_to_c_check};
use crate::series::GUARD_DIGITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Theorem,
    Conjecture12,
    Conjecture15,
    Csums,
    Residues,
    Gamma,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Theorem,
        Suite::Conjecture12,
        Suite::Conjecture15,
        Suite::Csums,
        Suite::Residues,
        Suite::Gamma,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Theorem => "theorem",
            Suite::Conjecture12 => "conjecture12",
            Suite::Conjecture15 => "conjecture15",
            Suite::Csums => "csums",
            Suite::Residues => "residues",
            Suite::Gamma => "gamma",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub suite: Suite,
    pub data: Vec<HyperDatum>,
    pub primes: Vec<u64>,
    pub s: Vec<u32>,
    pub coeffs: PathBuf,
}

/// Runs the plan on `jobs` threads (all cores when `None`); rows come back sorted.
pub fn run(plan: &Plan, jobs: Option<usize>) -> Result<Vec<CongruenceReport>> {
    let mut forms: HashMap<usize, ModularFormData> = HashMap::new();
    if matches!(plan.suite, Suite::Conjecture12 | Suite::Conjecture15) {
        for (idx, hd) in plan.data.iter().enumerate() {
            if form_assignment(hd).is_some() {
                forms.insert(idx, load_form_for(hd, &plan.coeffs)?);
            }
        }
    }
    let items: Vec<(usize, u64)> = if plan.suite == Suite::Gamma {
        plan.primes.iter().map(|&p| (0, p)).collect()
    } else {
        (0..plan.data.len())
            .flat_map(|i| plan.primes.iter().map(move |&p| (i, p)))
            .collect()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let chunks: Vec<Vec<CongruenceReport>> = pool.install(|| {
        items
            .par_iter()
            .map(|&(idx, p)| {
                if plan.suite == Suite::Gamma {
                    return gamma_suite(p, 500, 100);
                }
                let hd = &plan.data[idx];
                if let Err(e) = hd.check_prime(p) {
                    return Ok(vec![CongruenceReport::new(&hd.id(), p, 0, plan.suite.name())
                        .skipped(format!("inadmissible prime ({e})"))]);
                }
                let d = order_datum(hd, p)?;
                run_item(plan, &d, forms.get(&idx))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut out: Vec<CongruenceReport> = chunks.into_iter().flatten().collect();
    sort_reports(&mut out);
    Ok(out)
}

fn run_item(plan: &Plan, d: &OrderedDatum, form: Option<&ModularFormData>) -> Result<Vec<CongruenceReport>> {
    let p = d.prime;
    let id = d.id();
    let mut out = Vec::new();
    match plan.suite {
        Suite::Theorem => {
            for &s in &plan.s {
                out.push(check_theorem(d, s, TARGET + GUARD_DIGITS)?);
            }
        }
        Suite::Conjecture12 => match form {
            Some(f) => out.push(check_conjecture_1_2(d, f)?),
            None => out.push(CongruenceReport::new(&id, p, 1, "conjecture12").skipped("no form data")),
        },
        Suite::Conjecture15 => {
            for &s in plan.s.iter().filter(|&&s| s >= 1) {
                match form {
                    Some(f) => match check_conjecture_1_5(d, s, f) {
                        Ok(rows) => out.extend(rows),
                        Err(Error::NonOrdinary { .. }) => {
                            out.push(CongruenceReport::new(&id, p, s, "conjecture15").skipped("non-ordinary"))
                        }
                        Err(e) => return Err(e),
                    },
                    None => out.push(CongruenceReport::new(&id, p, s, "conjecture15").skipped("no form data")),
                }
                if s >= 2 {
                    out.push(check_ratio_coherence(d, s)?);
                }
            }
        }
        Suite::Csums => out.extend(csum_reports(d)?),
        Suite::Residues => out.extend(residue_reports(d)?),
        Suite::Gamma => unreachable!("handled per prime"),
    }
    Ok(out)
}

/// `C_1 ≡ C_2 ≡ 0 (mod p^3)`.
pub fn csum_reports(d: &OrderedDatum) -> Result<Vec<CongruenceReport>> {
    let start = Instant::now();
    let p = d.prime;
    let ctx = GammaContext::new(p, 9)?;
    let j = j_values(d, &ctx, 3)?;
    let (c1, c2) = c_coefficients(d, &j)?;
    let ms = start.elapsed().as_millis() as u64;
    Ok(vec![
        CongruenceReport::new(&d.id(), p, 0, "c1")
            .compare(c1.residue(TARGET)?, 0, p, TARGET)
            .timed(ms),
        CongruenceReport::new(&d.id(), p, 0, "c2")
            .compare(c2.residue(TARGET)?, 0, p, TARGET)
            .timed(ms),
    ])
}

/// Exact decomposition, zero residue sum, `v_p(D_k) >= 3 - i`, and the scaled
/// residue sum against `C_i`, for `i = 1, 2`.
pub fn residue_reports(d: &OrderedDatum) -> Result<Vec<CongruenceReport>> {
    let p = d.prime;
    let id = d.id();
    let ctx = GammaContext::new(p, 9)?;
    let j = j_values(d, &ctx, 3)?;
    let mut out = Vec::new();
    for i in 1..=2u32 {
        let start = Instant::now();
        let (r, dec) = r_decomposition(d, i)?;
        let ms = || start.elapsed().as_millis() as u64;
        let name = |c: &str| format!("r{i}-{c}");
        out.push(
            CongruenceReport::new(&id, p, 0, &name("decompose"))
                .verdict(dec.reassembles(&r), "reassembled", "R")
                .timed(ms()),
        );
        let sum = dec.residue_sum();
        let sum_text = if sum.is_zero() {
            "0".to_string()
        } else {
            format!("v_p={}", vp(&sum, p))
        };
        out.push(
            CongruenceReport::new(&id, p, 0, &name("residue-sum"))
                .verdict(sum.is_zero(), sum_text, "0")
                .timed(ms()),
        );
        let dk = dk_valuation_check(&dec);
        out.push(
            CongruenceReport::new(&id, p, 0, &name("dk-valuation"))
                .verdict(
                    dk.holds,
                    dk.min_valuation.map_or("inf".into(), |v| v.to_string()),
                    format!(">={}", 3 - i),
                )
                .timed(ms()),
        );
        let row = CongruenceReport::new(&id, p, 0, &name("scaled-sum"));
        out.push(match residue_to_c_check(&dec, d, &j) {
            Ok(rc) => row.compare(rc.scaled_sum, rc.c, p, TARGET).timed(ms()),
            Err(Error::StructureViolation { detail, .. }) => row.verdict(false, detail, "").timed(ms()),
            Err(e) => return Err(e),
        });
    }
    Ok(out)
}

fn random_unit_rational(rng: &mut ChaCha8Rng, p: u64) -> BigRational {
    let n: u64 = rng.random_range(0..1u64 << 40);
    let d = loop {
        let d: u64 = rng.random_range(1..60);
        if d % p != 0 {
            break d;
        }
    };
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The `Γ_p` and `G_k` identity checks at one prime; `n` arguments for the
/// functional and reflection equations, `m` for the expansion and `G` identities.
pub fn gamma_suite(p: u64, n: usize, m: usize) -> Result<Vec<CongruenceReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let id = "-";
    let mut out = Vec::new();
    let mut push = |check: &str, ok: usize, total: usize, start: Instant| {
        out.push(
            CongruenceReport::new(id, p, 0, check)
                .verdict(ok == total, ok, total)
                .timed(start.elapsed().as_millis() as u64),
        );
    };

    let start = Instant::now();
    let ctx6 = GammaContext::new(p, 6)?;
    let modulus = ctx6.ring().modulus();
    let xs: Vec<u128> = (0..n).map(|_| rng.random_range(0..modulus)).collect();
    push(
        "gamma-functional",
        xs.iter().filter(|&&x| functional_equation_holds(&ctx6, x)).count(),
        n,
        start,
    );
    let start = Instant::now();
    push("gamma-reflection", xs.iter().filter(|&&x| reflection_holds(&ctx6, x)).count(), n, start);
    let start = Instant::now();
    let ys: Vec<u128> = xs
        .iter()
        .map(|&x| {
            let k: u32 = rng.random_range(0..6);
            x.wrapping_add(rng.random_range(1..p as u128) * (p as u128).pow(k)) % modulus
        })
        .collect();
    push(
        "gamma-lipschitz",
        xs.iter().zip(&ys).filter(|(&x, &y)| lipschitz_holds(&ctx6, x, y)).count(),
        n,
        start,
    );
    let start = Instant::now();
    push("gamma-bridge", (1..=3 * p).filter(|&k| bridge_holds(k, p)).count(), 3 * p as usize, start);

    let ctx10 = GammaContext::new(p, 10)?;
    let mut orders = vec![0u32, 1, 2];
    if p >= 11 {
        orders.push(4);
    }
    for t in orders {
        let start = Instant::now();
        let mut ok = 0;
        for _ in 0..m {
            let a = random_unit_rational(&mut rng, p);
            let mm: u128 = rng.random_range(0..1u128 << 60);
            let r = rng.random_range(1..=2u32);
            ok += taylor_residual_vanishes(&ctx10, &a, mm, r, t)? as usize;
        }
        push(&format!("gamma-expansion-t{t}"), ok, m, start);
    }

    let ctx9 = GammaContext::new(p, 9)?;
    let start = Instant::now();
    let mut ok = 0;
    for _ in 0..m {
        let a = random_unit_rational(&mut rng, p);
        let shift = rng.random_range(0..1000u64);
        ok += g_identities(&ctx9, &a, shift, 3)?.all() as usize;
    }
    push("g-identities", ok, m, start);
    Ok(out)
}
