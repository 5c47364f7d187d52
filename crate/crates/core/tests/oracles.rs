//! Known values and exact-rational cross-checks.

use num_bigint::BigInt;

use padic_hyper::congruence::{dash_rewrite_holds, inner_sums, j_values};
use padic_hyper::datum::{order_datum, HyperDatum};
use padic_hyper::exactmath::{rational, PadicValue};
use padic_hyper::gamma::{gamma_int, reflection_exponent, GammaContext};
use padic_hyper::modular::kronecker_chi;
use padic_hyper::series::{exact_truncated_sum, truncated_sums, valuation_profile, valuation_profile_direct};

fn hd(text: &str) -> HyperDatum {
    text.parse().unwrap()
}

#[test]
fn gamma_known_values() {
    assert_eq!(gamma_int(0, 7), BigInt::from(1));
    assert_eq!(gamma_int(8, 7), BigInt::from(720));
    assert_eq!(gamma_int(7, 7), BigInt::from(-720));
    let ctx = GammaContext::new(7, 1).unwrap();
    assert_eq!(ctx.gamma_rational(&rational(1, 2)).unwrap(), 6);
    let ctx = GammaContext::new(11, 5).unwrap();
    assert_eq!(ctx.gamma_rational(&rational(1, 1)).unwrap(), ctx.ring().modulus() - 1);
    assert_eq!(reflection_exponent(&rational(1, 2), 7).unwrap(), 4);
    assert_eq!(reflection_exponent(&rational(7, 1), 7).unwrap(), 7);
    assert_eq!(reflection_exponent(&rational(3, 1), 7).unwrap(), 3);
}

#[test]
fn kronecker_known_values() {
    assert_eq!(kronecker_chi(3, 7), -1);
    assert_eq!(kronecker_chi(3, 13), 1);
}

#[test]
fn ordered_datum_known_digits() {
    let d = order_datum(&hd("1/2,1/2,4/3"), 7).unwrap();
    assert_eq!(d.t, [3, 3, 3, 3]);
    assert_eq!(d.u, [1, 4, 6, 6]);
    assert!(order_datum(&hd("1/2,1/2,4/3"), 3).is_err());
}

#[test]
fn truncated_sums_match_exact_rationals() {
    for h in HyperDatum::canonical() {
        for p in [7u64, 11, 13] {
            let d = order_datum(&h, p).unwrap();
            let m = 6;
            let sums = truncated_sums(&d, 2, m).unwrap();
            for s in 1..=2u32 {
                let exact = PadicValue::from_rational(&exact_truncated_sum(&d, s), p, 12).unwrap();
                // every term has valuation at least -s
                assert!(sums[s as usize].congruent(&exact, m as i64 - s as i64).unwrap(), "{h} p={p} s={s}");
            }
        }
    }
}

#[test]
fn inner_sums_reduce_to_c_polynomial() {
    for h in HyperDatum::canonical() {
        let p = 7;
        let d = order_datum(&h, p).unwrap();
        let ctx = GammaContext::new(p, 9).unwrap();
        let j = j_values(&d, &ctx, 3).unwrap();
        for r in inner_sums(&d, 2, &j).unwrap() {
            assert!(r.equivalent, "{h} b={}", r.b);
            assert!(r.scaled_vanishes, "{h} b={}", r.b);
            assert_ne!(r.tilde_agrees, Some(false), "{h} b={}", r.b);
        }
    }
}

#[test]
fn dash_rewrite_on_small_primes() {
    for h in HyperDatum::canonical() {
        for p in [7u64, 11] {
            let d = order_datum(&h, p).unwrap();
            let ctx = GammaContext::new(p, 6).unwrap();
            assert!(dash_rewrite_holds(&d, 1, &ctx).unwrap(), "{h} p={p}");
        }
    }
}

#[test]
fn step_profile_of_quarter_datum() {
    let d = order_datum(&hd("1/2,1/4,7/6"), 23).unwrap();
    let prof = valuation_profile(&d, 1).unwrap();
    assert_eq!(prof.values, vec![0, -1, 0, 2, 3, 2]);
    // steps begin at [p/6], floor(p/4) + 1, floor(p/2) + 1, floor(3p/4) + 1, [5p/6]
    assert_eq!(prof.breakpoints, vec![0, 4, 6, 12, 18, 19]);
    assert_eq!(prof, valuation_profile_direct(&d, 1).unwrap());
    let two = valuation_profile(&d, 2).unwrap();
    assert_eq!(two.len, 23 * 23);
    assert_eq!(two, valuation_profile_direct(&d, 2).unwrap());
}
