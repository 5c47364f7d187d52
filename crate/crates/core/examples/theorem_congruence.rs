//! p^{s+1} F_{s+1} ≡ p^s F_s · p F_1 (mod p^3) for one datum across primes.

use padic_hyper::congruence::check_theorem;
use padic_hyper::datum::{order_datum, HyperDatum};
use padic_hyper::exactmath::primes_between;

fn main() -> padic_hyper::error::Result<()> {
    let hd: HyperDatum = "1/2,1/3,5/4".parse()?;
    for p in primes_between(7, 43) {
        let d = order_datum(&hd, p)?;
        for s in 0..=2 {
            let r = check_theorem(&d, s, 6)?;
            println!("p = {p:>2} s = {s}: {} ≡ {} mod {} {}", r.lhs, r.rhs, r.modulus, r.status);
        }
    }
    Ok(())
}
