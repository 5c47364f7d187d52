//! J_1, J_2, the coefficients C_1, C_2 and the inner sums I(b).

use padic_hyper::congruence::{c_coefficients, inner_sums, j_values, TARGET};
use padic_hyper::datum::{order_datum, HyperDatum};
use padic_hyper::gamma::GammaContext;

fn main() -> padic_hyper::error::Result<()> {
    let p = 11;
    let ctx = GammaContext::new(p, 9)?;
    for hd in HyperDatum::canonical() {
        let d = order_datum(&hd, p)?;
        let j = j_values(&d, &ctx, 3)?;
        let (c1, c2) = c_coefficients(&d, &j)?;
        let sums = inner_sums(&d, 1, &j)?;
        let agree = sums.iter().filter(|r| r.equivalent).count();
        println!(
            "{hd:<18} C1 = {} C2 = {} mod p^3, I(b) ≡ C1 b + C2 b^2 for {agree}/{} b",
            c1.residue(TARGET)?,
            c2.residue(TARGET)?,
            sums.len()
        );
    }
    Ok(())
}
