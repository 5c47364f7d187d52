//! Partial fractions of R_1, R_2 and the residue-sum route to C_1, C_2.

use padic_hyper::congruence::j_values;
use padic_hyper::datum::{order_datum, HyperDatum};
use padic_hyper::gamma::GammaContext;
use padic_hyper::residues::{ak_leading_check, dk_valuation_check, r_decomposition, residue_to_c_check};

fn main() -> padic_hyper::error::Result<()> {
    let hd: HyperDatum = "1/2,1/2,7/6".parse()?;
    let p = 13;
    let d = order_datum(&hd, p)?;
    let j = j_values(&d, &GammaContext::new(p, 9)?, 3)?;
    for i in 1..=2 {
        let (r, dec) = r_decomposition(&d, i)?;
        println!("R_{i}: numerator degree {:?}, denominator degree {:?}", r.numerator.degree(), r.denominator.degree());
        println!("  reassembles exactly: {}", dec.reassembles(&r));
        println!("  residue sum: {}", dec.residue_sum());
        println!("  A_0 = {}", dec.a(0));
        println!("  min v_p(D_k) = {:?}", dk_valuation_check(&dec).min_valuation);
        println!("  sign of A_k / (p H(k)): {:?}", ak_leading_check(&dec, &d)?.sign);
        let rc = residue_to_c_check(&dec, &d, &j)?;
        println!("  scaled residue sum {} vs C_{i} = {}", rc.scaled_sum, rc.c);
    }
    Ok(())
}
