//! Morita's Γ_p modulo p^N and the Taylor coefficients G_1, G_2.

use padic_hyper::exactmath::rational;
use padic_hyper::gamma::{g_pair, gamma_int, reflection_exponent, GammaContext};

fn main() -> padic_hyper::error::Result<()> {
    let p = 11;
    println!("Γ_11(13) = {}", gamma_int(13, p));

    let ctx = GammaContext::new(p, 9)?;
    for x in [rational(1, 2), rational(1, 3), rational(5, 6)] {
        let g = ctx.gamma_rational(&x)?;
        let (g1, g2) = g_pair(&x, 3, &ctx)?;
        println!(
            "x = {x}: Γ_p(x) = {g} mod 11^9, x0 = {}, G1 = {} mod 11^6, G2 = {} mod 11^3",
            reflection_exponent(&x, p)?,
            g1.residue(6)?,
            g2.residue(3)?
        );
    }
    Ok(())
}
