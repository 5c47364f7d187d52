//! Valuations, digit truncations, the Dwork dash and precision-tracked p-adic values.

use padic_hyper::exactmath::{dwork_dash, rational, trunc_digits, vp, PadicValue};

fn main() -> padic_hyper::error::Result<()> {
    let p = 7;
    let x = rational(98, 15);
    println!("v_7(98/15) = {}", vp(&x, p));

    let a = rational(1, 3);
    for i in 0..3 {
        println!("[-1/3]_{i} = {}", trunc_digits(&(-&a), p, i)?);
    }
    println!("(1/3)' = {}", dwork_dash(&a, p)?);

    let h = PadicValue::from_rational(&rational(5, 14), p, 4)?;
    let g = PadicValue::from_rational(&rational(3, 49), p, 4)?;
    let s = h.try_add(&g)?;
    println!("5/14 + 3/49 = {s} (absolute precision {:?})", s.absolute_precision());
    println!("49 * (5/14 + 3/49) mod 7^3 = {}", s.shift(2).residue(3)?);
    Ok(())
}
