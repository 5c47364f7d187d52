//! Coefficient files, unit roots and the comparison with successive ratios.

use padic_hyper::datum::{order_datum, HyperDatum};
use padic_hyper::modular::{
    bundled_data_dir, check_conjecture_1_2, form_assignment, load_form_for, successive_ratios, unit_root,
};

fn main() -> padic_hyper::error::Result<()> {
    let dir = bundled_data_dir();
    for hd in HyperDatum::canonical() {
        let Some(a) = form_assignment(&hd) else { continue };
        let form = load_form_for(&hd, &dir)?;
        println!("{hd} -> {} ({})", a.label, form.character);
        for p in [7u64, 11, 13, 17] {
            let d = order_datum(&hd, p)?;
            let ap = form.a_p(p)?;
            let chi = form.character.value(p);
            let ratio = successive_ratios(&d, 3)?.pop().expect("three ratios");
            match unit_root(chi as i64 * ap, 1, p, 3) {
                Ok(g) => println!(
                    "  p = {p:>2} a_p = {ap:>5} gamma = {:>5} p F_3 / F_2 = {:>5} (mod p^3), p F_1 check {}",
                    g.residue(),
                    ratio.residue(3)?,
                    check_conjecture_1_2(&d, &form)?.status
                ),
                Err(e) => println!("  p = {p:>2}: {e}"),
            }
        }
    }
    Ok(())
}
