//! The step shape of v_p(H(k)) and its CSV form.

use padic_hyper::datum::{order_datum, HyperDatum};
use padic_hyper::series::valuation_profile;

fn main() -> padic_hyper::error::Result<()> {
    let hd: HyperDatum = "1/2,1/4,7/6".parse()?;
    let d = order_datum(&hd, 43)?;
    let prof = valuation_profile(&d, 1)?;
    for (start, level) in prof.breakpoints.iter().zip(&prof.values) {
        println!("from k = {start:>2}: v_p(H(k)) = {level}");
    }
    let two = valuation_profile(&d, 2)?;
    println!("{} pieces on [0, 43^2)", two.values.len());
    two.write_csv(std::io::sink())?;
    Ok(())
}
