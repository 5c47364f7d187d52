//! The six parameter sets ordered by their Dwork dashes at one prime.

use padic_hyper::datum::{order_datum, HyperDatum};

fn main() -> padic_hyper::error::Result<()> {
    let p: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(13);
    for hd in HyperDatum::canonical() {
        let d = order_datum(&hd, p)?;
        let dashes: Vec<String> = d.r_dash.iter().map(ToString::to_string).collect();
        println!("{hd:<18} t = {:?} u = {:?} r' = [{}]", d.t, d.u, dashes.join(", "));
        for note in &d.notes {
            println!("    {note}");
        }
    }
    Ok(())
}
