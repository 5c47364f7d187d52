//! A whole suite run in parallel and written as CSV.

use padic_hyper::datum::HyperDatum;
use padic_hyper::exactmath::primes_between;
use padic_hyper::modular::bundled_data_dir;
use padic_hyper::report::{count_failures, write_csv};
use padic_hyper::verify::{run, Plan, Suite};

fn main() -> padic_hyper::error::Result<()> {
    let plan = Plan {
        suite: Suite::Csums,
        data: HyperDatum::canonical(),
        primes: primes_between(7, 31),
        s: vec![0],
        coeffs: bundled_data_dir(),
    };
    let reports = run(&plan, None)?;
    write_csv(&reports, std::io::stdout())?;
    eprintln!("{} rows, {} failing", reports.len(), count_failures(&reports));
    Ok(())
}
