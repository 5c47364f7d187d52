//! Downloads a coefficient table; needs the `fetch` feature and network access.
//!
//! ```text
//! cargo run --features fetch --example fetch_form -- 24.4.a.a
//! ```

#[cfg(feature = "fetch")]
fn main() -> padic_hyper::error::Result<()> {
    use padic_hyper::modular::{fetch_coefficients, Character};
    let label = std::env::args().nth(1).unwrap_or_else(|| "24.4.a.a".into());
    let form = fetch_coefficients(&label, Character::Trivial, 1000)?;
    form.write(std::io::stdout())
}

#[cfg(not(feature = "fetch"))]
fn main() {
    eprintln!("built without the `fetch` feature");
}
