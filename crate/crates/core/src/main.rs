use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use padic_hyper::datum::{order_datum, HyperDatum};
use padic_hyper::error::Error;
use padic_hyper::exactmath::{is_prime, primes_between};
use padic_hyper::modular::bundled_data_dir;
use padic_hyper::report::{count_failures, write_csv, write_json, Status};
use padic_hyper::series::valuation_profile;
use padic_hyper::verify::{run, Plan, Suite};

#[derive(Parser)]
#[command(name = "padic-hyper", version, about = "Verify truncated hypergeometric supercongruences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite and write a report.
    Verify(VerifyArgs),
    /// Write the `k,vp` valuation profile of the coefficients.
    Profile(ProfileArgs),
    /// Print the ordered parameters, dashes and digit data at one prime.
    Datum(DatumArgs),
}

#[derive(Args)]
struct DataSelection {
    /// A datum `r1,r2,q`, e.g. `1/2,1/3,7/6`.
    #[arg(long, conflicts_with = "all")]
    hd: Option<String>,
    /// All six canonical data.
    #[arg(long)]
    all: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = clap::builder::ValueParser::new(|s: &str| s.parse::<Suite>()))]
    suite: Suite,
    #[command(flatten)]
    data: DataSelection,
    /// Inclusive range `a..b`, or a single prime.
    #[arg(long, default_value = "7..31")]
    primes: String,
    /// Comma-separated list of `s` values.
    #[arg(long, default_value = "1", value_delimiter = ',')]
    s: Vec<u32>,
    /// Directory holding `<label>.coeffs` files.
    #[arg(long, env = "PADIC_HYPER_DATA_DIR")]
    coeffs: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    hd: String,
    #[arg(long)]
    prime: u64,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DatumArgs {
    #[arg(long)]
    hd: String,
    #[arg(long)]
    prime: u64,
}

enum Failure {
    Usage(String),
    Data(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPrime { .. } | Error::InvalidDatum(_) => Failure::Usage(e.to_string()),
            e if e.is_data_error() => Failure::Data(e.to_string()),
            e => Failure::Other(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn parse_primes(text: &str) -> Result<Vec<u64>, Failure> {
    let bad = || Failure::Usage(format!("invalid prime range `{text}`"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let p: u64 = text.trim().parse().map_err(|_| bad())?;
            (p, p)
        }
    };
    if lo < 7 || lo > hi {
        return Err(Failure::Usage(format!("prime range `{text}` must satisfy 7 <= a <= b")));
    }
    let primes = primes_between(lo, hi);
    if primes.is_empty() {
        return Err(Failure::Usage(format!("no primes in `{text}`")));
    }
    Ok(primes)
}

fn parse_datum(text: &str) -> Result<HyperDatum, Failure> {
    let hd: HyperDatum = text.parse()?;
    if !hd.is_canonical() {
        eprintln!("warning: {hd} is not one of the six canonical data");
    }
    Ok(hd)
}

fn select_data(sel: &DataSelection, suite: Suite) -> Result<Vec<HyperDatum>, Failure> {
    match (&sel.hd, sel.all) {
        (Some(hd), _) => Ok(vec![parse_datum(hd)?]),
        (None, true) => Ok(HyperDatum::canonical()),
        (None, false) if suite == Suite::Gamma => Ok(Vec::new()),
        (None, false) => Err(Failure::Usage("one of --hd or --all is required".into())),
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    let plan = Plan {
        suite: args.suite,
        data: select_data(&args.data, args.suite)?,
        primes: parse_primes(&args.primes)?,
        s: args.s,
        coeffs: args.coeffs.unwrap_or_else(bundled_data_dir),
    };
    let reports = run(&plan, args.jobs)?;
    let out = output(&args.out)?;
    match args.format {
        Format::Json => write_json(&reports, out)?,
        Format::Csv => write_csv(&reports, out)?,
    }
    let fails = count_failures(&reports);
    let skipped = reports
        .iter()
        .filter(|r| matches!(r.status, Status::Skipped(_)))
        .count();
    eprintln!(
        "{}: {} rows, {fails} fail, {skipped} skipped",
        plan.suite,
        reports.len()
    );
    Ok(fails == 0)
}

fn profile(args: ProfileArgs) -> Result<bool, Failure> {
    let hd = parse_datum(&args.hd)?;
    let d = order_datum(&hd, args.prime)?;
    let prof = valuation_profile(&d, args.s)?;
    let steps: Vec<String> = prof
        .breakpoints
        .iter()
        .zip(&prof.values)
        .map(|(b, v)| format!("{b}:{v}"))
        .collect();
    eprintln!("{hd} p={} s={}: {}", args.prime, args.s, steps.join(" "));
    prof.write_csv(output(&args.out)?)?;
    Ok(true)
}

fn datum(args: DatumArgs) -> Result<bool, Failure> {
    let hd = parse_datum(&args.hd)?;
    if !is_prime(args.prime) || args.prime < 7 {
        return Err(Failure::Usage(format!("{} is not a prime >= 7", args.prime)));
    }
    let d = order_datum(&hd, args.prime)?;
    let p = args.prime;
    let list = |xs: &[num_rational::BigRational]| {
        xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    };
    println!("{hd} at p = {p}");
    println!("r  = [{}]", list(&d.r));
    println!("r' = [{}]", list(&d.r_dash));
    println!("q  = [{}]", list(&d.q));
    println!("q' = [{}]", list(&d.q_dash));
    println!("t  = {:?}", d.t);
    println!("u  = {:?}", d.u);
    let (t, u) = (d.t, d.u);
    let mark = |ok: bool| if ok { "ok" } else { "FAILS" };
    println!("t1 + t4 = t2 + t3 = p - 1: {}", mark(t[0] + t[3] == p - 1 && t[1] + t[2] == p - 1));
    println!(
        "u1 + u2 = p - 2, u3 = u4 = p - 1: {}",
        mark(u[0] + u[1] == p - 2 && u[2] == p - 1 && u[3] == p - 1)
    );
    println!(
        "u1 < t1 <= t2 = t3 <= t4 <= u2 < u3: {}",
        mark(u[0] < t[0] && t[0] <= t[1] && t[1] == t[2] && t[2] <= t[3] && t[3] <= u[1] && u[1] < u[2])
    );
    for note in &d.notes {
        println!("note: {note}");
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Profile(a) => profile(a),
        Command::Datum(a) => datum(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
