use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-hyper"))
        .args(args)
        .env_remove("PADIC_HYPER_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn data_dir() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/data").to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("padic-hyper-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn rows(out: &Output) -> Vec<serde_json::Value> {
    serde_json::from_slice::<serde_json::Value>(&out.stdout)
        .expect("json report")
        .as_array()
        .unwrap()
        .clone()
}

#[test]
fn theorem_suite_succeeds() {
    let out = bin(&["verify", "theorem", "--all", "--primes", "7..97", "--s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 6 * 22);
    let mut keys: Vec<_> = rows[0].as_object().unwrap().keys().cloned().collect();
    keys.sort();
    assert_eq!(keys, ["check", "datum", "lhs", "modulus", "ms", "prime", "rhs", "s", "status"]);
    assert!(rows.iter().all(|r| r["status"] == "holds"));
}

#[test]
fn labeled_form_suite_succeeds() {
    let dir = data_dir();
    let out = bin(&[
        "verify", "conjecture15", "--hd", "1/2,1/2,7/6", "--primes", "7..200", "--s", "1,2", "--coeffs", &dir,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["verify", "theorem", "--hd", "1/2,1/2,4/3", "--primes", "4..5"]).status.code(), Some(2));
    assert_eq!(bin(&["datum", "--hd", "1/2,1/2,4/3", "--prime", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "nonsense", "--all"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "theorem", "--primes", "7..11"]).status.code(), Some(2));
}

#[test]
fn missing_data_exits_3() {
    let out = bin(&["verify", "conjecture12", "--all", "--primes", "7..11", "--coeffs", "/nonexistent/dir"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn failures_exit_1_and_appear_in_report() {
    let dir = scratch("tampered");
    let text = std::fs::read_to_string(format!("{}/12.4.a.a.coeffs", data_dir())).unwrap();
    // a_11 = 36 for 12.4.a.a
    std::fs::write(dir.join("12.4.a.a.coeffs"), text.replace("\n11,36\n", "\n11,35\n")).unwrap();
    let out = bin(&[
        "verify", "conjecture12", "--hd", "1/2,1/2,7/6", "--primes", "7..13", "--coeffs", dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let rows = rows(&out);
    let fails: Vec<_> = rows.iter().filter(|r| r["status"] == "fails").collect();
    assert_eq!(fails.len(), 1);
    assert_eq!(fails[0]["prime"], 11);
}

#[test]
fn reports_are_deterministic() {
    let strip = |out: Output| -> Vec<serde_json::Value> {
        rows(&out)
            .into_iter()
            .map(|mut r| {
                r["ms"] = 0.into();
                r
            })
            .collect()
    };
    let a = strip(bin(&["verify", "csums", "--all", "--primes", "7..23", "--jobs", "1"]));
    let b = strip(bin(&["verify", "csums", "--all", "--primes", "7..23", "--jobs", "3"]));
    assert_eq!(a, b);
}

#[test]
fn csv_output_to_file() {
    let path = scratch("csv").join("report.csv");
    let out = bin(&[
        "verify", "theorem", "--hd", "1/2,1/3,5/4", "--primes", "11..13", "--s", "0,1", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "datum,prime,s,check,status,lhs,rhs,modulus,ms");
    assert_eq!(lines.len(), 5);
}

#[test]
fn profile_and_datum_commands() {
    let out = bin(&["profile", "--hd", "1/2,1/4,7/6", "--prime", "11", "--s", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 121 + 1);
    assert!(text.starts_with("k,vp\n0,0\n"));

    let out = bin(&["datum", "--hd", "1/2,1/2,4/3", "--prime", "7"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("t  = [3, 3, 3, 3]"));
    assert!(text.contains("u  = [1, 4, 6, 6]"));

    let out = bin(&["datum", "--hd", "1/3,1/3,3/2", "--prime", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not one of the six canonical data"));
}
