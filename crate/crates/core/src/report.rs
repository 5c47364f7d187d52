//! One line of a verification report, serialized to JSON or CSV.

use serde::{Serialize, Serializer};
use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Skipped(String),
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Status::Fails)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Holds => write!(f, "holds"),
            Status::Fails => write!(f, "fails"),
            Status::Skipped(reason) => write!(f, "skipped:{reason}"),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Residues are decimal strings in `[0, modulus)`; `ms` is wall time.
#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub datum: String,
    pub prime: u64,
    pub s: u32,
    pub check: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    pub modulus: String,
    pub ms: u64,
}

impl CongruenceReport {
    pub fn new(datum: &str, prime: u64, s: u32, check: &str) -> Self {
        CongruenceReport {
            datum: datum.to_string(),
            prime,
            s,
            check: check.to_string(),
            status: Status::Skipped("not run".into()),
            lhs: String::new(),
            rhs: String::new(),
            modulus: String::new(),
            ms: 0,
        }
    }

    /// Fills in a residue comparison modulo `p^n`.
    pub fn compare(mut self, lhs: u128, rhs: u128, prime: u64, n: u32) -> Self {
        self.status = Status::from_bool(lhs == rhs);
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self.modulus = (prime as u128).pow(n).to_string();
        self
    }

    /// Records a pass/fail outcome whose two sides are not residues.
    pub fn verdict(mut self, ok: bool, lhs: impl ToString, rhs: impl ToString) -> Self {
        self.status = Status::from_bool(ok);
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped(reason.into());
        self
    }

    pub fn timed(mut self, ms: u64) -> Self {
        self.ms = ms;
        self
    }

    fn sort_key(&self) -> (&str, u64, u32, &str) {
        (&self.datum, self.prime, self.s, &self.check)
    }
}

/// Stable ordering by `(datum, prime, s, check)`.
pub fn sort_reports(reports: &mut [CongruenceReport]) {
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

pub fn count_failures(reports: &[CongruenceReport]) -> usize {
    reports.iter().filter(|r| r.status.is_fail()).count()
}

pub fn write_json<W: Write>(reports: &[CongruenceReport], mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, reports).map_err(|e| Error::Io(e.into()))?;
    writeln!(writer)?;
    Ok(())
}

pub fn write_csv<W: Write>(reports: &[CongruenceReport], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in reports {
        w.serialize(r).map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_field_names() {
        let r = CongruenceReport::new("1/2,1/2,7/6", 7, 1, "theorem").compare(5, 5, 7, 3);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut expected = ["datum", "prime", "s", "check", "status", "lhs", "rhs", "modulus", "ms"]
            .map(String::from)
            .to_vec();
        expected.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expected);
        assert_eq!(v["status"], "holds");
        assert_eq!(v["modulus"], "343");
    }

    #[test]
    fn skipped_status_carries_reason() {
        let r = CongruenceReport::new("x", 7, 1, "c").skipped("non-ordinary");
        assert_eq!(r.status.to_string(), "skipped:non-ordinary");
    }

    #[test]
    fn csv_has_header() {
        let r = CongruenceReport::new("x", 7, 1, "c").compare(1, 2, 7, 1);
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("datum,prime,s,check,status,lhs,rhs,modulus,ms\n"));
        assert!(text.contains(",fails,"));
    }
}
