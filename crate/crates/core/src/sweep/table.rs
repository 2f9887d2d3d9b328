//! CSV and JSON emission of sweep records.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::SweepRecord;

pub const CSV_HEADER: [&str; 6] = ["lambda", "tau1", "tau2", "phi", "value", "status"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Usage(format!(
                "format `{other}` is not one of csv, json"
            ))),
        }
    }
}

/// Shortest decimal that parses back to the same `f64`.
fn float(x: f64) -> String {
    format!("{x:?}")
}

pub fn to_csv(records: &[SweepRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io {
        path: "<memory>".into(),
        message: e.to_string(),
    };
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            float(r.lambda),
            float(r.tau1),
            float(r.tau2),
            float(r.phi),
            r.value.map(float).unwrap_or_default(),
            r.status.name().to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io {
        path: "<memory>".into(),
        message: e.to_string(),
    })?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

pub fn to_json(records: &[SweepRecord]) -> Result<String> {
    let mut s =
        serde_json::to_string_pretty(records).map_err(|e| Error::Invariant(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn read_json(text: &str) -> Result<Vec<SweepRecord>> {
    serde_json::from_str(text).map_err(|e| Error::Usage(format!("invalid record JSON: {e}")))
}

pub fn render(records: &[SweepRecord], format: Format) -> Result<String> {
    if records.is_empty() {
        return Err(Error::Usage("no records to emit".into()));
    }
    match format {
        Format::Csv => to_csv(records),
        Format::Json => to_json(records),
    }
}

/// Writes the table to `path`; errors name the path.
pub fn write_table(records: &[SweepRecord], format: Format, path: &Path) -> Result<()> {
    let text = render(records, format)?;
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::Status;

    fn rec(value: Option<f64>, status: Status) -> SweepRecord {
        SweepRecord {
            lambda: 0.5,
            tau1: 1.0,
            tau2: 0.1 + 0.2,
            phi: 0.01,
            value,
            status,
        }
    }

    #[test]
    fn one_ok_record() {
        let s = to_csv(&[rec(Some(0.75), Status::Ok)]).unwrap();
        assert_eq!(
            s,
            "lambda,tau1,tau2,phi,value,status\n0.5,1.0,0.30000000000000004,0.01,0.75,ok\n"
        );
    }

    #[test]
    fn stationary_record_has_empty_value() {
        let s = to_csv(&[rec(None, Status::Stationary)]).unwrap();
        assert!(s.lines().nth(1).unwrap().ends_with(",,stationary"));
    }

    #[test]
    fn csv_floats_round_trip() {
        let x = 1.0 / 3.0;
        let s = to_csv(&[rec(Some(x), Status::Ok)]).unwrap();
        let mut r = csv::Reader::from_reader(s.as_bytes());
        let row = r.records().next().unwrap().unwrap();
        assert_eq!(row[4].parse::<f64>().unwrap(), x);
        assert_eq!(row[2].parse::<f64>().unwrap(), 0.1 + 0.2);
    }

    #[test]
    fn json_round_trip() {
        let recs = vec![
            rec(Some(1.0 / 7.0), Status::Ok),
            rec(None, Status::Degenerate),
        ];
        let back = read_json(&to_json(&recs).unwrap()).unwrap();
        assert_eq!(back, recs);
        assert!(to_json(&recs)
            .unwrap()
            .contains("\"status\": \"degenerate\""));
    }

    #[test]
    fn empty_tables_are_rejected() {
        assert!(render(&[], Format::Csv).is_err());
    }

    #[test]
    fn unwritable_path_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("out.csv");
        let err = write_table(&[rec(Some(1.0), Status::Ok)], Format::Csv, &path).unwrap_err();
        assert!(err.to_string().contains(&path.display().to_string()));
    }
}
