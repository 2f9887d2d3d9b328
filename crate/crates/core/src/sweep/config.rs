//! `key=value` configuration files and flag overrides.
//!
//! ```text
//! # weighted merit at moderate squeezing
//! quantity = weighted_merit
//! preset = asym-pa-1
//! lambda = 0.5
//! tau = 0.01:0.99:99
//! ```

use std::path::PathBuf;

use crate::analytics::PhaseSpacePoint;
use crate::error::{Error, Result};

use super::{Axis, Format, Grid, Quantity, SpecSource, SweepRequest};

/// Every key accepted in a configuration file or as a flag.
pub const CONFIG_KEYS: [&str; 9] = [
    "quantity", "preset", "photons", "lambda", "tau", "phi", "point", "format", "output",
];

/// Default operating phase.
pub const DEFAULT_PHI: f64 = 0.01;

fn usage(key: &str, msg: impl std::fmt::Display) -> Error {
    Error::Usage(format!("{key}: {msg}"))
}

fn check_key(key: &str) -> Result<()> {
    if CONFIG_KEYS.contains(&key) {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "unknown key `{key}` (expected one of {})",
            CONFIG_KEYS.join(", ")
        )))
    }
}

/// Splits a configuration file into `(key, value)` pairs. Blank lines and
/// anything after `#` are ignored.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Usage(format!(
                "line {}: expected key=value, got `{line}`",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        check_key(key)?;
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn list<T: std::str::FromStr>(key: &str, value: &str, len: usize) -> Result<Vec<T>> {
    let items: Vec<&str> = value.split(',').map(str::trim).collect();
    if items.len() != len {
        return Err(usage(
            key,
            format!("expected {len} comma-separated values, got `{value}`"),
        ));
    }
    items
        .iter()
        .map(|s| {
            s.parse()
                .map_err(|_| usage(key, format!("cannot parse `{s}`")))
        })
        .collect()
}

fn axis(key: &str, value: &str) -> Result<Axis> {
    value.parse().map_err(|e| usage(key, e))
}

/// Merges file entries with flag overrides (flags win) and validates the result.
pub fn build_request(
    file: &[(String, String)],
    flags: &[(String, String)],
) -> Result<SweepRequest> {
    let mut get = std::collections::BTreeMap::new();
    for (k, v) in file.iter().chain(flags) {
        check_key(k)?;
        get.insert(k.as_str(), v.as_str());
    }

    let quantity: Quantity = get
        .get("quantity")
        .ok_or_else(|| Error::Usage("quantity is required".into()))?
        .parse()?;

    let tau_raw = get.get("tau").copied();
    let fixed_pair = tau_raw.filter(|t| t.contains(','));
    let spec = match (get.get("preset"), get.get("photons")) {
        (Some(_), Some(_)) => {
            return Err(Error::Usage(
                "give either preset or photons, not both".into(),
            ))
        }
        (None, None) => return Err(Error::Usage("either preset or photons is required".into())),
        (Some(p), None) => {
            if fixed_pair.is_some() {
                return Err(usage(
                    "tau",
                    "a t1,t2 pair needs photons instead of a preset",
                ));
            }
            SpecSource::preset(p)?
        }
        (None, Some(ph)) => {
            let n: Vec<u32> = list("photons", ph, 4)?;
            let tau = match fixed_pair {
                Some(t) => {
                    let t: Vec<f64> = list("tau", t, 2)?;
                    Some((t[0], t[1]))
                }
                None => None,
            };
            SpecSource::Custom {
                m1: n[0],
                m2: n[1],
                n1: n[2],
                n2: n[3],
                tau,
            }
        }
    };

    let lambda = axis(
        "lambda",
        get.get("lambda")
            .ok_or_else(|| Error::Usage("lambda is required".into()))?,
    )?;
    let tau = match (tau_raw, &spec) {
        (Some(t), _) if fixed_pair.is_none() => axis("tau", t)?,
        (
            Some(_),
            SpecSource::Custom {
                tau: Some((t1, _)), ..
            },
        ) => Axis::point(*t1),
        (None, s) if s.uses_tau_axis() => {
            return Err(Error::Usage("tau is required for this operation".into()))
        }
        _ => Axis::point(1.0),
    };
    let phi = match get.get("phi") {
        Some(p) => axis("phi", p)?,
        None => Axis::point(DEFAULT_PHI),
    };
    let point = match get.get("point") {
        Some(p) => {
            let x: Vec<f64> = list("point", p, 4)?;
            PhaseSpacePoint::new(x[0], x[1], x[2], x[3])
        }
        None => PhaseSpacePoint::origin(),
    };
    let format = match get.get("format") {
        Some(f) => f.parse()?,
        None => Format::Csv,
    };
    let output = get.get("output").map(PathBuf::from);

    let req = SweepRequest {
        quantity,
        spec,
        grid: Grid { lambda, tau, phi },
        point,
        format,
        output,
    };
    req.validate()?;
    Ok(req)
}
