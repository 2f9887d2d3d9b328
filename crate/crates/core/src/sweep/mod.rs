//! Parameter grids over `(λ, τ, φ)`, evaluated point by point.
//!
//! Points are independent, so the grid is mapped in parallel when the
//! `parallel` feature is on. Records always come back in grid order.

mod config;
mod figures;
mod table;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytics::{NgTmsv, PhaseSpacePoint};
use crate::error::{Error, Result};
use crate::model::{NgOperation, OperationKind};

pub use config::{build_request, parse_config_text, CONFIG_KEYS};
pub use figures::{figure, figure_names, FigureCurve, FigurePreset, FIGURE_GRID};
pub use table::{read_json, render, to_csv, to_json, write_table, Format, CSV_HEADER};

/// The quantity evaluated at each grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Probability,
    Qfi,
    Qcrb,
    Parity,
    Sensitivity,
    Merit,
    WeightedMerit,
    Wigner,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::Probability,
        Quantity::Qfi,
        Quantity::Qcrb,
        Quantity::Parity,
        Quantity::Sensitivity,
        Quantity::Merit,
        Quantity::WeightedMerit,
        Quantity::Wigner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Probability => "probability",
            Quantity::Qfi => "qfi",
            Quantity::Qcrb => "qcrb",
            Quantity::Parity => "parity",
            Quantity::Sensitivity => "sensitivity",
            Quantity::Merit => "merit",
            Quantity::WeightedMerit => "weighted_merit",
            Quantity::Wigner => "wigner",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|q| q.name() == key)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|q| q.name()).collect();
                Error::Usage(format!("quantity `{s}` is not one of {}", names.join(", ")))
            })
    }
}

/// Which operation to evaluate and how the `τ` axis maps onto `(τ1, τ2)`.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecSource {
    /// The squeezed vacuum itself; the `τ` axis is ignored.
    Tmsv,
    /// A row of the operation table; asymmetric rows use `(1, τ)`, symmetric rows `(τ, τ)`.
    Preset { kind: OperationKind, n: u32 },
    /// Explicit photon numbers. With `tau` unset the axis value is used on both modes.
    Custom {
        m1: u32,
        m2: u32,
        n1: u32,
        n2: u32,
        tau: Option<(f64, f64)>,
    },
}

impl SpecSource {
    /// Parses `tmsv` or `<asym|sym>-<ps|pa|pc>-<n>`.
    pub fn preset(name: &str) -> Result<Self> {
        let name = name.trim();
        if name == "tmsv" {
            return Ok(SpecSource::Tmsv);
        }
        let bad = || {
            Error::Usage(format!(
                "preset `{name}` is not `tmsv` or <asym|sym>-<ps|pa|pc>-<n>; \
                 mixed operations need --photons m1,m2,n1,n2"
            ))
        };
        let (stem, n) = name.rsplit_once('-').ok_or_else(bad)?;
        let kind = OperationKind::from_slug(stem).ok_or_else(bad)?;
        let n: u32 = n.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok(SpecSource::Preset { kind, n })
    }

    pub fn label(&self) -> String {
        match self {
            SpecSource::Tmsv => "tmsv".to_string(),
            SpecSource::Preset { kind, n } => format!("{}-{n}", kind.slug()),
            SpecSource::Custom { m1, m2, n1, n2, .. } => format!("custom-{m1}-{m2}-{n1}-{n2}"),
        }
    }

    /// Whether the `τ` axis has any effect.
    pub fn uses_tau_axis(&self) -> bool {
        matches!(
            self,
            SpecSource::Preset { .. } | SpecSource::Custom { tau: None, .. }
        )
    }

    pub fn operation(&self, tau: f64) -> Result<NgOperation> {
        match *self {
            SpecSource::Tmsv => Ok(NgOperation::tmsv()),
            SpecSource::Preset { kind, n } => NgOperation::from_table(kind, n, tau),
            SpecSource::Custom {
                m1,
                m2,
                n1,
                n2,
                tau: fixed,
            } => {
                let (t1, t2) = fixed.unwrap_or((tau, tau));
                NgOperation::custom(m1, m2, n1, n2, t1, t2)
            }
        }
    }
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn point(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            count: 1,
        }
    }

    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count <= 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }

    fn endpoints(&self) -> [f64; 2] {
        [self.start, self.stop]
    }
}

impl FromStr for Axis {
    type Err = String;

    /// `x` or `start:stop:count`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("cannot parse `{}` as a number", t.trim()))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(Axis::point(num(x)?)),
            [a, b, n] => {
                let count = n
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| format!("cannot parse `{}` as a point count", n.trim()))?;
                Ok(Axis::new(num(a)?, num(b)?, count))
            }
            _ => Err(format!("`{s}` is neither a number nor start:stop:count")),
        }
    }
}

/// The full grid; `λ` varies slowest, `φ` fastest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub lambda: Axis,
    pub tau: Axis,
    pub phi: Axis,
}

impl Grid {
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let (ls, ts, ps) = (self.lambda.values(), self.tau.values(), self.phi.values());
        let mut out = Vec::with_capacity(ls.len() * ts.len() * ps.len());
        for &l in &ls {
            for &t in &ts {
                for &p in &ps {
                    out.push((l, t, p));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.lambda.count.max(1) * self.tau.count.max(1) * self.phi.count.max(1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A validated sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRequest {
    pub quantity: Quantity,
    pub spec: SpecSource,
    pub grid: Grid,
    /// Phase-space point for `wigner`.
    pub point: PhaseSpacePoint,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl SweepRequest {
    pub fn new(quantity: Quantity, spec: SpecSource, grid: Grid) -> Result<Self> {
        let req = Self {
            quantity,
            spec,
            grid,
            point: PhaseSpacePoint::origin(),
            format: Format::Csv,
            output: None,
        };
        req.validate()?;
        Ok(req)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        for (name, axis) in [("lambda", g.lambda), ("tau", g.tau), ("phi", g.phi)] {
            if axis.count == 0 {
                return Err(Error::Usage(format!("{name} count must be at least 1")));
            }
            if axis.endpoints().iter().any(|x| !x.is_finite()) {
                return Err(Error::Usage(format!("{name} must be finite")));
            }
        }
        if g.lambda.endpoints().iter().any(|l| !(0.0..1.0).contains(l)) {
            return Err(Error::Usage("lambda must be in [0,1)".into()));
        }
        if g.tau.endpoints().iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
            return Err(Error::Usage("tau must be in (0,1]".into()));
        }
        if let SpecSource::Custom {
            tau: Some((t1, t2)),
            ..
        } = self.spec
        {
            if [t1, t2].iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
                return Err(Error::Usage("tau must be in (0,1]".into()));
            }
            if g.tau.count > 1 {
                return Err(Error::Usage(
                    "tau cannot be swept when both transmissivities are given".into(),
                ));
            }
        }
        let p = self.point.to_array();
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::Usage("point must be finite".into()));
        }
        Ok(())
    }
}

/// Outcome class of one grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Degenerate,
    Stationary,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Degenerate => "degenerate",
            Status::Stationary => "stationary",
        }
    }
}

/// One evaluated grid point. `value` is present iff `status` is `ok`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub lambda: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub phi: f64,
    pub value: Option<f64>,
    pub status: Status,
}

/// How the grid is mapped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

fn quantity_value(req: &SweepRequest, state: &NgTmsv, phi: f64) -> Result<f64> {
    match req.quantity {
        Quantity::Probability => Ok(state.success_probability()),
        Quantity::Qfi => state.qfi(),
        Quantity::Qcrb => state.qcrb(),
        Quantity::Parity => state.parity_expectation(phi),
        Quantity::Sensitivity => state.phase_sensitivity(phi),
        Quantity::Merit => state.merit(phi),
        Quantity::WeightedMerit => state.weighted_merit(phi),
        Quantity::Wigner => state.wigner(req.point),
    }
}

/// Evaluates one point; failures become a status instead of an error.
pub fn evaluate_point(req: &SweepRequest, lambda: f64, tau: f64, phi: f64) -> SweepRecord {
    let op = req.spec.operation(tau);
    let (tau1, tau2) = op.as_ref().map_or((tau, tau), |o| (o.tau1, o.tau2));
    let result = op.and_then(|op| {
        let state = NgTmsv::new(lambda, op)?;
        quantity_value(req, &state, phi)
    });
    let (value, status) = match result {
        Ok(v) => (Some(v), Status::Ok),
        Err(Error::Stationary { .. }) => (None, Status::Stationary),
        Err(_) => (None, Status::Degenerate),
    };
    SweepRecord {
        lambda,
        tau1,
        tau2,
        phi,
        value,
        status,
    }
}

pub fn run_sweep(req: &SweepRequest) -> Result<Vec<SweepRecord>> {
    run_sweep_with(req, Execution::default())
}

pub fn run_sweep_with(req: &SweepRequest, exec: Execution) -> Result<Vec<SweepRecord>> {
    req.validate()?;
    let points = req.grid.points();
    let eval = |&(l, t, p): &(f64, f64, f64)| evaluate_point(req, l, t, p);
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            Ok(points.par_iter().map(eval).collect())
        }
        _ => Ok(points.iter().map(eval).collect()),
    }
}

/// Sizes the global worker pool from `NGI_THREADS`, if set. Returns the pool size.
#[cfg(feature = "parallel")]
pub fn init_thread_pool() -> Result<usize> {
    if let Ok(raw) = std::env::var("NGI_THREADS") {
        let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Error::Usage(format!("NGI_THREADS `{raw}` is not a positive integer"))
        })?;
        // A pool that is already built keeps its size.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(rayon::current_num_threads())
}

#[cfg(not(feature = "parallel"))]
pub fn init_thread_pool() -> Result<usize> {
    Ok(1)
}

/// True when every record is `ok`.
pub fn all_ok(records: &[SweepRecord]) -> bool {
    records.iter().all(|r| r.status == Status::Ok)
}
