//! Named grids for each figure panel.
//!
//! A preset is a list of curves, each a complete [`SweepRequest`]. Contour and
//! heatmap panels use a square `FIGURE_GRID × FIGURE_GRID` grid over `(λ, τ)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::model::OperationKind::{self, *};

use super::{Axis, Grid, Quantity, SpecSource, SweepRequest};

/// Points per axis on two-dimensional figure grids.
pub const FIGURE_GRID: usize = 101;

const PHI: f64 = 0.01;

#[derive(Clone, Debug, PartialEq)]
pub struct FigureCurve {
    pub label: String,
    pub request: SweepRequest,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigurePreset {
    pub name: String,
    pub description: String,
    pub curves: Vec<FigureCurve>,
}

impl FigurePreset {
    pub fn curve(&self, label: &str) -> Option<&FigureCurve> {
        self.curves.iter().find(|c| c.label == label)
    }
}

fn lambda_line() -> Axis {
    Axis::new(0.01, 0.99, 99)
}

fn tau_line() -> Axis {
    Axis::new(0.01, 0.99, 99)
}

fn plane() -> (Axis, Axis) {
    (
        Axis::new(0.0, 0.99, FIGURE_GRID),
        Axis::new(0.01, 1.0, FIGURE_GRID),
    )
}

fn preset(kind: OperationKind, n: u32) -> SpecSource {
    SpecSource::Preset { kind, n }
}

fn curves(quantity: Quantity, grid: Grid, specs: Vec<SpecSource>) -> Result<Vec<FigureCurve>> {
    specs
        .into_iter()
        .map(|spec| {
            Ok(FigureCurve {
                label: spec.label(),
                request: SweepRequest::new(quantity, spec, grid)?,
            })
        })
        .collect()
}

/// The operations compared in the one-dimensional panels (a), (b), (c).
fn panel_specs(panel: char, with_tmsv: bool) -> Vec<SpecSource> {
    let mut specs = if with_tmsv {
        vec![SpecSource::Tmsv]
    } else {
        Vec::new()
    };
    let kinds: &[OperationKind] = match panel {
        'a' => &[AsymPs, AsymPa, AsymPc],
        'b' => &[SymPs, SymPa, SymPc],
        _ => &[AsymPc, SymPc],
    };
    for &k in kinds {
        for n in 1..=2 {
            specs.push(preset(k, n));
        }
    }
    specs
}

fn panel_tau(panel: char) -> f64 {
    if panel == 'c' {
        0.2
    } else {
        0.9
    }
}

fn contour_specs(kinds: [OperationKind; 2]) -> Vec<SpecSource> {
    let mut specs = Vec::new();
    for k in kinds {
        for n in 1..=2 {
            specs.push(preset(k, n));
        }
    }
    specs
}

/// All preset names, in figure order.
pub fn figure_names() -> Vec<String> {
    let mut names: Vec<String> = ('a'..='l').map(|p| format!("fig2{p}")).collect();
    for f in 3..=7 {
        for p in ['a', 'b', 'c'] {
            names.push(format!("fig{f}{p}"));
        }
    }
    names.extend(["fig8", "fig9", "fig10"].map(String::from));
    names.extend(['a', 'b', 'c'].map(|p| format!("fig11{p}")));
    names
}

pub fn figure(name: &str) -> Result<FigurePreset> {
    let unknown = || {
        Error::Usage(format!(
            "unknown figure `{name}` (expected one of {})",
            figure_names().join(", ")
        ))
    };
    let (number, panel) = match name.strip_prefix("fig") {
        Some(rest) => {
            let split = rest
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(rest.len());
            let (num, tail) = rest.split_at(split);
            let num: u32 = num.parse().map_err(|_| unknown())?;
            let mut chars = tail.chars();
            let panel = chars.next();
            if chars.next().is_some() {
                return Err(unknown());
            }
            (num, panel)
        }
        None => return Err(unknown()),
    };

    let (description, curves) = match (number, panel) {
        (2, Some(p @ 'a'..='l')) => {
            let i = p as usize - 'a' as usize;
            let family = [[AsymPs, SymPs], [AsymPa, SymPa], [AsymPc, SymPc]][i / 4];
            let kind = family[(i % 4) / 2];
            let n = 1 + (i % 2) as u32;
            let (lambda, tau) = plane();
            let grid = Grid {
                lambda,
                tau,
                phi: Axis::point(PHI),
            };
            (
                format!(
                    "success probability over (lambda, tau), {}-{n}",
                    kind.slug()
                ),
                curves(Quantity::Probability, grid, vec![preset(kind, n)])?,
            )
        }
        (3..=6, Some(p @ 'a'..='c')) => {
            let quantity = if number <= 4 {
                Quantity::Qcrb
            } else {
                Quantity::Sensitivity
            };
            let along_lambda = number == 3 || number == 5;
            let grid = if along_lambda {
                Grid {
                    lambda: lambda_line(),
                    tau: Axis::point(panel_tau(p)),
                    phi: Axis::point(PHI),
                }
            } else {
                Grid {
                    lambda: Axis::point(0.4),
                    tau: tau_line(),
                    phi: Axis::point(PHI),
                }
            };
            let axis = if along_lambda { "lambda" } else { "tau" };
            (
                format!("{quantity} against {axis}"),
                curves(quantity, grid, panel_specs(p, along_lambda))?,
            )
        }
        (7, Some(p @ 'a'..='c')) => {
            let grid = Grid {
                lambda: Axis::point(0.4),
                tau: Axis::point(panel_tau(p)),
                phi: Axis::new(PHI, FRAC_PI_2, 100),
            };
            (
                "sensitivity against phi".to_string(),
                curves(Quantity::Sensitivity, grid, panel_specs(p, true))?,
            )
        }
        (8..=10, None) => {
            let (lambda, tau) = plane();
            let grid = Grid {
                lambda,
                tau,
                phi: Axis::point(PHI),
            };
            let mut specs = match number {
                8 => contour_specs([AsymPs, SymPs]),
                9 => contour_specs([AsymPa, SymPa]),
                _ => contour_specs([AsymPc, SymPc]),
            };
            if number == 10 {
                specs.push(SpecSource::Custom {
                    m1: 1,
                    m2: 2,
                    n1: 1,
                    n2: 2,
                    tau: None,
                });
            }
            (
                "merit over (lambda, tau)".to_string(),
                curves(Quantity::Merit, grid, specs)?,
            )
        }
        (11, Some(p @ 'a'..='c')) => {
            let lambda = match p {
                'a' => 0.1,
                'b' => 0.5,
                _ => 0.9,
            };
            let grid = Grid {
                lambda: Axis::point(lambda),
                tau: tau_line(),
                phi: Axis::point(PHI),
            };
            let specs = OperationKind::ALL.iter().map(|&k| preset(k, 1)).collect();
            (
                format!("weighted merit against tau at lambda = {lambda}"),
                curves(Quantity::WeightedMerit, grid, specs)?,
            )
        }
        _ => return Err(unknown()),
    };
    Ok(FigurePreset {
        name: name.to_string(),
        description,
        curves,
    })
}
