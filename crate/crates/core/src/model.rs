//! Operation taxonomy, derived squeezing/transmissivity scalars and the
//! quadratic forms whose exponentials generate every observable.
//!
//! Auxiliary variables are ordered `u = (u1, v1, u2, v2, u1', v1', u2', v2')`,
//! phase-space variables `ξ = (q1, p1, q2, p2)` and moment variables
//! `x = (x1, y1, x2, y2)`. All matrices below are written in that order.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfunc::Real;

/// The six rows of the operation table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperationKind {
    AsymPs,
    AsymPa,
    AsymPc,
    SymPs,
    SymPa,
    SymPc,
}

impl OperationKind {
    pub const ALL: [OperationKind; 6] = [
        OperationKind::AsymPs,
        OperationKind::AsymPa,
        OperationKind::AsymPc,
        OperationKind::SymPs,
        OperationKind::SymPa,
        OperationKind::SymPc,
    ];

    /// Preset-name stem, e.g. `asym-ps`.
    pub fn slug(self) -> &'static str {
        match self {
            OperationKind::AsymPs => "asym-ps",
            OperationKind::AsymPa => "asym-pa",
            OperationKind::AsymPc => "asym-pc",
            OperationKind::SymPs => "sym-ps",
            OperationKind::SymPa => "sym-pa",
            OperationKind::SymPc => "sym-pc",
        }
    }

    pub fn from_slug(slug: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.slug() == slug)
    }

    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            OperationKind::SymPs | OperationKind::SymPa | OperationKind::SymPc
        )
    }
}

/// What a heralded beam splitter does to one mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeOperation {
    Subtraction,
    Addition,
    Catalysis,
}

/// Ancilla photons `m`, heralded photons `n` and beam-splitter transmissivities per mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NgOperation {
    pub m1: u32,
    pub m2: u32,
    pub n1: u32,
    pub n2: u32,
    pub tau1: f64,
    pub tau2: f64,
}

fn check_tau(name: &'static str, tau: f64) -> Result<()> {
    if tau.is_finite() && tau > 0.0 && tau <= 1.0 {
        Ok(())
    } else {
        Err(Error::parameter(
            name,
            format!("must be in (0,1], got {tau}"),
        ))
    }
}

impl NgOperation {
    /// Row `kind` of the operation table with `n` photons at transmissivity `tau`.
    /// Asymmetric operations act on mode 2 only (`τ1 = 1`).
    pub fn from_table(kind: OperationKind, n: u32, tau: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("n", "must be at least 1"));
        }
        check_tau("tau", tau)?;
        let (m1, m2, n1, n2) = match kind {
            OperationKind::AsymPs => (0, 0, 0, n),
            OperationKind::AsymPa => (0, n, 0, 0),
            OperationKind::AsymPc => (0, n, 0, n),
            OperationKind::SymPs => (0, 0, n, n),
            OperationKind::SymPa => (n, n, 0, 0),
            OperationKind::SymPc => (n, n, n, n),
        };
        let tau1 = if kind.is_symmetric() { tau } else { 1.0 };
        Ok(Self {
            m1,
            m2,
            n1,
            n2,
            tau1,
            tau2: tau,
        })
    }

    /// Arbitrary photon numbers and transmissivities, e.g. mixed catalysis `(1,2,1,2)`.
    pub fn custom(m1: u32, m2: u32, n1: u32, n2: u32, tau1: f64, tau2: f64) -> Result<Self> {
        check_tau("tau1", tau1)?;
        check_tau("tau2", tau2)?;
        Ok(Self {
            m1,
            m2,
            n1,
            n2,
            tau1,
            tau2,
        })
    }

    /// The untouched squeezed vacuum: no ancillas, no detections, unit transmissivity.
    pub fn tmsv() -> Self {
        Self {
            m1: 0,
            m2: 0,
            n1: 0,
            n2: 0,
            tau1: 1.0,
            tau2: 1.0,
        }
    }

    /// Exchanges the roles of the two modes.
    pub fn swapped(&self) -> Self {
        Self {
            m1: self.m2,
            m2: self.m1,
            n1: self.n2,
            n2: self.n1,
            tau1: self.tau2,
            tau2: self.tau1,
        }
    }

    /// Classification of the operation on `mode` (1 or 2).
    pub fn mode_operation(&self, mode: usize) -> ModeOperation {
        let (m, n) = if mode == 1 {
            (self.m1, self.n1)
        } else {
            (self.m2, self.n2)
        };
        match m.cmp(&n) {
            std::cmp::Ordering::Less => ModeOperation::Subtraction,
            std::cmp::Ordering::Greater => ModeOperation::Addition,
            std::cmp::Ordering::Equal => ModeOperation::Catalysis,
        }
    }

    pub fn total_photons(&self) -> u32 {
        self.m1 + self.m2 + self.n1 + self.n2
    }
}

impl fmt::Display for NgOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m=({},{}) n=({},{}) tau=({},{})",
            self.m1, self.m2, self.n1, self.n2, self.tau1, self.tau2
        )
    }
}

/// Scalars derived from the squeezing parameter and the transmissivities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// `λ = tanh r`
    pub lambda: f64,
    pub r: f64,
    /// `sinh r`
    pub alpha: f64,
    /// `cosh r`
    pub beta: f64,
    pub tau1: f64,
    pub tau2: f64,
    /// `√τ1`, `√τ2`
    pub t1: f64,
    pub t2: f64,
    /// `√(1−τ1)`, `√(1−τ2)`
    pub rr1: f64,
    pub rr2: f64,
    /// `1 + α²(1 − τ1τ2)`
    pub a0: f64,
}

pub fn derive_params(lambda: f64, op: &NgOperation) -> Result<ModelParams> {
    if !(lambda.is_finite() && (0.0..1.0).contains(&lambda)) {
        return Err(Error::parameter("lambda", "must be in [0,1)"));
    }
    check_tau("tau1", op.tau1)?;
    check_tau("tau2", op.tau2)?;
    let norm = (1.0 - lambda * lambda).sqrt();
    let alpha = lambda / norm;
    let beta = 1.0 / norm;
    let (tau1, tau2) = (op.tau1, op.tau2);
    Ok(ModelParams {
        lambda,
        r: lambda.atanh(),
        alpha,
        beta,
        tau1,
        tau2,
        t1: tau1.sqrt(),
        t2: tau2.sqrt(),
        rr1: (1.0 - tau1).sqrt(),
        rr2: (1.0 - tau2).sqrt(),
        a0: 1.0 + alpha * alpha * (1.0 - tau1 * tau2),
    })
}

/// Mode-exchange permutation of `u`.
pub const U_MODE_SWAP: [usize; 8] = [2, 3, 0, 1, 6, 7, 4, 5];
/// Mode-exchange permutation of `ξ` and `x`.
pub const XI_MODE_SWAP: [usize; 4] = [2, 3, 0, 1];

fn ensure_symmetric<T: PartialEq>(m: &DMatrix<T>, name: &str) -> Result<()> {
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            if m[(i, j)] != m[(j, i)] {
                return Err(Error::Invariant(format!(
                    "{name} is not symmetric at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

fn real_rows(rows: usize, cols: usize, prefactor: f64, entries: &[f64]) -> DMatrix<Complex64> {
    DMatrix::from_row_iterator(
        rows,
        cols,
        entries.iter().map(|&e| Complex64::new(prefactor * e, 0.0)),
    )
}

/// Quadratic forms of the unnormalized Wigner function:
/// `W̃(ξ) = D̂₁ exp(ξᵀM1ξ + uᵀM2ξ + uᵀM3u) / (a0 π²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerForms {
    /// 4×4
    pub m1: DMatrix<Complex64>,
    /// 8×4
    pub m2: DMatrix<Complex64>,
    /// 8×8
    pub m3: DMatrix<Complex64>,
}

pub fn build_wigner_forms(p: &ModelParams) -> Result<WignerForms> {
    let ModelParams {
        alpha: al,
        beta: be,
        t1,
        t2,
        rr1: r1,
        rr2: r2,
        a0,
        ..
    } = *p;
    let d = al * al * (t1 * t1 * t2 * t2 + 1.0) + 1.0;
    let x = 2.0 * al * be * t1 * t2;
    #[rustfmt::skip]
    let m1 = real_rows(4, 4, -1.0 / a0, &[
        d, 0.0, -x, 0.0,
        0.0, d, 0.0, x,
        -x, 0.0, d, 0.0,
        0.0, x, 0.0, d,
    ]);

    let ab = al * be;
    let b2 = be * be;
    let a2 = al * al;
    // Each row of M2 is (a, -i a, b, -i b) up to the sign pattern below.
    let pre2 = Complex64::new(-1.0 / a0, 0.0);
    let rows2: [[f64; 2]; 8] = [
        [-b2 * r1, ab * r1 * t1 * t2],
        [b2 * r1, -ab * r1 * t1 * t2],
        [ab * r2 * t1 * t2, -b2 * r2],
        [-ab * r2 * t1 * t2, b2 * r2],
        [-a2 * r1 * t1 * t2 * t2, ab * r1 * t2],
        [a2 * r1 * t1 * t2 * t2, -ab * r1 * t2],
        [ab * r2 * t1, -a2 * r2 * t1 * t1 * t2],
        [-ab * r2 * t1, a2 * r2 * t1 * t1 * t2],
    ];
    // Imaginary column entries: -i·|a|, i.e. the magnitude of the paired real entry.
    let imag2: [[f64; 2]; 8] = [
        [-b2 * r1, -ab * r1 * t1 * t2],
        [-b2 * r1, -ab * r1 * t1 * t2],
        [-ab * r2 * t1 * t2, -b2 * r2],
        [-ab * r2 * t1 * t2, -b2 * r2],
        [-a2 * r1 * t1 * t2 * t2, -ab * r1 * t2],
        [-a2 * r1 * t1 * t2 * t2, -ab * r1 * t2],
        [-ab * r2 * t1, -a2 * r2 * t1 * t1 * t2],
        [-ab * r2 * t1, -a2 * r2 * t1 * t1 * t2],
    ];
    let m2 = DMatrix::from_fn(8, 4, |i, j| {
        let e = if j % 2 == 0 {
            Complex64::new(rows2[i][j / 2], 0.0)
        } else {
            Complex64::new(0.0, imag2[i][j / 2])
        };
        pre2 * e
    });

    let ta = a2 * r2 * r2 * t1 + t1;
    let tb = a2 * r1 * r1 * t2 + t2;
    let k = ab * r1 * r2;
    #[rustfmt::skip]
    let m3 = real_rows(8, 8, -1.0 / (4.0 * a0), &[
        0.0, -b2 * r1 * r1, -k * t1 * t2, 0.0, 0.0, ta, -k * t1, 0.0,
        -b2 * r1 * r1, 0.0, 0.0, -k * t1 * t2, ta, 0.0, 0.0, -k * t1,
        -k * t1 * t2, 0.0, 0.0, -b2 * r2 * r2, -k * t2, 0.0, 0.0, tb,
        0.0, -k * t1 * t2, -b2 * r2 * r2, 0.0, 0.0, -k * t2, tb, 0.0,
        0.0, ta, -k * t2, 0.0, 0.0, -a2 * r1 * r1 * t2 * t2, -k, 0.0,
        ta, 0.0, 0.0, -k * t2, -a2 * r1 * r1 * t2 * t2, 0.0, 0.0, -k,
        -k * t1, 0.0, 0.0, tb, -k, 0.0, 0.0, -a2 * r2 * r2 * t1 * t1,
        0.0, -k * t1, tb, 0.0, 0.0, -k, -a2 * r2 * r2 * t1 * t1, 0.0,
    ]);
    ensure_symmetric(&m1, "M1")?;
    ensure_symmetric(&m3, "M3")?;
    Ok(WignerForms { m1, m2, m3 })
}

/// `M4`: heralding probability `P = D̂₁ exp(uᵀM4u) / a0`.
pub fn build_probability_form(p: &ModelParams) -> Result<DMatrix<Complex64>> {
    let ModelParams {
        alpha: al,
        beta: be,
        t1,
        t2,
        rr1: r1,
        rr2: r2,
        a0,
        ..
    } = *p;
    let a2 = al * al;
    let b2 = be * be;
    let k = al * be * r1 * r2;
    let ta = a2 * r2 * r2 * t1 + t1;
    let tb = a2 * r1 * r1 * t2 + t2;
    #[rustfmt::skip]
    let m4 = real_rows(8, 8, -1.0 / (4.0 * a0), &[
        0.0, b2 * r1 * r1, -k * t1 * t2, 0.0, 0.0, ta, k * t1, 0.0,
        b2 * r1 * r1, 0.0, 0.0, -k * t1 * t2, ta, 0.0, 0.0, k * t1,
        -k * t1 * t2, 0.0, 0.0, b2 * r2 * r2, k * t2, 0.0, 0.0, tb,
        0.0, -k * t1 * t2, b2 * r2 * r2, 0.0, 0.0, k * t2, tb, 0.0,
        0.0, ta, k * t2, 0.0, 0.0, a2 * r1 * r1 * t2 * t2, -k, 0.0,
        ta, 0.0, 0.0, k * t2, a2 * r1 * r1 * t2 * t2, 0.0, 0.0, -k,
        k * t1, 0.0, 0.0, tb, -k, 0.0, 0.0, a2 * r2 * r2 * t1 * t1,
        0.0, k * t1, tb, 0.0, 0.0, -k, a2 * r2 * r2 * t1 * t1, 0.0,
    ]);
    ensure_symmetric(&m4, "M4")?;
    Ok(m4)
}

/// Moment-generating forms: `M5` (8×4, couples `u` to `x`) and `M6` (4×4).
#[derive(Clone, Debug, PartialEq)]
pub struct MomentForms {
    pub m5: DMatrix<Complex64>,
    pub m6: DMatrix<Complex64>,
}

pub fn build_moment_forms(p: &ModelParams) -> Result<MomentForms> {
    let ModelParams {
        alpha: al,
        beta: be,
        t1,
        t2,
        rr1: r1,
        rr2: r2,
        a0,
        ..
    } = *p;
    let a2 = al * al;
    let b2 = be * be;
    let ab = al * be;
    let i = Complex64::i();
    let re = |x: f64| Complex64::new(x, 0.0);
    #[rustfmt::skip]
    let entries: [Complex64; 32] = [
        re(-b2 * r1), -i * b2 * r1, re(-ab * r1 * t1 * t2), i * ab * r1 * t1 * t2,
        re(b2 * r1), -i * b2 * r1, re(ab * r1 * t1 * t2), i * ab * r1 * t1 * t2,
        re(-ab * r2 * t1 * t2), i * ab * r2 * t1 * t2, re(-b2 * r2), -i * b2 * r2,
        re(ab * r2 * t1 * t2), i * ab * r2 * t1 * t2, re(b2 * r2), -i * b2 * r2,
        re(a2 * r1 * t1 * t2 * t2), i * a2 * r1 * t1 * t2 * t2, re(ab * r1 * t2), -i * ab * r1 * t2,
        re(-a2 * r1 * t1 * t2 * t2), i * a2 * r1 * t1 * t2 * t2, re(-ab * r1 * t2), -i * ab * r1 * t2,
        re(ab * r2 * t1), -i * ab * r2 * t1, re(a2 * r2 * t1 * t1 * t2), i * a2 * r2 * t1 * t1 * t2,
        re(-ab * r2 * t1), -i * ab * r2 * t1, re(-a2 * r2 * t1 * t1 * t2), i * a2 * r2 * t1 * t1 * t2,
    ];
    let pre5 = -1.0 / (2.0 * a0);
    let m5 = DMatrix::from_row_iterator(8, 4, entries.iter().map(|&e| e * pre5));

    let d = a2 * (t1 * t1 * t2 * t2 + 1.0) + 1.0;
    let x = 2.0 * ab * t1 * t2;
    #[rustfmt::skip]
    let m6 = real_rows(4, 4, 1.0 / (4.0 * a0), &[
        d, 0.0, x, 0.0,
        0.0, d, 0.0, -x,
        x, 0.0, d, 0.0,
        0.0, -x, 0.0, d,
    ]);
    ensure_symmetric(&m6, "M6")?;
    Ok(MomentForms { m5, m6 })
}

/// Phase-dependent scalars entering the parity signal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParityAux<S> {
    pub phi: S,
    pub c1: S,
    pub s1: S,
    pub c2: S,
    pub s2: S,
    /// `(1−λ²)⁻¹ √(1 + λ²τ1τ2(λ²τ1τ2 + 2 cos 2φ))`
    pub b0: S,
    /// `w[0] … w[20]`
    pub w: [S; 21],
}

/// Position of each `w` coefficient in `M7` (indices into `ParityAux::w`).
#[rustfmt::skip]
const M7_PATTERN: [[usize; 8]; 8] = [
    [1, 2, 3, 4, 5, 6, 7, 8],
    [2, 1, 4, 3, 6, 5, 8, 7],
    [3, 4, 9, 10, 11, 12, 13, 14],
    [4, 3, 10, 9, 12, 11, 14, 13],
    [5, 6, 11, 12, 15, 16, 17, 18],
    [6, 5, 12, 11, 16, 15, 18, 17],
    [7, 8, 13, 14, 17, 18, 19, 20],
    [8, 7, 14, 13, 18, 17, 20, 19],
];

/// Parity scalars and `M7`, generic over the phase scalar so that
/// `∂/∂φ` can ride along as a [`Dual`](crate::genfunc::Dual).
pub fn build_parity_aux<S: Real>(
    p: &ModelParams,
    phi: S,
) -> Result<(ParityAux<S>, DMatrix<Complex<S>>)> {
    let c = S::from_f64;
    let (l, t1, t2, r1, r2) = (c(p.lambda), c(p.t1), c(p.t2), c(p.rr1), c(p.rr2));
    let one = c(1.0);
    let two = c(2.0);
    let c1 = phi.cos();
    let s1 = phi.sin();
    let c2 = (two * phi).cos();
    let s2 = (two * phi).sin();

    let l2 = l * l;
    let l3 = l2 * l;
    let l4 = l2 * l2;
    let (t1_2, t2_2) = (t1 * t1, t2 * t2);
    let (r1_2, r2_2) = (r1 * r1, r2 * r2);
    // λ²t1²t2²
    let k = l2 * t1_2 * t2_2;

    let mut w = [c(0.0); 21];
    w[0] = two * c2 * k + l4 * t1_2 * t1_2 * t2_2 * t2_2 + one;
    w[1] = l * r1_2 * s2 * t1 * t2;
    w[2] = c1 * r1_2 * (k + one);
    w[3] = l * r1 * r2 * t1 * t2 * (c2 + k);
    w[4] = r1 * r2 * s1 * (k - one);
    w[5] = l * r1_2 * s1 * t2 * (k - one);
    w[6] = l2 * t2_2 * t1_2 * t1 * (c2 + l2 * t2_2) + c2 * l2 * t2_2 * t1 + t1;
    w[7] = c1 * l * r1 * r2 * t1 * (k + one);
    w[8] = two * c1 * l2 * r1 * r2 * s1 * t1_2 * t2;
    w[9] = -(two * c1 * l * r2_2 * s1 * t1 * t2);
    w[10] = -(c1 * r2_2 * (k + one));
    w[11] = -(c1 * l * r1 * r2 * t2 * (k + one));
    w[12] = -(two * c1 * l2 * r1 * r2 * s1 * t1 * t2_2);
    w[13] = l * r2_2 * s1 * t1 * (k - one);
    w[14] = l2 * t1_2 * t2_2 * t2 * (c2 + l2 * t1_2) + c2 * l2 * t1_2 * t2 + t2;
    w[15] = -(l3 * r1_2 * s2 * t1 * t2_2 * t2);
    w[16] = -(c1 * l2 * r1_2 * t2_2 * (k + one));
    w[17] = -(l * r1 * r2 * (c2 * k + one));
    w[18] = l2 * r1 * r2 * s1 * t1 * t2 * (k - one);
    w[19] = l3 * r2_2 * s2 * t1_2 * t1 * t2;
    w[20] = c1 * l2 * r2_2 * t1_2 * (k + one);

    if w[0].value().partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Invariant(format!(
            "w0 = {} must be positive",
            w[0].value()
        )));
    }

    let tt = c(p.tau1 * p.tau2);
    let b0 = (one + l2 * tt * (l2 * tt + two * c2)).sqrt() / (one - l2);

    let pre = -(one / (c(4.0) * w[0]));
    let zero = c(0.0);
    let m7 = DMatrix::from_fn(8, 8, |i, j| Complex::new(pre * w[M7_PATTERN[i][j]], zero));
    ensure_symmetric(&m7, "M7")?;

    Ok((
        ParityAux {
            phi,
            c1,
            s1,
            c2,
            s2,
            b0,
            w,
        },
        m7,
    ))
}

/// Applies a mode-exchange permutation to rows and columns: `out[i][j] = m[perm_r[i]][perm_c[j]]`.
pub fn permute<T: nalgebra::Scalar>(
    m: &DMatrix<T>,
    row_perm: &[usize],
    col_perm: &[usize],
) -> DMatrix<T> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        m[(row_perm[i], col_perm[j])].clone()
    })
}
