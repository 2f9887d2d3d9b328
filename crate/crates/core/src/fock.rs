//! Brute-force simulator in a truncated photon-number basis.
//!
//! Used as an independent check on the analytic layer: prepares the squeezed
//! vacuum, mixes in ancilla photons on beam splitters, projects the ancillas
//! onto the detected photon numbers, and then measures parity and `J2`
//! moments after the interferometer.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::NgOperation;

/// Largest tolerated tail `λ^{2(N+1)}` of the squeezed vacuum beyond the cutoff.
pub const LEAKAGE_TOLERANCE: f64 = 1e-14;
/// Smallest per-mode cutoff used regardless of squeezing.
pub const MIN_CUTOFF: usize = 12;

/// Amplitudes over `modes` modes, each truncated to `dim` photon-number states.
/// Mode 0 is the slowest-varying index.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    dim: usize,
    modes: usize,
    amps: Vec<Complex64>,
}

/// Photon-number cutoff for the squeezed vacuum at `λ`.
pub fn cutoff_for(lambda: f64) -> usize {
    if lambda <= 0.0 {
        return MIN_CUTOFF;
    }
    let n = (LEAKAGE_TOLERANCE.ln() / (2.0 * lambda.ln())).ceil();
    (n as usize).max(MIN_CUTOFF)
}

impl FockState {
    pub fn zeros(dim: usize, modes: usize) -> Self {
        Self {
            dim,
            modes,
            amps: vec![Complex64::zero(); dim.pow(modes as u32)],
        }
    }

    /// A single photon-number state.
    pub fn number(photons: &[usize], dim: usize) -> Result<Self> {
        let mut s = Self::zeros(dim, photons.len());
        let i = s.flat(photons).ok_or_else(|| {
            Error::Truncation(format!("{photons:?} does not fit in dimension {dim}"))
        })?;
        s.amps[i] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(dim: usize, modes: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != dim.pow(modes as u32) {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {modes} modes of dimension {dim}",
                amps.len()
            )));
        }
        Ok(Self { dim, modes, amps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, photons: &[usize]) -> Complex64 {
        self.flat(photons)
            .map_or(Complex64::zero(), |i| self.amps[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n <= 0.0 {
            return Err(Error::Normalization { norm_sqr: n });
        }
        let k = 1.0 / n.sqrt();
        Ok(Self {
            amps: self.amps.iter().map(|a| a * k).collect(),
            ..self.clone()
        })
    }

    fn flat(&self, photons: &[usize]) -> Option<usize> {
        if photons.len() != self.modes || photons.iter().any(|&n| n >= self.dim) {
            return None;
        }
        Some(photons.iter().fold(0, |acc, &n| acc * self.dim + n))
    }

    fn unflat(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.modes];
        for k in (0..self.modes).rev() {
            out[k] = i % self.dim;
            i /= self.dim;
        }
        out
    }

    fn stride(&self, mode: usize) -> usize {
        self.dim.pow((self.modes - 1 - mode) as u32)
    }

    /// The same state in a larger per-mode dimension.
    pub fn padded(&self, dim: usize) -> Self {
        if dim <= self.dim {
            return self.clone();
        }
        let mut out = Self::zeros(dim, self.modes);
        for (i, a) in self.amps.iter().enumerate() {
            if !a.is_zero() {
                let j = out.flat(&self.unflat(i)).expect("padding only grows");
                out.amps[j] = *a;
            }
        }
        out
    }

    /// Tensor product with a new last mode in the number state `|n⟩`.
    pub fn append_mode(&self, n: usize) -> Self {
        let base = self.padded(n + 1);
        let mut out = Self::zeros(base.dim, base.modes + 1);
        for (i, a) in base.amps.iter().enumerate() {
            out.amps[i * base.dim + n] = *a;
        }
        out
    }

    fn max_pair_total(&self, i: usize, j: usize) -> usize {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, _)| {
                let idx = self.unflat(k);
                idx[i] + idx[j]
            })
            .max()
            .unwrap_or(0)
    }

    /// Applies `exp(angle · (a_i† a_j − a_i a_j†))`, padding first so that every
    /// occupied fixed-total block is complete.
    pub fn rotate_pair(&self, i: usize, j: usize, angle: f64) -> Result<Self> {
        if i == j || i >= self.modes || j >= self.modes {
            return Err(Error::Dimension(format!(
                "mode pair ({i},{j}) on a {}-mode state",
                self.modes
            )));
        }
        let top = self.max_pair_total(i, j);
        let state = self.padded(top + 1);
        let blocks: Vec<DMatrix<Complex64>> = (0..=top).map(|n| pair_block(n, angle)).collect();
        let (si, sj) = (state.stride(i), state.stride(j));
        let mut out = Self::zeros(state.dim, state.modes);
        for base in 0..state.amps.len() {
            let idx = state.unflat(base);
            if idx[i] != 0 || idx[j] != 0 {
                continue;
            }
            for (n, u) in blocks.iter().enumerate() {
                let at = |k: usize| base + k * si + (n - k) * sj;
                let v: Vec<Complex64> = (0..=n).map(|k| state.amps[at(k)]).collect();
                if v.iter().all(|a| a.is_zero()) {
                    continue;
                }
                for k in 0..=n {
                    out.amps[at(k)] = (0..=n).map(|l| u[(k, l)] * v[l]).sum();
                }
            }
        }
        Ok(out)
    }

    /// Beam splitter of transmissivity `tau`: `a_i → √τ a_i + √(1−τ) a_j`.
    pub fn beamsplitter(&self, i: usize, j: usize, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::parameter(
                "tau",
                format!("must be in (0,1], got {tau}"),
            ));
        }
        self.rotate_pair(i, j, tau.sqrt().acos())
    }

    /// Projects `mode` onto `|n⟩` and drops it. Returns the unnormalized
    /// remainder and its squared norm.
    pub fn herald(&self, mode: usize, n: usize) -> Result<(Self, f64)> {
        if mode >= self.modes || self.modes < 2 {
            return Err(Error::Dimension(format!(
                "cannot herald mode {mode} of a {}-mode state",
                self.modes
            )));
        }
        let mut out = Self::zeros(self.dim, self.modes - 1);
        if n < self.dim {
            for (k, a) in self.amps.iter().enumerate() {
                let mut idx = self.unflat(k);
                if idx[mode] == n {
                    idx.remove(mode);
                    let t = out.flat(&idx).expect("same dimension");
                    out.amps[t] = *a;
                }
            }
        }
        let p = out.norm_sqr();
        Ok((out, p))
    }

    /// Balanced interferometer `exp(−iφ J2)` on a two-mode state.
    pub fn mzi(&self, phi: f64) -> Result<Self> {
        self.require_two_modes()?;
        self.rotate_pair(0, 1, -phi / 2.0)
    }

    fn require_two_modes(&self) -> Result<()> {
        if self.modes != 2 {
            return Err(Error::Dimension(format!(
                "expected a two-mode state, got {} modes",
                self.modes
            )));
        }
        Ok(())
    }

    fn require_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::Normalization { norm_sqr: n });
        }
        Ok(())
    }

    /// `⟨(−1)^{n_mode}⟩`.
    pub fn parity(&self, mode: usize) -> Result<f64> {
        self.require_normalized()?;
        if mode >= self.modes {
            return Err(Error::Dimension(format!("no mode {mode}")));
        }
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let sign = if self.unflat(k)[mode].is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                sign * a.norm_sqr()
            })
            .sum())
    }

    /// `(⟨J2⟩, ⟨J2²⟩)` with `J2 = (a1† a2 − a1 a2†) / 2i`.
    pub fn j2_moments(&self) -> Result<(f64, f64)> {
        self.require_two_modes()?;
        self.require_normalized()?;
        let s = self.padded(self.dim + 1);
        let d = s.dim;
        let mut j2 = vec![Complex64::zero(); s.amps.len()];
        let half_i = Complex64::new(0.0, -0.5);
        for a in 0..d {
            for b in 0..d {
                let v = s.amps[a * d + b];
                if v.is_zero() {
                    continue;
                }
                if a + 1 < d && b > 0 {
                    let c = ((a + 1) as f64 * b as f64).sqrt();
                    j2[(a + 1) * d + b - 1] += half_i * c * v;
                }
                if a > 0 && b + 1 < d {
                    let c = (a as f64 * (b + 1) as f64).sqrt();
                    j2[(a - 1) * d + b + 1] -= half_i * c * v;
                }
            }
        }
        let mean: Complex64 = s.amps.iter().zip(&j2).map(|(x, y)| x.conj() * y).sum();
        let second = j2.iter().map(|y| y.norm_sqr()).sum();
        Ok((mean.re, second))
    }

    /// Wigner function of a normalized two-mode state at `(q1, p1, q2, p2)`.
    pub fn wigner_point(&self, point: [f64; 4]) -> Result<f64> {
        self.require_two_modes()?;
        self.require_normalized()?;
        let d = self.dim;
        let psi = DMatrix::from_row_slice(d, d, &self.amps);
        let k1 = wigner_kernel(d, point[0], point[1]);
        let k2 = wigner_kernel(d, point[2], point[3]);
        // W = Σ ψ[m,n] ψ*[m',n'] K1[m,m'] K2[n,n'] = Σ K1 ∘ (ψ K2 ψ†)
        let t = &psi * k2 * psi.adjoint();
        Ok(k1.zip_map(&t, |a, b| a * b).sum().re)
    }
}

/// `exp(angle · K)` on the block `|k, n−k⟩`, `K = a†b − ab†`, from the
/// eigendecomposition of the Hermitian `iK`.
fn pair_block(n: usize, angle: f64) -> DMatrix<Complex64> {
    let size = n + 1;
    if n == 0 || angle == 0.0 {
        return DMatrix::identity(size, size);
    }
    let mut h = DMatrix::<Complex64>::zeros(size, size);
    for k in 0..n {
        let c = ((k + 1) as f64 * (n - k) as f64).sqrt();
        // K[k+1,k] = c, K[k,k+1] = −c
        h[(k + 1, k)] = Complex64::new(0.0, c);
        h[(k, k + 1)] = Complex64::new(0.0, -c);
    }
    let eig = SymmetricEigen::new(h);
    let phases = eig
        .eigenvalues
        .map(|e| Complex64::from_polar(1.0, -angle * e));
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&phases) * v.adjoint()
}

/// Single-mode Wigner transforms `W_{|m⟩⟨n|}(q, p)`, `m, n < dim`.
pub fn wigner_kernel(dim: usize, q: f64, p: f64) -> DMatrix<Complex64> {
    let x = 2.0 * (q * q + p * p);
    let z = Complex64::new(q, -p) * 2f64.sqrt();
    let g = (-(q * q + p * p)).exp() / PI;
    let mut k = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut lead = Complex64::new(1.0, 0.0);
        for m in n..dim {
            if m > n {
                lead *= z / (m as f64).sqrt();
            }
            let v = lead * (sign * g * generalized_laguerre(n, (m - n) as f64, x));
            k[(m, n)] = v;
            k[(n, m)] = v.conj();
        }
    }
    k
}

/// `L_n^{(α)}(x)` by the three-term recurrence.
pub fn generalized_laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `Σ √(1−λ²) λⁿ |n, n⟩` truncated at `cutoff` photons per mode.
pub fn tmsv_state(lambda: f64, cutoff: usize) -> Result<FockState> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::parameter("lambda", "must be in [0,1)"));
    }
    let leakage = lambda.powi(2 * (cutoff as i32 + 1));
    if leakage > LEAKAGE_TOLERANCE {
        return Err(Error::Truncation(format!(
            "cutoff {cutoff} leaves {leakage:e} of the squeezed vacuum outside the basis"
        )));
    }
    let d = cutoff + 1;
    let mut s = FockState::zeros(d, 2);
    let c0 = (1.0 - lambda * lambda).sqrt();
    let mut c = c0;
    for n in 0..d {
        s.amps[n * d + n] = Complex64::new(c, 0.0);
        c *= lambda;
    }
    Ok(s)
}

/// A heralded state: normalized two-mode vector and the heralding probability.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub state: FockState,
    pub probability: f64,
}

/// Runs the full preparation: squeezed vacuum, ancilla `|m_i⟩` mixed into mode `i`
/// at transmissivity `τ_i`, ancilla detected with `n_i` photons.
pub fn prepare_ng_tmsv(lambda: f64, op: &NgOperation) -> Result<Prepared> {
    let mut state = tmsv_state(lambda, cutoff_for(lambda))?;
    for (mode, m, n, tau) in [(0, op.m1, op.n1, op.tau1), (1, op.m2, op.n2, op.tau2)] {
        let with_ancilla = state.append_mode(m as usize);
        let mixed = with_ancilla.beamsplitter(mode, 2, tau)?;
        state = mixed.herald(2, n as usize)?.0;
    }
    let probability = state.norm_sqr();
    Ok(Prepared {
        state: state.normalized()?,
        probability,
    })
}
