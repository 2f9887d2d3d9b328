//! Physical quantities of a heralded state: success probability, Wigner
//! function, Weyl-ordered moments, QFI/QCRB, parity signal, phase sensitivity
//! and the figures of merit against plain squeezed vacuum.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfunc::{
    mixed_partial_at_zero, DerivativeSpec, Dual, GeneratingExponent, Real, XiPoly, XI_VARS,
};
use crate::model::{
    build_moment_forms, build_parity_aux, build_probability_form, build_wigner_forms,
    derive_params, ModelParams, NgOperation,
};

/// Largest imaginary part tolerated on a physically real output, relative to `max(1, |re|)`.
pub const IMAG_TOLERANCE: f64 = 1e-10;
/// Heralding probabilities below this make normalized quantities meaningless.
pub const DEGENERATE_PROBABILITY: f64 = 1e-300;
/// `|∂f/∂φ|` below this is treated as a stationary point of the parity signal.
pub const STATIONARY_DERIVATIVE: f64 = 1e-14;
/// `1 − f²` below this means the signal sits on a parity extremum, where the
/// error-propagation ratio is `0/0` in floating point.
pub const EXTREMAL_VARIANCE: f64 = 1e-12;
/// QFI values at or below this carry no phase information.
pub const DEGENERATE_QFI: f64 = 1e-12;
/// Default cap on the total order of a moment.
pub const DEFAULT_MOMENT_CAP: u32 = 4;

/// A point `ξ = (q1, p1, q2, p2)` in two-mode phase space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpacePoint {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
    pub p2: f64,
}

impl PhaseSpacePoint {
    pub fn new(q1: f64, p1: f64, q2: f64, p2: f64) -> Self {
        Self { q1, p1, q2, p2 }
    }

    pub fn origin() -> Self {
        Self::default()
    }

    pub fn to_array(self) -> [f64; XI_VARS] {
        [self.q1, self.p1, self.q2, self.p2]
    }
}

/// Exponents of the Weyl-ordered moment `⟨q1^a1 p1^b1 q2^a2 p2^b2⟩`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MomentIndex {
    pub a1: u32,
    pub b1: u32,
    pub a2: u32,
    pub b2: u32,
}

impl MomentIndex {
    pub fn new(a1: u32, b1: u32, a2: u32, b2: u32) -> Self {
        Self { a1, b1, a2, b2 }
    }

    pub fn order(self) -> u32 {
        self.a1 + self.b1 + self.a2 + self.b2
    }
}

/// Everything reported for a single `(λ, operation, φ)` evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub p_success: f64,
    pub f_parity: f64,
    pub delta_phi: f64,
    pub delta_phi_min: f64,
    pub merit: f64,
    pub weighted_merit: f64,
}

fn real_or_err(z: Complex64, quantity: &'static str) -> Result<f64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NumericalConsistency {
            quantity,
            detail: format!("non-finite value {z}"),
        });
    }
    if z.im.abs() > IMAG_TOLERANCE * z.re.abs().max(1.0) {
        return Err(Error::NumericalConsistency {
            quantity,
            detail: format!("imaginary residue {:e} on real part {}", z.im, z.re),
        });
    }
    Ok(z.re)
}

fn real_dual_or_err(z: Complex<Dual>, quantity: &'static str) -> Result<Dual> {
    let value = real_or_err(Complex64::new(z.re.value, z.im.value), quantity)?;
    let deriv = real_or_err(Complex64::new(z.re.deriv, z.im.deriv), quantity)?;
    Ok(Dual::new(value, deriv))
}

/// Real scalars whose complex wrappers can be checked for an imaginary residue.
pub trait CheckedReal: Real {
    fn real_checked(z: Complex<Self>, quantity: &'static str) -> Result<Self>;
}

impl CheckedReal for f64 {
    fn real_checked(z: Complex64, quantity: &'static str) -> Result<f64> {
        real_or_err(z, quantity)
    }
}

impl CheckedReal for Dual {
    fn real_checked(z: Complex<Dual>, quantity: &'static str) -> Result<Dual> {
        real_dual_or_err(z, quantity)
    }
}

/// A heralded two-mode squeezed vacuum at squeezing `λ`.
///
/// Construction evaluates the heralding normalization once; every other
/// quantity is computed on demand.
#[derive(Clone, Debug)]
pub struct NgTmsv {
    params: ModelParams,
    op: NgOperation,
    herald: DerivativeSpec,
    /// `D̂₁ exp(uᵀM4u)`, i.e. `a0 · P`.
    herald_norm: f64,
}

impl NgTmsv {
    pub fn new(lambda: f64, op: NgOperation) -> Result<Self> {
        let params = derive_params(lambda, &op)?;
        let herald = DerivativeSpec::heralding(op.m1, op.m2, op.n1, op.n2);
        let m4 = build_probability_form(&params)?;
        let raw = mixed_partial_at_zero(&GeneratingExponent::quadratic(m4)?, &herald)?;
        let herald_norm = real_or_err(raw, "success probability")?;
        let p = herald_norm / params.a0;
        if !(-IMAG_TOLERANCE..=1.0 + IMAG_TOLERANCE).contains(&p) {
            return Err(Error::NumericalConsistency {
                quantity: "success probability",
                detail: format!("{p} outside [0,1]"),
            });
        }
        Ok(Self {
            params,
            op,
            herald,
            herald_norm,
        })
    }

    /// The Gaussian reference state: no ancillas, no detections, `τ = 1`.
    pub fn tmsv(lambda: f64) -> Result<Self> {
        Self::new(lambda, NgOperation::tmsv())
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn operation(&self) -> &NgOperation {
        &self.op
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    pub fn success_probability(&self) -> f64 {
        (self.herald_norm / self.params.a0).clamp(0.0, 1.0)
    }

    fn ensure_heralded(&self, quantity: &'static str) -> Result<()> {
        let p = self.success_probability();
        if p < DEGENERATE_PROBABILITY {
            return Err(Error::Degenerate { quantity, value: p });
        }
        Ok(())
    }

    /// The normalized Wigner function as a polynomial times a Gaussian.
    pub fn wigner_function(&self) -> Result<WignerFunction> {
        self.ensure_heralded("wigner")?;
        let forms = build_wigner_forms(&self.params)?;
        let lin = (0..8)
            .map(|i| {
                (0..XI_VARS).fold(XiPoly::default(), |acc, j| {
                    acc + XiPoly::var(j) * XiPoly::constant(forms.m2[(i, j)])
                })
            })
            .collect();
        let quad = forms.m3.map(XiPoly::constant);
        let exponent = GeneratingExponent::new(quad, lin, Complex64::zero())?;
        let poly = mixed_partial_at_zero(&exponent, &self.herald)?;
        let scale = 1.0 / (self.params.a0 * PI * PI * self.success_probability());
        Ok(WignerFunction {
            poly,
            gaussian: forms.m1,
            scale,
        })
    }

    pub fn wigner(&self, point: PhaseSpacePoint) -> Result<f64> {
        self.wigner_function()?.eval(point)
    }

    /// Weyl-ordered moment with the default order cap.
    pub fn moment(&self, idx: MomentIndex) -> Result<f64> {
        self.moment_capped(idx, DEFAULT_MOMENT_CAP)
    }

    pub fn moment_capped(&self, idx: MomentIndex, cap: u32) -> Result<f64> {
        if idx.order() > cap {
            return Err(Error::parameter(
                "moment",
                format!("order {} exceeds cap {cap}", idx.order()),
            ));
        }
        self.ensure_heralded("moment")?;
        if idx.order() == 0 {
            return Ok(1.0);
        }
        let m4 = build_probability_form(&self.params)?;
        let forms = build_moment_forms(&self.params)?;
        let half = Complex64::new(0.5, 0.0);
        let quad = DMatrix::from_fn(12, 12, |i, j| match (i < 8, j < 8) {
            (true, true) => m4[(i, j)],
            (true, false) => forms.m5[(i, j - 8)] * half,
            (false, true) => forms.m5[(j, i - 8)] * half,
            (false, false) => forms.m6[(i - 8, j - 8)],
        });
        let spec =
            self.herald
                .clone()
                .then(&[(8, idx.a1), (9, idx.b1), (10, idx.a2), (11, idx.b2)])?;
        let raw = mixed_partial_at_zero(&GeneratingExponent::quadratic(quad)?, &spec)?;
        real_or_err(raw / self.herald_norm, "moment")
    }

    /// `⟨J2²⟩ = −1/8 + ¼M(2,0,0,2) + ¼M(0,2,2,0) − ½M(1,1,1,1)`.
    pub fn j2_second_moment(&self) -> Result<f64> {
        let a = self.moment(MomentIndex::new(2, 0, 0, 2))?;
        let b = self.moment(MomentIndex::new(0, 2, 2, 0))?;
        let c = self.moment(MomentIndex::new(1, 1, 1, 1))?;
        Ok(-0.125 + 0.25 * a + 0.25 * b - 0.5 * c)
    }

    /// Quantum Fisher information `4⟨J2²⟩` of the input to the interferometer.
    pub fn qfi(&self) -> Result<f64> {
        let fq = 4.0 * self.j2_second_moment()?;
        if fq <= DEGENERATE_QFI {
            return Err(Error::Degenerate {
                quantity: "qfi",
                value: fq,
            });
        }
        Ok(fq)
    }

    /// Quantum Cramér-Rao bound `1/√F_Q`.
    pub fn qcrb(&self) -> Result<f64> {
        Ok(1.0 / self.qfi()?.sqrt())
    }

    /// Parity of output mode 2 after the interferometer, over any real scalar.
    pub fn parity<S: CheckedReal>(&self, phi: S) -> Result<S> {
        self.ensure_heralded("parity")?;
        let (aux, m7) = build_parity_aux(&self.params, phi)?;
        let raw = mixed_partial_at_zero(&GeneratingExponent::quadratic(m7)?, &self.herald)?;
        let num = S::real_checked(raw, "parity")?;
        let scale = S::from_f64(self.params.a0 / self.herald_norm);
        Ok(scale * num / aux.b0)
    }

    pub fn parity_expectation(&self, phi: f64) -> Result<f64> {
        let f = self.parity(phi)?;
        if f.abs() > 1.0 + 1e-9 {
            return Err(Error::NumericalConsistency {
                quantity: "parity",
                detail: format!("|f| = {} exceeds 1", f.abs()),
            });
        }
        Ok(f)
    }

    /// Error-propagation sensitivity `√(1−f²)/|∂f/∂φ|` at the operating point `φ + π/2`.
    pub fn phase_sensitivity(&self, phi: f64) -> Result<f64> {
        let shifted = phi + FRAC_PI_2;
        let f = self.parity(Dual::variable(shifted))?;
        let var = (1.0 - f.value * f.value).max(0.0);
        if f.deriv.abs() < STATIONARY_DERIVATIVE || var < EXTREMAL_VARIANCE {
            return Err(Error::Stationary {
                phi,
                derivative: f.deriv,
            });
        }
        Ok(var.sqrt() / f.deriv.abs())
    }

    /// `Δφ_TMSV − Δφ` at the same squeezing and phase.
    pub fn merit(&self, phi: f64) -> Result<f64> {
        let reference = Self::tmsv(self.lambda())?.phase_sensitivity(phi)?;
        Ok(reference - self.phase_sensitivity(phi)?)
    }

    /// `P · (Δφ_TMSV − Δφ)`.
    pub fn weighted_merit(&self, phi: f64) -> Result<f64> {
        Ok(self.success_probability() * self.merit(phi)?)
    }

    pub fn report(&self, phi: f64) -> Result<SensitivityReport> {
        let delta_phi = self.phase_sensitivity(phi)?;
        let reference = Self::tmsv(self.lambda())?.phase_sensitivity(phi)?;
        let p_success = self.success_probability();
        let merit = reference - delta_phi;
        Ok(SensitivityReport {
            p_success,
            f_parity: self.parity_expectation(phi)?,
            delta_phi,
            delta_phi_min: self.qcrb()?,
            merit,
            weighted_merit: p_success * merit,
        })
    }
}

/// `W(ξ) = scale · poly(ξ) · exp(ξᵀ G ξ)`.
#[derive(Clone, Debug)]
pub struct WignerFunction {
    poly: XiPoly,
    gaussian: DMatrix<Complex64>,
    scale: f64,
}

impl WignerFunction {
    pub fn polynomial(&self) -> &XiPoly {
        &self.poly
    }

    pub fn eval(&self, point: PhaseSpacePoint) -> Result<f64> {
        let xi = point.to_array();
        if xi.iter().any(|x| !x.is_finite()) {
            return Err(Error::parameter("point", "must be finite"));
        }
        let mut arg = Complex64::zero();
        for i in 0..XI_VARS {
            for j in 0..XI_VARS {
                arg += self.gaussian[(i, j)] * xi[i] * xi[j];
            }
        }
        let value = self.poly.eval(xi) * arg.exp() * self.scale;
        real_or_err(value, "wigner")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OperationKind;

    fn preset(kind: OperationKind, n: u32, tau: f64) -> NgOperation {
        NgOperation::from_table(kind, n, tau).unwrap()
    }

    #[test]
    fn zero_photon_probability_is_inverse_a0() {
        let op = NgOperation::custom(0, 0, 0, 0, 0.3, 0.7).unwrap();
        let s = NgTmsv::new(0.5, op).unwrap();
        let alpha2 = 0.25 / 0.75;
        let expected = 1.0 / (1.0 + alpha2 * (1.0 - 0.21));
        assert!((s.success_probability() - expected).abs() < 1e-15);
        assert_eq!(NgTmsv::tmsv(0.5).unwrap().success_probability(), 1.0);
    }

    #[test]
    fn asym_single_subtraction_probability_closed_form() {
        let (l, t) = (0.5f64, 0.5f64);
        let s = NgTmsv::new(l, preset(OperationKind::AsymPs, 1, t)).unwrap();
        // Σ_n (1−λ²)λ^{2n} n τ^{n−1}(1−τ)
        let expected = (1.0 - l * l) * (1.0 - t) * l * l / (1.0 - t * l * l).powi(2);
        assert!((s.success_probability() - expected).abs() < 1e-14);
        assert!((expected - 0.122449).abs() < 1e-6);
    }

    #[test]
    fn catalysis_probability_tends_to_one() {
        let s = NgTmsv::new(0.5, preset(OperationKind::AsymPc, 1, 0.9999)).unwrap();
        assert!(s.success_probability() > 0.999);
    }

    #[test]
    fn tmsv_wigner_matches_gaussian() {
        let l = 0.45f64;
        let r = l.atanh();
        let s = NgTmsv::tmsv(l).unwrap();
        let w = s.wigner_function().unwrap();
        assert!((w.eval(PhaseSpacePoint::origin()).unwrap() - 1.0 / (PI * PI)).abs() < 1e-15);
        let p = PhaseSpacePoint::new(0.3, -0.2, 0.1, 0.5);
        let expected = (-(0.09 + 0.04 + 0.01 + 0.25) * (2.0 * r).cosh()
            + 2.0 * (0.3 * 0.1 - (-0.2 * 0.5)) * (2.0 * r).sinh())
        .exp()
            / (PI * PI);
        assert!((w.eval(p).unwrap() - expected).abs() < 1e-14);
    }

    /// Same value via a numeric linear term instead of the polynomial ring.
    #[test]
    fn wigner_polynomial_matches_pointwise_exponent() {
        let s = NgTmsv::new(0.4, NgOperation::custom(1, 2, 1, 2, 0.6, 0.3).unwrap()).unwrap();
        let p = PhaseSpacePoint::new(0.3, -0.2, 0.1, 0.5);
        let xi = p.to_array();
        let forms = build_wigner_forms(s.params()).unwrap();
        let lin = (0..8)
            .map(|i| (0..4).map(|j| forms.m2[(i, j)] * xi[j]).sum())
            .collect();
        let e = GeneratingExponent::new(forms.m3.clone(), lin, Complex64::zero()).unwrap();
        let d = mixed_partial_at_zero(&e, &s.herald).unwrap();
        let mut g = Complex64::zero();
        for i in 0..4 {
            for j in 0..4 {
                g += forms.m1[(i, j)] * xi[i] * xi[j];
            }
        }
        let direct = (d * g.exp()).re / (s.params().a0 * PI * PI * s.success_probability());
        assert!((s.wigner(p).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn gaussian_moments() {
        let l = 0.5f64;
        let r = l.atanh();
        let s = NgTmsv::tmsv(l).unwrap();
        assert_eq!(s.moment(MomentIndex::default()).unwrap(), 1.0);
        let q1q1 = s.moment(MomentIndex::new(2, 0, 0, 0)).unwrap();
        assert!((q1q1 - 5.0 / 6.0).abs() < 1e-13);
        assert!((q1q1 - (2.0 * r).cosh() / 2.0).abs() < 1e-13);
        let q1q2 = s.moment(MomentIndex::new(1, 0, 1, 0)).unwrap();
        assert!((q1q2 - (2.0 * r).sinh() / 2.0).abs() < 1e-13);
        let p1p2 = s.moment(MomentIndex::new(0, 1, 0, 1)).unwrap();
        assert!((p1p2 + (2.0 * r).sinh() / 2.0).abs() < 1e-13);
        assert!(s.moment(MomentIndex::new(1, 0, 0, 0)).unwrap().abs() < 1e-15);
        assert!(s.moment(MomentIndex::new(2, 1, 1, 1)).is_err());
        assert!(s.moment_capped(MomentIndex::new(2, 1, 1, 1), 5).is_ok());
    }

    #[test]
    fn tmsv_qfi_and_bound() {
        let l = 0.5f64;
        let s = NgTmsv::tmsv(l).unwrap();
        let fq = s.qfi().unwrap();
        assert!((fq - 4.0 * l * l / (1.0 - l * l).powi(2)).abs() < 1e-12);
        assert!((s.qcrb().unwrap() - 0.75).abs() < 1e-12);
        assert!(matches!(
            NgTmsv::tmsv(0.0).unwrap().qfi(),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn asymmetric_subtraction_and_addition_share_qfi() {
        let a = NgTmsv::new(0.4, preset(OperationKind::AsymPs, 1, 0.7)).unwrap();
        let b = NgTmsv::new(0.4, preset(OperationKind::AsymPa, 1, 0.7)).unwrap();
        assert!((a.qfi().unwrap() - b.qfi().unwrap()).abs() < 1e-10);
    }

    #[test]
    fn sym_addition_beats_tmsv_bound() {
        let a = NgTmsv::new(0.4, preset(OperationKind::SymPa, 1, 0.9)).unwrap();
        let t = NgTmsv::tmsv(0.4).unwrap();
        assert!(a.qcrb().unwrap() < t.qcrb().unwrap());
    }

    #[test]
    fn tmsv_parity_closed_form() {
        let l = 0.6f64;
        let s = NgTmsv::tmsv(l).unwrap();
        for phi in [0.0, 0.2, 1.1, FRAC_PI_2, 3.0] {
            let expected =
                (1.0 - l * l) / (1.0 + 2.0 * l * l * (2.0 * phi).cos() + l.powi(4)).sqrt();
            assert!((s.parity_expectation(phi).unwrap() - expected).abs() < 1e-13);
        }
        let vac = NgTmsv::new(0.0, preset(OperationKind::SymPc, 1, 0.5)).unwrap();
        assert!((vac.parity_expectation(0.7).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dual_parity_derivative_matches_difference_quotient() {
        let s = NgTmsv::new(0.4, preset(OperationKind::SymPa, 1, 0.9)).unwrap();
        let phi = 1.2;
        let d = s.parity(Dual::variable(phi)).unwrap();
        let h = 1e-6;
        let fd = (s.parity(phi + h).unwrap() - s.parity(phi - h).unwrap()) / (2.0 * h);
        assert!((d.value - s.parity(phi).unwrap()).abs() < 1e-15);
        assert!((d.deriv - fd).abs() < 1e-8);
    }

    #[test]
    fn tmsv_sensitivity_saturates_bound_near_zero() {
        let l = 0.5;
        let s = NgTmsv::tmsv(l).unwrap();
        assert!((s.phase_sensitivity(1e-4).unwrap() - 0.75).abs() < 1e-4);
        assert!(matches!(
            s.phase_sensitivity(0.0),
            Err(Error::Stationary { .. })
        ));
        assert_eq!(s.merit(0.01).unwrap(), 0.0);
        // f rounds to 1 while ∂f/∂φ is still a few ulps above the threshold.
        assert!(matches!(
            NgTmsv::tmsv(0.95).unwrap().phase_sensitivity(0.0),
            Err(Error::Stationary { .. })
        ));
    }

    #[test]
    fn report_is_consistent() {
        let s = NgTmsv::new(0.4, preset(OperationKind::SymPs, 1, 0.8)).unwrap();
        let r = s.report(0.01).unwrap();
        assert!((0.0..=1.0).contains(&r.p_success));
        assert!(r.delta_phi >= r.delta_phi_min - 1e-9);
        assert!((r.weighted_merit - r.p_success * r.merit).abs() < 1e-15);
    }
}
