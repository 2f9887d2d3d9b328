//! Coefficient rings for the series engine.
//!
//! Every quantity in the crate is an exponential of a quadratic form whose
//! coefficients live in one of three commutative rings: plain complex numbers,
//! complex polynomials in the phase-space variables, or complex numbers whose
//! parts are [`Dual`] numbers in the interferometer phase.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Scalar;
use num_complex::{Complex, Complex64};
use num_traits::{Num, One, Zero};

use super::Dual;

/// Real scalars the model matrices can be built over: `f64`, or [`Dual`]
/// when the derivative with respect to the phase is needed.
pub trait Real: Copy + Num + Neg<Output = Self> + Debug + Send + Sync + 'static {
    fn from_f64(x: f64) -> Self;
    /// The plain value, dropping any derivative part.
    fn value(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn value(self) -> f64 {
        self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

impl Real for Dual {
    fn from_f64(x: f64) -> Self {
        Dual::constant(x)
    }
    fn value(self) -> f64 {
        self.value
    }
    fn sin(self) -> Self {
        Dual::sin(self)
    }
    fn cos(self) -> Self {
        Dual::cos(self)
    }
    fn sqrt(self) -> Self {
        Dual::sqrt(self)
    }
}

/// A commutative ring usable as the coefficient type of a [`TruncatedSeries`](super::TruncatedSeries).
pub trait Ring:
    Scalar
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Multiplication by a real constant.
    fn scale(&self, k: f64) -> Self;

    /// Embeds a complex constant.
    fn from_c64(c: Complex64) -> Self;
}

impl<S: Real> Ring for Complex<S> {
    fn scale(&self, k: f64) -> Self {
        let k = S::from_f64(k);
        Complex::new(self.re * k, self.im * k)
    }

    fn from_c64(c: Complex64) -> Self {
        Complex::new(S::from_f64(c.re), S::from_f64(c.im))
    }
}

/// Complex scalars whose parts carry a derivative in the phase.
pub type DualComplex = Complex<Dual>;
