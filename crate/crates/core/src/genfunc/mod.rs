//! Derivatives at the origin of exponentials of quadratic forms.
//!
//! Every analytic quantity in this crate has the shape
//! `prefactor · ∂^k exp(uᵀQu + lin·u)|_{u=0}`; this module evaluates such
//! expressions over a generic coefficient ring.

mod dual;
mod poly;
mod ring;
mod series;

pub use dual::Dual;
pub use poly::{XiExponent, XiPoly, XI_VARS};
pub use ring::{DualComplex, Real, Ring};
pub use series::{
    mixed_partial_at_zero, series_exp, DerivativeSpec, GeneratingExponent, MultiIndex,
    TruncatedSeries, Truncation, MAX_ORDER, MAX_VARS,
};
