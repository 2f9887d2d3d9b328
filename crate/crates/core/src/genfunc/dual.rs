//! Forward-mode dual numbers carrying one first derivative.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Num, One, Zero};

/// A value together with its derivative with respect to a single parameter.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dual {
    pub value: f64,
    pub deriv: f64,
}

impl Dual {
    pub const fn new(value: f64, deriv: f64) -> Self {
        Self { value, deriv }
    }

    /// A quantity that does not depend on the parameter.
    pub const fn constant(value: f64) -> Self {
        Self { value, deriv: 0.0 }
    }

    /// The parameter itself, seeded with unit derivative.
    pub const fn variable(value: f64) -> Self {
        Self { value, deriv: 1.0 }
    }

    pub fn sin(self) -> Self {
        Self::new(self.value.sin(), self.deriv * self.value.cos())
    }

    pub fn cos(self) -> Self {
        Self::new(self.value.cos(), -self.deriv * self.value.sin())
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        Self::new(s, self.deriv / (2.0 * s))
    }

    pub fn recip(self) -> Self {
        Self::new(1.0 / self.value, -self.deriv / (self.value * self.value))
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.value, self.deriv)
    }
}

impl From<f64> for Dual {
    fn from(value: f64) -> Self {
        Self::constant(value)
    }
}

impl Add for Dual {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.deriv + rhs.deriv)
    }
}

impl Sub for Dual {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.deriv - rhs.deriv)
    }
}

impl Mul for Dual {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.value * rhs.value,
            self.deriv * rhs.value + self.value * rhs.deriv,
        )
    }
}

impl Mul<f64> for Dual {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.value * rhs, self.deriv * rhs)
    }
}

impl Div for Dual {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = 1.0 / rhs.value;
        Self::new(
            self.value * inv,
            (self.deriv * rhs.value - self.value * rhs.deriv) * inv * inv,
        )
    }
}

impl Rem for Dual {
    type Output = Self;
    /// `a % b = a - b * trunc(a / b)`; the truncated quotient is locally constant.
    fn rem(self, rhs: Self) -> Self {
        let q = (self.value / rhs.value).trunc();
        Self::new(self.value % rhs.value, self.deriv - q * rhs.deriv)
    }
}

impl Neg for Dual {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.deriv)
    }
}

impl Zero for Dual {
    fn zero() -> Self {
        Self::constant(0.0)
    }

    fn is_zero(&self) -> bool {
        self.value == 0.0 && self.deriv == 0.0
    }
}

impl One for Dual {
    fn one() -> Self {
        Self::constant(1.0)
    }
}

impl Num for Dual {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        <f64 as Num>::from_str_radix(s, radix).map(Self::constant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_at_seeded_point() {
        let phi = Dual::variable(0.3);
        let s = phi.sin();
        assert_eq!(s.value, 0.3f64.sin());
        assert_eq!(s.deriv, 0.3f64.cos());
    }

    #[test]
    fn product_and_quotient_rules() {
        let x = Dual::new(1.5, 2.0);
        let y = Dual::new(-0.7, 0.25);
        let p = x * y;
        assert!((p.deriv - (2.0 * -0.7 + 1.5 * 0.25)).abs() < 1e-15);
        let q = x / y;
        let expected = (2.0 * -0.7 - 1.5 * 0.25) / (0.7 * 0.7);
        assert!((q.deriv - expected).abs() < 1e-14);
        assert!(((x + y).deriv - 2.25).abs() < 1e-15);
    }

    #[test]
    fn chain_rule_matches_central_difference() {
        // g(x) = sqrt(2 + sin(x) * cos(3x))
        let g = |x: Dual| (Dual::constant(2.0) + x.sin() * (x * 3.0).cos()).sqrt();
        let gf = |x: f64| (2.0 + x.sin() * (3.0 * x).cos()).sqrt();
        for &x in &[-1.2, 0.0, 0.4, 2.5] {
            let h = 1e-6;
            let fd = (gf(x + h) - gf(x - h)) / (2.0 * h);
            assert!((g(Dual::variable(x)).deriv - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn remainder_keeps_slope_of_dividend() {
        let r = Dual::new(7.5, 1.0) % Dual::constant(2.0);
        assert_eq!(r.value, 1.5);
        assert_eq!(r.deriv, 1.0);
    }
}
