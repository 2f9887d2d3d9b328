//! Sparse complex polynomials in the four phase-space variables (q1, p1, q2, p2).

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::Ring;

/// Number of external variables a [`XiPoly`] can carry.
pub const XI_VARS: usize = 4;

/// Exponent vector of a monomial in (q1, p1, q2, p2).
pub type XiExponent = [u8; XI_VARS];

/// A polynomial with complex coefficients in at most four variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct XiPoly {
    terms: BTreeMap<XiExponent, Complex64>,
}

impl XiPoly {
    pub fn constant(c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if c != Complex64::zero() {
            terms.insert([0; XI_VARS], c);
        }
        Self { terms }
    }

    /// The variable with index `i` (0 = q1, 1 = p1, 2 = q2, 3 = p2).
    pub fn var(i: usize) -> Self {
        assert!(i < XI_VARS, "variable index {i} out of range");
        let mut e = [0; XI_VARS];
        e[i] = 1;
        Self {
            terms: BTreeMap::from([(e, Complex64::one())]),
        }
    }

    pub fn coefficient(&self, exponent: XiExponent) -> Complex64 {
        self.terms.get(&exponent).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XiExponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Evaluates the polynomial at a real point.
    pub fn eval(&self, point: [f64; XI_VARS]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: f64 = e
                    .iter()
                    .zip(point)
                    .map(|(&k, x)| x.powi(k as i32))
                    .product();
                c * mono
            })
            .sum()
    }

    fn accumulate(&mut self, e: XiExponent, c: Complex64) {
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if *slot == Complex64::zero() {
            self.terms.remove(&e);
        }
    }
}

impl Add for XiPoly {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.accumulate(e, c);
        }
        self
    }
}

impl Sub for XiPoly {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for XiPoly {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul for XiPoly {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = XiPoly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (k, b) in e.iter_mut().zip(eb) {
                    *k = k.checked_add(*b).expect("XiPoly exponent overflow");
                }
                out.accumulate(e, ca * cb);
            }
        }
        out
    }
}

impl Zero for XiPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for XiPoly {
    fn one() -> Self {
        Self::constant(Complex64::one())
    }
}

impl Ring for XiPoly {
    fn scale(&self, k: f64) -> Self {
        if k == 0.0 {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    fn from_c64(c: Complex64) -> Self {
        Self::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_square_and_evaluation() {
        let z = XiPoly::var(0) + XiPoly::var(1).scale(2.0);
        let sq = z.clone() * z;
        assert_eq!(sq.coefficient([1, 1, 0, 0]), Complex64::new(4.0, 0.0));
        assert_eq!(sq.degree(), 2);
        let v = sq.eval([0.5, -1.0, 0.0, 0.0]);
        assert!((v.re - 2.25).abs() < 1e-15);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = XiPoly::var(2) - XiPoly::var(2);
        assert!(p.is_zero());
    }
}
