//! Truncated multivariate power series and derivative extraction at the origin.
//!
//! A mixed partial derivative `∂^k exp(Q(u))|_{u=0}` equals `k! · [u^k] exp(Q)`,
//! so every derivative the model needs reduces to reading one coefficient of a
//! truncated Taylor expansion. The expansion is built as a product of the
//! exponentials of the individual monomials of `Q`, which keeps every
//! intermediate inside the truncation.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use super::Ring;
use crate::error::{Error, Result};

/// Maximum number of formal variables in one series.
pub const MAX_VARS: usize = 16;
/// Maximum exponent of any single variable (and maximum total degree).
pub const MAX_ORDER: u32 = u8::MAX as u32;

const FIELD_BITS: u32 = 8;
const FIELD_MASK: u128 = 0xff;

/// Exponent vector packed into 8-bit fields of a `u128`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(u128);

impl MultiIndex {
    pub fn from_exponents(exponents: &[u32]) -> Result<Self> {
        if exponents.len() > MAX_VARS {
            return Err(Error::Dimension(format!(
                "{} variables exceed the limit of {MAX_VARS}",
                exponents.len()
            )));
        }
        let mut packed = 0u128;
        for (i, &k) in exponents.iter().enumerate() {
            if k > MAX_ORDER {
                return Err(Error::Dimension(format!(
                    "exponent {k} of variable {i} exceeds {MAX_ORDER}"
                )));
            }
            packed |= (k as u128) << (FIELD_BITS * i as u32);
        }
        Ok(Self(packed))
    }

    fn unit(var: usize, power: u32) -> Self {
        Self((power as u128) << (FIELD_BITS * var as u32))
    }

    pub fn get(self, var: usize) -> u32 {
        ((self.0 >> (FIELD_BITS * var as u32)) & FIELD_MASK) as u32
    }

    pub fn exponents(self, dim: usize) -> Vec<u32> {
        (0..dim).map(|i| self.get(i)).collect()
    }

    pub fn degree(self, dim: usize) -> u32 {
        (0..dim).map(|i| self.get(i)).sum()
    }

    /// Field-wise sum; `None` if any field would exceed `MAX_ORDER`.
    fn checked_add(self, other: Self, dim: usize) -> Option<Self> {
        let mut packed = 0u128;
        for i in 0..dim {
            let k = self.get(i) + other.get(i);
            if k > MAX_ORDER {
                return None;
            }
            packed |= (k as u128) << (FIELD_BITS * i as u32);
        }
        Some(Self(packed))
    }
}

/// Which monomials a series keeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    max_degree: u32,
    caps: Option<Vec<u32>>,
}

impl Truncation {
    /// Keep every monomial of total degree at most `max_degree`.
    pub fn total_degree(max_degree: u32) -> Self {
        Self {
            max_degree: max_degree.min(MAX_ORDER),
            caps: None,
        }
    }

    /// Additionally bound each variable's exponent. Monomials outside the
    /// box form an ideal, so coefficients inside the box are unaffected.
    pub fn boxed(caps: Vec<u32>, max_degree: u32) -> Self {
        Self {
            max_degree: max_degree.min(MAX_ORDER),
            caps: Some(caps),
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    fn admits(&self, idx: MultiIndex, dim: usize) -> bool {
        if idx.degree(dim) > self.max_degree {
            return false;
        }
        match &self.caps {
            Some(caps) => caps.iter().enumerate().all(|(i, &c)| idx.get(i) <= c),
            None => true,
        }
    }
}

/// Sparse power series in `dim` variables over the ring `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<R> {
    dim: usize,
    truncation: Truncation,
    terms: BTreeMap<MultiIndex, R>,
}

impl<R: Ring> TruncatedSeries<R> {
    /// The constant series 1.
    pub fn one(dim: usize, truncation: Truncation) -> Result<Self> {
        Self::from_terms(dim, truncation, [(vec![0; dim], R::one())])
    }

    /// Builds a series from explicit terms; terms outside the truncation are dropped.
    pub fn from_terms<I>(dim: usize, truncation: Truncation, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, R)>,
    {
        check_dim(dim)?;
        if let Some(caps) = &truncation.caps {
            if caps.len() != dim {
                return Err(Error::Dimension(format!(
                    "truncation box has {} entries for {dim} variables",
                    caps.len()
                )));
            }
        }
        let mut series = Self {
            dim,
            truncation,
            terms: BTreeMap::new(),
        };
        for (exponents, c) in terms {
            if exponents.len() != dim {
                return Err(Error::Dimension(format!(
                    "term with {} exponents in a {dim}-variable series",
                    exponents.len()
                )));
            }
            let idx = MultiIndex::from_exponents(&exponents)?;
            series.accumulate(idx, c);
        }
        Ok(series)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> u32 {
        self.truncation.max_degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `Π u_i^{k_i}`; zero when absent or truncated away.
    pub fn coefficient(&self, exponents: &[u32]) -> R {
        match MultiIndex::from_exponents(exponents) {
            Ok(idx) if exponents.len() == self.dim => {
                self.terms.get(&idx).cloned().unwrap_or_else(R::zero)
            }
            _ => R::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &R)> {
        self.terms.iter().map(|(k, c)| (k.exponents(self.dim), c))
    }

    fn accumulate(&mut self, idx: MultiIndex, c: R) {
        if c.is_zero() || !self.truncation.admits(idx, self.dim) {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(slot) => {
                *slot = slot.clone() + c;
                if slot.is_zero() {
                    self.terms.remove(&idx);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    /// Truncated product. Both operands must share dimension and truncation.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.truncation != other.truncation {
            return Err(Error::Dimension(
                "series product needs equal dimension and truncation".into(),
            ));
        }
        let mut out = Self {
            dim: self.dim,
            truncation: self.truncation.clone(),
            terms: BTreeMap::new(),
        };
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some(k) = ka.checked_add(*kb, self.dim) {
                    out.accumulate(k, ca.clone() * cb.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.truncation != other.truncation {
            return Err(Error::Dimension(
                "series sum needs equal dimension and truncation".into(),
            ));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(*k, c.clone());
        }
        Ok(out)
    }

    /// Multiplies in `exp(coeff · monomial)`, expanded as far as the truncation allows.
    fn mul_exp_monomial(&self, coeff: &R, monomial: MultiIndex) -> Self {
        let mut out = Self {
            dim: self.dim,
            truncation: self.truncation.clone(),
            terms: BTreeMap::new(),
        };
        for (k, c) in &self.terms {
            let mut idx = *k;
            let mut term = c.clone();
            let mut j = 0u32;
            loop {
                out.accumulate(idx, term.clone());
                j += 1;
                match idx.checked_add(monomial, self.dim) {
                    Some(next) if self.truncation.admits(next, self.dim) => {
                        idx = next;
                        term = (term * coeff.clone()).scale(1.0 / j as f64);
                    }
                    _ => break,
                }
            }
        }
        out
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_VARS {
        return Err(Error::Dimension(format!(
            "{dim} variables exceed the limit of {MAX_VARS}"
        )));
    }
    Ok(())
}

/// The argument of an exponential: `uᵀ Q u + lin · u + const_term`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingExponent<R: Ring> {
    dim: usize,
    quad: DMatrix<R>,
    lin: Vec<R>,
    const_term: Complex64,
}

impl<R: Ring> GeneratingExponent<R> {
    /// `quad` is symmetrized on construction; `lin` may be empty for a zero linear part.
    pub fn new(quad: DMatrix<R>, lin: Vec<R>, const_term: Complex64) -> Result<Self> {
        let dim = quad.nrows();
        if quad.ncols() != dim {
            return Err(Error::Dimension(format!(
                "quadratic form is {}x{}",
                quad.nrows(),
                quad.ncols()
            )));
        }
        check_dim(dim)?;
        let lin = if lin.is_empty() {
            vec![R::zero(); dim]
        } else {
            lin
        };
        if lin.len() != dim {
            return Err(Error::Dimension(format!(
                "linear part has {} entries for {dim} variables",
                lin.len()
            )));
        }
        let sym = DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                quad[(i, i)].clone()
            } else {
                (quad[(i, j)].clone() + quad[(j, i)].clone()).scale(0.5)
            }
        });
        Ok(Self {
            dim,
            quad: sym,
            lin,
            const_term,
        })
    }

    /// Pure quadratic form with no linear or constant part.
    pub fn quadratic(quad: DMatrix<R>) -> Result<Self> {
        Self::new(quad, Vec::new(), Complex64::zero())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn quad(&self) -> &DMatrix<R> {
        &self.quad
    }

    pub fn lin(&self) -> &[R] {
        &self.lin
    }

    pub fn const_term(&self) -> Complex64 {
        self.const_term
    }

    /// Non-zero monomials of the exponent without the constant.
    fn monomials(&self) -> Vec<(R, MultiIndex)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            let c = self.quad[(i, i)].clone();
            if !c.is_zero() {
                out.push((c, MultiIndex::unit(i, 2)));
            }
            for j in (i + 1)..self.dim {
                let c = self.quad[(i, j)].clone() + self.quad[(j, i)].clone();
                if !c.is_zero() {
                    out.push((
                        c,
                        MultiIndex(MultiIndex::unit(i, 1).0 | MultiIndex::unit(j, 1).0),
                    ));
                }
            }
            if !self.lin[i].is_zero() {
                out.push((self.lin[i].clone(), MultiIndex::unit(i, 1)));
            }
        }
        out
    }

    fn exp_without_constant(&self, truncation: Truncation) -> Result<TruncatedSeries<R>> {
        let mut series = TruncatedSeries::one(self.dim, truncation)?;
        for (c, m) in self.monomials() {
            series = series.mul_exp_monomial(&c, m);
        }
        Ok(series)
    }
}

impl GeneratingExponent<Complex64> {
    /// Direct evaluation of `exp(uᵀQu + lin·u + c)` at a point.
    pub fn eval_exp(&self, point: &[Complex64]) -> Complex64 {
        let mut arg = self.const_term;
        for i in 0..self.dim {
            arg += self.lin[i] * point[i];
            for j in 0..self.dim {
                arg += point[i] * self.quad[(i, j)] * point[j];
            }
        }
        arg.exp()
    }
}

/// Taylor expansion of `exp(exponent)` about the origin, truncated at total degree `max_degree`.
pub fn series_exp<R: Ring>(
    exponent: &GeneratingExponent<R>,
    max_degree: u32,
) -> Result<TruncatedSeries<R>> {
    if max_degree > MAX_ORDER {
        return Err(Error::Dimension(format!(
            "truncation degree {max_degree} exceeds {MAX_ORDER}"
        )));
    }
    let mut series = exponent.exp_without_constant(Truncation::total_degree(max_degree))?;
    let c = exponent.const_term();
    if c != Complex64::zero() {
        let k = R::from_c64(c.exp());
        for v in series.terms.values_mut() {
            *v = v.clone() * k.clone();
        }
    }
    Ok(series)
}

/// A scaled mixed partial derivative evaluated at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeSpec {
    orders: Vec<(usize, u32)>,
    prefactor: Complex64,
}

impl DerivativeSpec {
    pub fn new(orders: Vec<(usize, u32)>, prefactor: Complex64) -> Result<Self> {
        for (n, (v, _)) in orders.iter().enumerate() {
            if orders[..n].iter().any(|(w, _)| w == v) {
                return Err(Error::Dimension(format!(
                    "variable {v} listed twice in derivative spec"
                )));
            }
        }
        Ok(Self { orders, prefactor })
    }

    /// `2^n/n! ∂_s^n ∂_t^n` with `s`, `t` the variables 0 and 1: the operator
    /// that extracts `L_n[2(q²+p²)]` from `exp(st/2 + s(q+ip) − t(q−ip))`.
    pub fn laguerre(n: u32) -> Self {
        let prefactor = 2f64.powi(n as i32) / factorial(n);
        Self {
            orders: vec![(0, n), (1, n)],
            prefactor: Complex64::new(prefactor, 0.0),
        }
    }

    /// The heralding operator over `(u1, v1, u2, v2, u1', v1', u2', v2')`:
    /// prefactor `(−2)^{m1+m2+n1+n2} / (m1! m2! n1! n2!)`, orders `m1, m1, m2, m2, n1, n1, n2, n2`.
    pub fn heralding(m1: u32, m2: u32, n1: u32, n2: u32) -> Self {
        let total = (m1 + m2 + n1 + n2) as i32;
        let prefactor =
            (-2f64).powi(total) / (factorial(m1) * factorial(m2) * factorial(n1) * factorial(n2));
        let orders = [m1, m1, m2, m2, n1, n1, n2, n2]
            .into_iter()
            .enumerate()
            .collect();
        Self {
            orders,
            prefactor: Complex64::new(prefactor, 0.0),
        }
    }

    /// Appends plain derivatives (unit prefactor) on further variables.
    pub fn then(mut self, more: &[(usize, u32)]) -> Result<Self> {
        self.orders.extend_from_slice(more);
        Self::new(self.orders, self.prefactor)
    }

    pub fn orders(&self) -> &[(usize, u32)] {
        &self.orders
    }

    pub fn prefactor(&self) -> Complex64 {
        self.prefactor
    }

    pub fn total_order(&self) -> u32 {
        self.orders.iter().map(|&(_, k)| k).sum()
    }

    fn target(&self, dim: usize) -> Result<Vec<u32>> {
        let mut k = vec![0; dim];
        for &(v, order) in &self.orders {
            if v >= dim {
                return Err(Error::Dimension(format!(
                    "derivative on variable {v} of a {dim}-variable exponent"
                )));
            }
            k[v] = order;
        }
        Ok(k)
    }
}

/// `prefactor · ∂^k exp(exponent) |_{0}`, computed as `prefactor · Π k_i! · [u^k] exp(exponent)`.
pub fn mixed_partial_at_zero<R: Ring>(
    exponent: &GeneratingExponent<R>,
    spec: &DerivativeSpec,
) -> Result<R> {
    let k = spec.target(exponent.dim())?;
    let total = spec.total_order();
    if total > MAX_ORDER {
        return Err(Error::Dimension(format!(
            "total derivative order {total} exceeds {MAX_ORDER}"
        )));
    }
    let series = exponent.exp_without_constant(Truncation::boxed(k.clone(), total))?;
    let factorials: f64 = k.iter().map(|&ki| factorial(ki)).product();
    let scale = spec.prefactor * exponent.const_term().exp();
    Ok(series.coefficient(&k).scale(factorials) * R::from_c64(scale))
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}
