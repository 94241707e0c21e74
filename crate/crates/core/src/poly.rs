//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Exponent vector of a monomial, one entry per coordinate.
pub type Exponents = Vec<u32>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact conversion of a finite `f64` to a rational.
pub fn rat_from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::InvalidArgument(format!("non-finite value {v}")))
}

pub fn rat_to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Polynomial in `nvars` coordinates. Zero coefficients are never stored and
/// terms are kept in lexicographic exponent order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyScalar {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl PolyScalar {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_k` (0-based).
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exponents: Exponents, c: Rational) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// `½ Σ_a x_a²`.
    pub fn half_sum_of_squares(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        for k in 0..nvars {
            let mut e = vec![0; nvars];
            e[k] = 2;
            p.add_term(e, rat(1, 2));
        }
        p
    }

    /// `½ xᵀ P x` for a symmetric rational matrix `P`.
    pub fn quadratic_form(p: &[Vec<Rational>]) -> Self {
        let nvars = p.len();
        let mut out = Self::zero(nvars);
        for a in 0..nvars {
            for b in 0..nvars {
                if p[a][b].is_zero() {
                    continue;
                }
                let mut e = vec![0; nvars];
                e[a] += 1;
                e[b] += 1;
                out.add_term(e, p[a][b].clone() * rat(1, 2));
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exponents: Exponents, c: Rational) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// `∂/∂x_k`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[k] -= 1;
            out.add_term(e2, c * rat_int(i64::from(e[k])));
        }
        out
    }

    pub fn gradient(&self) -> Vec<PolyScalar> {
        (0..self.nvars).map(|k| self.derivative(k)).collect()
    }

    pub fn hessian(&self) -> Vec<Vec<PolyScalar>> {
        let grad = self.gradient();
        grad.iter()
            .map(|g| (0..self.nvars).map(|k| g.derivative(k)).collect())
            .collect()
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &p) in point.iter().zip(e) {
                if p > 0 {
                    term *= num_traits::pow(x.clone(), p as usize);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut term = rat_to_f64(c);
                for (x, &p) in point.iter().zip(e) {
                    if p > 0 {
                        term *= x.powi(p as i32);
                    }
                }
                term
            })
            .sum()
    }

    fn check_same_space(&self, other: &Self) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials live in different coordinate spaces"
        );
    }
}

impl Add for &PolyScalar {
    type Output = PolyScalar;
    fn add(self, other: &PolyScalar) -> PolyScalar {
        self.check_same_space(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PolyScalar {
    type Output = PolyScalar;
    fn sub(self, other: &PolyScalar) -> PolyScalar {
        self.check_same_space(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &PolyScalar {
    type Output = PolyScalar;
    fn neg(self) -> PolyScalar {
        self.scale(&-Rational::one())
    }
}

// multiplying monomials adds exponents
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &PolyScalar {
    type Output = PolyScalar;
    fn mul(self, other: &PolyScalar) -> PolyScalar {
        self.check_same_space(other);
        let mut out = PolyScalar::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            let mag = c.abs();
            let is_const = e.iter().all(|&p| p == 0);
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
            }
            let mut first = mag.is_one();
            for (var, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{}", var + 1)?;
                if p > 1 {
                    write!(f, "^{p}")?;
                }
            }
        }
        Ok(())
    }
}
