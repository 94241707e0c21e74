//! Hyper-dual numbers `a + b ε₁ + c ε₂ + d ε₁ε₂` with `ε₁² = ε₂² = 0`.
//!
//! Seeding `ε₁` along `e_j` and `ε₂` along `e_k` gives `f`, `∂_j f`, `∂_k f`
//! and `∂_j ∂_k f` in one evaluation, with no truncation error.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed by the built-in scalar fields.
pub trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(v: f64) -> Self;
    fn value(self) -> f64;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;
}

impl Real for f64 {
    fn constant(v: f64) -> Self {
        v
    }
    fn value(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperDual {
    pub re: f64,
    pub e1: f64,
    pub e2: f64,
    pub e12: f64,
}

impl HyperDual {
    pub const fn new(re: f64, e1: f64, e2: f64, e12: f64) -> Self {
        Self { re, e1, e2, e12 }
    }

    /// `f(x) = φ(x)` lifted with `φ'` and `φ''` at the real part.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            re: f0,
            e1: f1 * self.e1,
            e2: f1 * self.e2,
            e12: f1 * self.e12 + f2 * self.e1 * self.e2,
        }
    }
}

impl Add for HyperDual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.e1 + o.e1, self.e2 + o.e2, self.e12 + o.e12)
    }
}

impl Sub for HyperDual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.e1 - o.e1, self.e2 - o.e2, self.e12 - o.e12)
    }
}

impl Mul for HyperDual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re,
            self.re * o.e1 + self.e1 * o.re,
            self.re * o.e2 + self.e2 * o.re,
            self.re * o.e12 + self.e1 * o.e2 + self.e2 * o.e1 + self.e12 * o.re,
        )
    }
}

impl Div for HyperDual {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = 1.0 / o.re;
        let recip = o.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
        self * recip
    }
}

impl Neg for HyperDual {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.e1, -self.e2, -self.e12)
    }
}

impl Real for HyperDual {
    fn constant(v: f64) -> Self {
        Self::new(v, 0.0, 0.0, 0.0)
    }
    fn value(self) -> f64 {
        self.re
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.re))
    }
    fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            1 => self,
            _ => {
                let nf = f64::from(n);
                self.chain(
                    self.re.powi(n),
                    nf * self.re.powi(n - 1),
                    nf * (nf - 1.0) * self.re.powi(n - 2),
                )
            }
        }
    }
}

/// `(value, gradient, Hessian)`.
pub type Derivatives = (f64, Vec<f64>, Vec<Vec<f64>>);

/// Value, gradient and Hessian of `f` by `d(d+1)/2` hyper-dual evaluations.
pub fn value_gradient_hessian<E>(
    dim: usize,
    x: &[f64],
    mut f: impl FnMut(&[HyperDual]) -> Result<HyperDual, E>,
) -> Result<Derivatives, E> {
    let mut grad = vec![0.0; dim];
    let mut hess = vec![vec![0.0; dim]; dim];
    let mut value = 0.0;
    let mut seeded: Vec<HyperDual> = x.iter().map(|&v| HyperDual::constant(v)).collect();
    for j in 0..dim {
        for k in j..dim {
            seeded[j].e1 = 1.0;
            seeded[k].e2 = 1.0;
            let out = f(&seeded)?;
            seeded[j].e1 = 0.0;
            seeded[k].e2 = 0.0;
            if j == k {
                grad[j] = out.e1;
                value = out.re;
            }
            hess[j][k] = out.e12;
            hess[k][j] = out.e12;
        }
    }
    Ok((value, grad, hess))
}
