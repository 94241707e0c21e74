//! Scalar fields `R^{4n} → R` with value, gradient and Hessian.
//!
//! Polynomial fields differentiate their exact coefficients; the built-in
//! fields carry closed-form derivatives. Every field can also be evaluated
//! through hyper-dual numbers ([`ScalarField::eval_autodiff`]), which is the
//! uniform fallback and the cross-check for the closed forms.
//!
//! Fields are functions of the coordinates only. The kinetic energy
//! `½ Σ m_i (x_i² + x_{n+i}² + x_{2n+i}² + x_{3n+i}²)` is the same quadratic
//! form read on coordinates, and the height in the potential energy defaults
//! to the Euclidean distance to the origin (not the neutral metric).

use std::sync::Arc;

use crate::dual::{value_gradient_hessian, HyperDual, Real};
use crate::error::{Error, Result};
use crate::poly::{rat_to_f64, PolyScalar};

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
}

/// A polynomial with its derivative polynomials computed once.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyField {
    poly: PolyScalar,
    gradient: Vec<PolyScalar>,
    hessian: Vec<Vec<PolyScalar>>,
    // (coefficient, exponents) pairs for the generic evaluator
    float_terms: Vec<(f64, Vec<u32>)>,
}

impl PolyField {
    pub fn new(poly: PolyScalar) -> Self {
        let gradient = poly.gradient();
        let hessian = poly.hessian();
        let float_terms = poly.terms().map(|(e, c)| (rat_to_f64(c), e.clone())).collect();
        Self {
            poly,
            gradient,
            hessian,
            float_terms,
        }
    }

    pub fn poly(&self) -> &PolyScalar {
        &self.poly
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField {
    Polynomial(Arc<PolyField>),
    Constant {
        dim: usize,
        value: f64,
    },
    /// `½ Σ_a x_a²`.
    Harmonic {
        dim: usize,
    },
    /// `½ Σ_i m_i (x_i² + x_{n+i}² + x_{2n+i}² + x_{3n+i}²)`, `n = masses.len()`.
    Kinetic {
        masses: Vec<f64>,
    },
    /// Euclidean distance to the origin; singular at 0.
    Distance {
        dim: usize,
    },
    /// `(Σ_i m_i) · g · h(x)`.
    Potential {
        masses: Vec<f64>,
        g_const: f64,
        height: Box<ScalarField>,
    },
    Sum(Vec<ScalarField>),
    Scale(f64, Box<ScalarField>),
}

impl ScalarField {
    pub fn polynomial(p: PolyScalar) -> Self {
        ScalarField::Polynomial(Arc::new(PolyField::new(p)))
    }

    pub fn harmonic(dim: usize) -> Self {
        ScalarField::Harmonic { dim }
    }

    pub fn kinetic(masses: Vec<f64>) -> Result<Self> {
        check_masses(&masses)?;
        Ok(ScalarField::Kinetic { masses })
    }

    /// `m g ‖x‖` summed over the masses.
    pub fn potential(masses: Vec<f64>, g_const: f64) -> Result<Self> {
        check_masses(&masses)?;
        let dim = 4 * masses.len();
        Ok(ScalarField::Potential {
            masses,
            g_const,
            height: Box::new(ScalarField::Distance { dim }),
        })
    }

    /// `T - P` with the built-in kinetic and distance potential.
    pub fn kinetic_minus_potential(masses: Vec<f64>, g_const: f64) -> Result<Self> {
        Ok(lagrangian_from_tp(
            ScalarField::kinetic(masses.clone())?,
            ScalarField::potential(masses, g_const)?,
        ))
    }

    pub fn dim(&self) -> usize {
        match self {
            ScalarField::Polynomial(p) => p.poly.nvars(),
            ScalarField::Constant { dim, .. } | ScalarField::Harmonic { dim } | ScalarField::Distance { dim } => *dim,
            ScalarField::Kinetic { masses } => 4 * masses.len(),
            ScalarField::Potential { height, .. } => height.dim(),
            ScalarField::Sum(parts) => parts.first().map_or(0, ScalarField::dim),
            ScalarField::Scale(_, inner) => inner.dim(),
        }
    }

    /// The polynomial behind the field, if it is one.
    pub fn as_polynomial(&self) -> Option<&PolyScalar> {
        match self {
            ScalarField::Polynomial(p) => Some(&p.poly),
            _ => None,
        }
    }

    /// Checks that every part of a composite field has the same dimension.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 || !dim.is_multiple_of(4) {
            return Err(Error::InvalidArgument(format!(
                "field dimension {dim} is not a positive multiple of 4"
            )));
        }
        match self {
            ScalarField::Sum(parts) => {
                for p in parts {
                    if p.dim() != dim {
                        return Err(Error::DimensionMismatch {
                            expected: dim,
                            got: p.dim(),
                        });
                    }
                    p.validate()?;
                }
                Ok(())
            }
            ScalarField::Scale(_, inner) => inner.validate(),
            ScalarField::Potential { masses, height, .. } => {
                check_masses(masses)?;
                if 4 * masses.len() != height.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: 4 * masses.len(),
                        got: height.dim(),
                    });
                }
                height.validate()
            }
            ScalarField::Kinetic { masses } => check_masses(masses),
            _ => Ok(()),
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        self.eval_real(x)
    }

    /// Value, gradient and Hessian from the closed forms.
    pub fn eval(&self, x: &[f64]) -> Result<EvalResult> {
        self.check_point(x)?;
        self.eval_closed(x)
    }

    fn eval_closed(&self, x: &[f64]) -> Result<EvalResult> {
        let dim = x.len();
        match self {
            ScalarField::Polynomial(p) => Ok(EvalResult {
                value: p.poly.eval_f64(x),
                gradient: p.gradient.iter().map(|g| g.eval_f64(x)).collect(),
                hessian: p
                    .hessian
                    .iter()
                    .map(|row| row.iter().map(|h| h.eval_f64(x)).collect())
                    .collect(),
            }),
            ScalarField::Constant { value, .. } => Ok(EvalResult {
                value: *value,
                gradient: vec![0.0; dim],
                hessian: vec![vec![0.0; dim]; dim],
            }),
            ScalarField::Harmonic { .. } => Ok(EvalResult {
                value: 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
                gradient: x.to_vec(),
                hessian: identity(dim, |_| 1.0),
            }),
            ScalarField::Kinetic { masses } => {
                let n = masses.len();
                let m = |a: usize| masses[a % n];
                Ok(EvalResult {
                    value: 0.5 * x.iter().enumerate().map(|(a, v)| m(a) * v * v).sum::<f64>(),
                    gradient: x.iter().enumerate().map(|(a, v)| m(a) * v).collect(),
                    hessian: identity(dim, m),
                })
            }
            ScalarField::Distance { .. } => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if r == 0.0 {
                    return Err(Error::SingularPoint {
                        field: "distance".into(),
                    });
                }
                let hessian = (0..dim)
                    .map(|a| {
                        (0..dim)
                            .map(|b| {
                                let delta = if a == b { 1.0 } else { 0.0 };
                                (delta - x[a] * x[b] / (r * r)) / r
                            })
                            .collect()
                    })
                    .collect();
                Ok(EvalResult {
                    value: r,
                    gradient: x.iter().map(|v| v / r).collect(),
                    hessian,
                })
            }
            ScalarField::Potential {
                masses,
                g_const,
                height,
            } => {
                let k = masses.iter().sum::<f64>() * g_const;
                Ok(scaled(height.eval_closed(x)?, k))
            }
            ScalarField::Sum(parts) => {
                let mut acc = EvalResult {
                    value: 0.0,
                    gradient: vec![0.0; dim],
                    hessian: vec![vec![0.0; dim]; dim],
                };
                for p in parts {
                    let r = p.eval_closed(x)?;
                    acc.value += r.value;
                    for a in 0..dim {
                        acc.gradient[a] += r.gradient[a];
                        for b in 0..dim {
                            acc.hessian[a][b] += r.hessian[a][b];
                        }
                    }
                }
                Ok(acc)
            }
            ScalarField::Scale(c, inner) => Ok(scaled(inner.eval_closed(x)?, *c)),
        }
    }

    /// Value, gradient and Hessian through hyper-dual forward differentiation.
    pub fn eval_autodiff(&self, x: &[f64]) -> Result<EvalResult> {
        self.check_point(x)?;
        let (value, gradient, hessian) = value_gradient_hessian(x.len(), x, |v: &[HyperDual]| self.eval_real(v))?;
        Ok(EvalResult {
            value,
            gradient,
            hessian,
        })
    }

    /// Generic evaluation used by both `f64` and hyper-dual paths.
    pub fn eval_real<R: Real>(&self, x: &[R]) -> Result<R> {
        match self {
            ScalarField::Polynomial(p) => {
                let mut acc = R::constant(0.0);
                for (c, e) in &p.float_terms {
                    let mut term = R::constant(*c);
                    for (v, &k) in x.iter().zip(e) {
                        if k > 0 {
                            term = term * v.powi(k as i32);
                        }
                    }
                    acc = acc + term;
                }
                Ok(acc)
            }
            ScalarField::Constant { value, .. } => Ok(R::constant(*value)),
            ScalarField::Harmonic { .. } => Ok(R::constant(0.5) * sum_sq(x, |_| 1.0)),
            ScalarField::Kinetic { masses } => {
                let n = masses.len();
                Ok(R::constant(0.5) * sum_sq(x, |a| masses[a % n]))
            }
            ScalarField::Distance { .. } => {
                let r2 = sum_sq(x, |_| 1.0);
                if r2.value() == 0.0 {
                    return Err(Error::SingularPoint {
                        field: "distance".into(),
                    });
                }
                Ok(r2.sqrt())
            }
            ScalarField::Potential {
                masses,
                g_const,
                height,
            } => Ok(R::constant(masses.iter().sum::<f64>() * g_const) * height.eval_real(x)?),
            ScalarField::Sum(parts) => parts
                .iter()
                .try_fold(R::constant(0.0), |acc, p| Ok(acc + p.eval_real(x)?)),
            ScalarField::Scale(c, inner) => Ok(R::constant(*c) * inner.eval_real(x)?),
        }
    }
}

fn sum_sq<R: Real>(x: &[R], weight: impl Fn(usize) -> f64) -> R {
    x.iter()
        .enumerate()
        .fold(R::constant(0.0), |acc, (a, &v)| acc + R::constant(weight(a)) * v * v)
}

fn identity(dim: usize, diag: impl Fn(usize) -> f64) -> Vec<Vec<f64>> {
    (0..dim)
        .map(|a| (0..dim).map(|b| if a == b { diag(a) } else { 0.0 }).collect())
        .collect()
}

fn scaled(mut r: EvalResult, c: f64) -> EvalResult {
    r.value *= c;
    r.gradient.iter_mut().for_each(|g| *g *= c);
    r.hessian.iter_mut().flatten().for_each(|h| *h *= c);
    r
}

fn check_masses(masses: &[f64]) -> Result<()> {
    if masses.is_empty() {
        return Err(Error::InvalidArgument("at least one mass is required".into()));
    }
    if let Some(m) = masses.iter().find(|m| !m.is_finite() || **m <= 0.0) {
        return Err(Error::InvalidArgument(format!("mass {m} is not positive")));
    }
    Ok(())
}

/// Value, gradient and Hessian of `f` at `x`.
pub fn eval_field(f: &ScalarField, x: &[f64]) -> Result<EvalResult> {
    f.eval(x)
}

/// `T = ½ Σ_i m_i (v_i² + v_{n+i}² + v_{2n+i}² + v_{3n+i}²)`.
pub fn kinetic_energy(masses: &[f64], v: &[f64]) -> Result<f64> {
    check_masses(masses)?;
    if v.len() != 4 * masses.len() {
        return Err(Error::DimensionMismatch {
            expected: 4 * masses.len(),
            got: v.len(),
        });
    }
    ScalarField::Kinetic {
        masses: masses.to_vec(),
    }
    .value(v)
}

/// `P = Σ_i m_i g h(x)`; `h` defaults to the Euclidean distance to the origin.
pub fn potential_energy(masses: &[f64], g_const: f64, height: Option<&ScalarField>, x: &[f64]) -> Result<f64> {
    check_masses(masses)?;
    let h = match height {
        Some(h) => h.value(x)?,
        None => ScalarField::Distance { dim: x.len() }.value(x)?,
    };
    Ok(masses.iter().sum::<f64>() * g_const * h)
}

/// `L = T - P`.
pub fn lagrangian_from_tp(t: ScalarField, p: ScalarField) -> ScalarField {
    ScalarField::Sum(vec![t, ScalarField::Scale(-1.0, Box::new(p))])
}
