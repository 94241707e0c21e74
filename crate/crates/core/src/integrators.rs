//! Fixed-step integrators for `ẋ = f(x)` and for linearly implicit systems
//! `M(x) ẋ = b(x)`.
//!
//! The implicit midpoint stage is solved by fixed-point iteration; for the
//! mass-matrix form the factorisation of `M(x_n)` is frozen for the step and
//! reused as the iteration's preconditioner.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{mat_vec, norm_inf, Factorized};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Rk4,
    SymplecticEuler,
    ImplicitMidpoint,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Rk4, Method::SymplecticEuler, Method::ImplicitMidpoint];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::SymplecticEuler => "symplectic_euler",
            Method::ImplicitMidpoint => "implicit_midpoint",
        }
    }

    /// Nominal order of accuracy.
    pub fn order(self) -> u32 {
        match self {
            Method::Rk4 => 4,
            Method::SymplecticEuler => 1,
            Method::ImplicitMidpoint => 2,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub method: Method,
    pub dt: f64,
    pub newton_tol: f64,
    pub newton_max_iters: usize,
}

impl StepperConfig {
    pub fn new(method: Method, dt: f64) -> Result<Self> {
        let cfg = Self {
            method,
            dt,
            newton_tol: 1e-12,
            newton_max_iters: 50,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if self.newton_tol.is_nan() || self.newton_tol <= 0.0 || self.newton_max_iters == 0 {
            return Err(Error::InvalidArgument(
                "implicit-stage tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Sampled solution. `velocities[k]` is the vector field at `states[k]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    pub invariants: BTreeMap<String, Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&[f64]> {
        self.states.last().map(Vec::as_slice)
    }

    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.invariants.get(name).map(Vec::as_slice)
    }

    /// `max_k |s_k - s_0|` of a recorded series.
    pub fn drift(&self, name: &str) -> Option<f64> {
        let s = self.series(name)?;
        let first = *s.first()?;
        Some(s.iter().map(|v| (v - first).abs()).fold(0.0, f64::max))
    }
}

/// Components updated first and second by the partitioned Euler step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl Partition {
    pub fn halves(dim: usize) -> Self {
        Self {
            first: (0..dim / 2).collect(),
            second: (dim / 2..dim).collect(),
        }
    }
}

fn axpy(x: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn converged(increment: f64, h: f64, x: &[f64], tol: f64) -> bool {
    h * increment <= tol * (1.0 + norm_inf(x))
}

/// One step of `ẋ = f(x)`.
pub fn step_explicit<F>(
    mut f: F,
    x: &[f64],
    h: f64,
    cfg: &StepperConfig,
    partition: Option<&Partition>,
) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    match cfg.method {
        Method::Rk4 => {
            let k1 = f(x)?;
            let k2 = f(&axpy(x, 0.5 * h, &k1))?;
            let k3 = f(&axpy(x, 0.5 * h, &k2))?;
            let k4 = f(&axpy(x, h, &k3))?;
            Ok((0..x.len())
                .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                .collect())
        }
        Method::SymplecticEuler => {
            let halves;
            let p = match partition {
                Some(p) => p,
                None => {
                    halves = Partition::halves(x.len());
                    &halves
                }
            };
            let mut y = x.to_vec();
            let k = f(&y)?;
            for &i in &p.first {
                y[i] += h * k[i];
            }
            let k = f(&y)?;
            for &i in &p.second {
                y[i] += h * k[i];
            }
            Ok(y)
        }
        Method::ImplicitMidpoint => {
            let mut k = f(x)?;
            let mut increment = f64::INFINITY;
            for _ in 0..cfg.newton_max_iters {
                let next = f(&axpy(x, 0.5 * h, &k))?;
                increment = next.iter().zip(&k).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                k = next;
                if converged(increment, h, x, cfg.newton_tol) {
                    return Ok(axpy(x, h, &k));
                }
            }
            Err(Error::NonConvergence {
                iterations: cfg.newton_max_iters,
                increment: h * increment,
            })
        }
    }
}

/// One step of `M(x) ẋ = b(x)`; `sys` returns `(M(x), b(x))`.
///
/// A singular `M` is reported as [`Error::SingularHessian`] without a time;
/// [`integrate`] fills the time in.
pub fn step_implicit_mass<F>(mut sys: F, x: &[f64], h: f64, cfg: &StepperConfig) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<(Vec<Vec<f64>>, Vec<f64>)>,
{
    let singular = || Error::SingularHessian { time: None };
    match cfg.method {
        Method::Rk4 => {
            let mut rhs = |y: &[f64]| -> Result<Vec<f64>> {
                let (m, b) = sys(y)?;
                Ok(Factorized::new(&m).ok_or_else(singular)?.solve(&b))
            };
            step_explicit(&mut rhs, x, h, cfg, None)
        }
        Method::SymplecticEuler => Err(Error::InvalidArgument(
            "symplectic_euler is not available for mass-matrix systems".into(),
        )),
        Method::ImplicitMidpoint => {
            let (m0, b0) = sys(x)?;
            let lu = Factorized::new(&m0).ok_or_else(singular)?;
            let mut k = lu.solve(&b0);
            let mut increment = f64::INFINITY;
            for _ in 0..cfg.newton_max_iters {
                let (m, b) = sys(&axpy(x, 0.5 * h, &k))?;
                let mk = mat_vec(&m, &k);
                let r: Vec<f64> = b.iter().zip(&mk).map(|(a, c)| a - c).collect();
                let delta = lu.solve(&r);
                increment = norm_inf(&delta);
                k.iter_mut().zip(&delta).for_each(|(a, d)| *a += d);
                if converged(increment, h, x, cfg.newton_tol) {
                    return Ok(axpy(x, h, &k));
                }
            }
            Err(Error::NonConvergence {
                iterations: cfg.newton_max_iters,
                increment: h * increment,
            })
        }
    }
}

/// Times `0, dt, 2dt, …, t_end`; the last step is shortened to land on `t_end`.
pub fn time_grid(t_end: f64, dt: f64) -> Result<Vec<f64>> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "t_end must be nonnegative, got {t_end}"
        )));
    }
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let full = (t_end / dt * (1.0 - 1e-12)).floor() as usize;
    let mut times: Vec<f64> = (0..=full).map(|k| k as f64 * dt).collect();
    if t_end - times[full] > 1e-12 * t_end.max(1.0) {
        times.push(t_end);
    } else {
        times[full] = t_end;
    }
    Ok(times)
}

/// Runs `step(x, h)` over the time grid and returns `(times, states)`.
pub fn integrate<F>(x0: &[f64], t_end: f64, dt: f64, mut step: F) -> Result<(Vec<f64>, Vec<Vec<f64>>)>
where
    F: FnMut(&[f64], f64) -> Result<Vec<f64>>,
{
    let times = time_grid(t_end, dt)?;
    let mut states = Vec::with_capacity(times.len());
    states.push(x0.to_vec());
    for w in times.windows(2) {
        let x = states.last().expect("nonempty");
        let next = step(x, w[1] - w[0]).map_err(|e| match e {
            Error::SingularHessian { time: None } => Error::SingularHessian { time: Some(w[0]) },
            other => other,
        })?;
        states.push(next);
    }
    Ok((times, states))
}
