//! Lagrangian dynamics for the structures `F`, `G`, `H`.
//!
//! With `P = Hess L` the 2-form `Φ_L^A = -d d_A L` has matrix `AᵀP - PA`.
//! Taking `dE_L^A` with the semispray frozen, `i_X Φ_L^A = dE_L^A` collapses
//! to `AᵀP X = ∇L`, i.e. `P ẋ = A ∇L` because `A^{-T} = A` for all three
//! structures. That canonical form is what gets integrated; the stated
//! Euler-Lagrange tables are only compared against it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{EvalResult, ScalarField};
use crate::forms::{form_to_matrix_f64, lagrangian_two_form, KForm};
use crate::integrators::{integrate, step_implicit_mass, Method, StepperConfig, Trajectory};
use crate::linalg::{dot, mat_vec, solve, Factorized};
use crate::structure::{build_structure, StructureKind, StructureOperator};
use crate::tables::{euler_lagrange_system, expand};

/// Which equations the residuals are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `P ẋ - A ∇L`.
    #[default]
    Derived,
    /// The stated Euler-Lagrange tables in [`crate::tables`].
    Printed,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Derived => "derived",
            Convention::Printed => "printed",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "derived" => Ok(Convention::Derived),
            "printed" => Ok(Convention::Printed),
            _ => Err(Error::InvalidArgument(format!("unknown convention `{s}`"))),
        }
    }
}

/// `V_A = A X`.
pub fn liouville_field(op: &StructureOperator, x: &[f64]) -> Vec<f64> {
    op.apply_f64(x)
}

#[derive(Debug, Clone)]
pub struct LagrangianSystem {
    op: StructureOperator,
    lagrangian: ScalarField,
    convention: Convention,
    // symbolic Φ_L^A when L is a polynomial
    two_form: Option<KForm>,
}

impl LagrangianSystem {
    pub fn new(kind: StructureKind, lagrangian: ScalarField, convention: Convention) -> Result<Self> {
        let kind = kind.require_tangent()?;
        lagrangian.validate()?;
        let op = build_structure(kind, lagrangian.dim() / 4)?;
        let two_form = lagrangian
            .as_polynomial()
            .map(|p| lagrangian_two_form(kind, p))
            .transpose()?;
        Ok(Self {
            op,
            lagrangian,
            convention,
            two_form,
        })
    }

    pub fn kind(&self) -> StructureKind {
        self.op.kind
    }

    pub fn n(&self) -> usize {
        self.op.n
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn lagrangian(&self) -> &ScalarField {
        &self.lagrangian
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn structure(&self) -> &StructureOperator {
        &self.op
    }

    fn eval(&self, x: &[f64]) -> Result<EvalResult> {
        self.lagrangian.eval(x)
    }

    /// `E_L^A = (A X)·∇L - L`.
    pub fn energy(&self, x: &[f64], semispray: &[f64]) -> Result<f64> {
        let e = self.eval(x)?;
        Ok(dot(&liouville_field(&self.op, semispray), &e.gradient) - e.value)
    }

    /// Solves `P ẋ = A ∇L`.
    pub fn canonical_rhs(&self, x: &[f64]) -> Result<Vec<f64>> {
        let e = self.eval(x)?;
        solve(
            &e.hessian,
            &self.op.apply_f64(&e.gradient),
            Error::SingularHessian { time: None },
        )
    }

    /// Matrix of `Φ_L^A` at `x`: symbolic for polynomial `L`, else `AᵀP - PA`.
    pub fn form_matrix(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        match &self.two_form {
            Some(form) => form_to_matrix_f64(form, x),
            None => Ok(commutator_matrix(&self.op, &self.eval(x)?.hessian)),
        }
    }

    /// Solves `i_X Φ_L^A = dE_L^A` directly, with `dE = P A X - ∇L`.
    pub fn intrinsic_solve(&self, x: &[f64]) -> Result<Vec<f64>> {
        let omega = self.form_matrix(x)?;
        if Factorized::new(&omega).is_none() {
            return Err(Error::SingularForm);
        }
        let e = self.eval(x)?;
        let d = self.dim();
        let pa = right_apply(&e.hessian, &self.op);
        // (i_X Ω)_b = Σ_a X_a Ω[a][b], so the unknown meets Ωᵀ.
        let system: Vec<Vec<f64>> = (0..d)
            .map(|b| (0..d).map(|a| omega[a][b] - pa[b][a]).collect())
            .collect();
        let rhs: Vec<f64> = e.gradient.iter().map(|g| -g).collect();
        solve(&system, &rhs, Error::SingularForm)
    }

    /// Integrates `P ẋ = A ∇L`, recording `energy` per sample.
    pub fn integrate(&self, x0: &[f64], t_end: f64, cfg: &StepperConfig) -> Result<Trajectory> {
        cfg.validate()?;
        if x0.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x0.len(),
            });
        }
        if cfg.method == Method::SymplecticEuler {
            return Err(Error::InvalidArgument(
                "Lagrangian systems integrate with rk4 or implicit_midpoint".into(),
            ));
        }
        let sys = |y: &[f64]| -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
            let e = self.eval(y)?;
            let b = self.op.apply_f64(&e.gradient);
            Ok((e.hessian, b))
        };
        let (times, states) = integrate(x0, t_end, cfg.dt, |x, h| step_implicit_mass(sys, x, h, cfg))?;
        let mut velocities = Vec::with_capacity(states.len());
        let mut energy = Vec::with_capacity(states.len());
        for (t, x) in times.iter().zip(&states) {
            let v = self.canonical_rhs(x).map_err(|e| with_time(e, *t))?;
            energy.push(self.energy(x, &v)?);
            velocities.push(v);
        }
        let mut traj = Trajectory {
            times,
            states,
            velocities,
            ..Trajectory::default()
        };
        traj.invariants.insert("energy".into(), energy);
        Ok(traj)
    }

    /// Residuals along `traj` under this system's convention.
    pub fn residuals(&self, traj: &Trajectory) -> Result<Vec<Vec<f64>>> {
        self.residuals_with(traj, self.convention)
    }

    /// `d/dt ∂L/∂x_a = (P ẋ)_a` by the chain rule, compared with either
    /// `(A ∇L)_a` or the stated table `sign · ∂L/∂x_c`.
    pub fn residuals_with(&self, traj: &Trajectory, convention: Convention) -> Result<Vec<Vec<f64>>> {
        let stated = expand(self.n(), &euler_lagrange_system(self.kind().tag));
        traj.states
            .iter()
            .zip(&traj.velocities)
            .map(|(x, v)| {
                let e = self.eval(x)?;
                let dt_grad = mat_vec(&e.hessian, v);
                Ok(match convention {
                    Convention::Derived => {
                        let ag = self.op.apply_f64(&e.gradient);
                        dt_grad.iter().zip(&ag).map(|(a, b)| a - b).collect()
                    }
                    Convention::Printed => {
                        let mut r = dt_grad;
                        for &(a, c, s) in &stated {
                            r[a] -= s as f64 * e.gradient[c];
                        }
                        r
                    }
                })
            })
            .collect()
    }
}

fn with_time(e: Error, t: f64) -> Error {
    match e {
        Error::SingularHessian { time: None } => Error::SingularHessian { time: Some(t) },
        other => other,
    }
}

/// `P A`.
fn right_apply(p: &[Vec<f64>], op: &StructureOperator) -> Vec<Vec<f64>> {
    let d = op.dim();
    (0..d)
        .map(|r| {
            (0..d)
                .map(|c| (0..d).map(|k| p[r][k] * op.matrix.get(k, c) as f64).sum())
                .collect()
        })
        .collect()
}

/// `AᵀP - PA`.
pub fn commutator_matrix(op: &StructureOperator, p: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = op.dim();
    let pa = right_apply(p, op);
    // AᵀP = (PA)ᵀ since P is symmetric
    (0..d).map(|r| (0..d).map(|c| pa[c][r] - pa[r][c]).collect()).collect()
}
