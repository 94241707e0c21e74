//! Hamiltonian dynamics for the dual structures `F*`, `G*`, `H*`.
//!
//! `λ_{A*} = A*(ω_{A*})`, `Φ_{A*} = -dλ_{A*}` is constant, and the vector
//! field solves `i_X Φ_{A*} = dH` with `(i_X Φ)_b = Σ_a X_a M[a][b]`.
//! `M` is an antisymmetric signed permutation, so `X = M ∇H`.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::forms::KForm;
use crate::integrators::{integrate, step_explicit, Method, Partition, StepperConfig, Trajectory};
use crate::linalg::solve;
use crate::poly::{rat, PolyScalar};
use crate::structure::{build_structure, IntMatrix, StructureKind, StructureTag};
use crate::tables::{dual_base_form_signs, dual_symplectic_form, expand, hamilton_system, hamiltonian_field_formula};

/// `λ_{A*}`: the dual operator applied to the `dx` factors of `ω_{A*}`.
pub fn liouville_one_form(kind: StructureKind, n: usize) -> Result<KForm> {
    let kind = kind.require_dual()?;
    let op = build_structure(kind, n)?;
    let dim = 4 * n;
    let signs = dual_base_form_signs(kind.tag);
    let mut out = KForm::zero(dim, 1)?;
    for b in 0..dim {
        let (target, s) = op.image_of_basis(b);
        let coeff = PolyScalar::var(dim, b).scale(&rat(signs[b / n] * s, 2));
        out.add_term(&[target], coeff);
    }
    Ok(out)
}

/// Matrix of `Φ_{A*}` from its coordinate expression `Σ dx_a ∧ dx_b`.
pub fn canonical_two_form(kind: StructureKind, n: usize) -> Result<IntMatrix> {
    let kind = kind.require_dual()?;
    if n < 1 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let mut m = IntMatrix::zeros(4 * n);
    for (a, b) in dual_symplectic_form(kind.tag) {
        for i in 0..n {
            m.set(a * n + i, b * n + i, 1);
            m.set(b * n + i, a * n + i, -1);
        }
    }
    Ok(m)
}

/// Pairs `(first, second)` of coordinates coupled by the form, used as the
/// split of the partitioned Euler step.
pub fn conjugate_partition(m: &IntMatrix) -> Partition {
    let mut p = Partition {
        first: Vec::new(),
        second: Vec::new(),
    };
    for a in 0..m.dim() {
        for b in a + 1..m.dim() {
            if m.get(a, b) != 0 {
                p.first.push(a);
                p.second.push(b);
            }
        }
    }
    p
}

#[derive(Debug, Clone)]
pub struct HamiltonianSystem {
    kind: StructureKind,
    n: usize,
    hamiltonian: ScalarField,
    form: IntMatrix,
}

impl HamiltonianSystem {
    pub fn new(kind: StructureKind, hamiltonian: ScalarField) -> Result<Self> {
        let kind = kind.require_dual()?;
        hamiltonian.validate()?;
        let n = hamiltonian.dim() / 4;
        Ok(Self {
            kind,
            n,
            form: canonical_two_form(kind, n)?,
            hamiltonian,
        })
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        4 * self.n
    }

    pub fn hamiltonian(&self) -> &ScalarField {
        &self.hamiltonian
    }

    pub fn form(&self) -> &IntMatrix {
        &self.form
    }

    /// Closed-form field from the coordinate table of the structure.
    pub fn vector_field(&self, x: &[f64]) -> Result<Vec<f64>> {
        let grad = self.hamiltonian.eval(x)?.gradient;
        Ok(table_field(self.kind.tag, self.n, &grad))
    }

    /// Solves `Σ_a X_a M[a][b] = ∂H/∂x_b` by LU.
    pub fn generic_field(&self, x: &[f64]) -> Result<Vec<f64>> {
        let grad = self.hamiltonian.eval(x)?.gradient;
        let mt: Vec<Vec<f64>> = self
            .form
            .transpose()
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v as f64).collect())
            .collect();
        solve(&mt, &grad, Error::SingularForm)
    }

    /// `X = M ∇H`; equal to the generic solve since `(Mᵀ)⁻¹ = M`.
    pub fn flow(&self, x: &[f64]) -> Result<Vec<f64>> {
        let grad = self.hamiltonian.eval(x)?.gradient;
        let d = self.dim();
        Ok((0..d)
            .map(|a| (0..d).map(|c| self.form.get(a, c) as f64 * grad[c]).sum())
            .collect())
    }

    /// Integrates `ẋ = X(x)`, recording `energy` (the value of `H`).
    pub fn integrate(&self, x0: &[f64], t_end: f64, cfg: &StepperConfig) -> Result<Trajectory> {
        cfg.validate()?;
        if x0.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x0.len(),
            });
        }
        let partition = (cfg.method == Method::SymplecticEuler).then(|| conjugate_partition(&self.form));
        let (times, states) = integrate(x0, t_end, cfg.dt, |x, h| {
            step_explicit(|y| self.flow(y), x, h, cfg, partition.as_ref())
        })?;
        let velocities = states.iter().map(|x| self.flow(x)).collect::<Result<Vec<_>>>()?;
        let energy = states
            .iter()
            .map(|x| self.hamiltonian.value(x))
            .collect::<Result<Vec<_>>>()?;
        let mut traj = Trajectory {
            times,
            states,
            velocities,
            ..Trajectory::default()
        };
        traj.invariants.insert("energy".into(), energy);
        Ok(traj)
    }

    /// Residuals of this structure's stated Hamilton system along `traj`.
    pub fn residuals(&self, traj: &Trajectory) -> Result<Vec<Vec<f64>>> {
        self.residuals_against(self.kind.tag, traj)
    }

    /// `ẋ_a - sign · ∂H/∂x_c` for the stated system of `tag`.
    pub fn residuals_against(&self, tag: StructureTag, traj: &Trajectory) -> Result<Vec<Vec<f64>>> {
        let stated = expand(self.n, &hamilton_system(tag));
        traj.states
            .iter()
            .zip(&traj.velocities)
            .map(|(x, v)| {
                let grad = self.hamiltonian.eval(x)?.gradient;
                let mut r = v.clone();
                for &(a, c, s) in &stated {
                    r[a] -= s as f64 * grad[c];
                }
                Ok(r)
            })
            .collect()
    }
}

fn table_field(tag: StructureTag, n: usize, grad: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 4 * n];
    for (a, c, s) in expand(n, &hamiltonian_field_formula(tag)) {
        out[a] += s as f64 * grad[c];
    }
    out
}
