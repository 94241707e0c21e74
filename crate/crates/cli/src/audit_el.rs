//! Equation-by-equation comparison of the stated coordinate systems with the
//! ones derived from the structure matrices, measured along a run.

use std::fmt::Write as _;

use paramech_core::audit::max_abs;
use paramech_core::hamiltonian::canonical_two_form;
use paramech_core::structure::{build_structure, IntMatrix};
use paramech_core::tables::{euler_lagrange_system, expand, hamilton_system};
use paramech_core::{Convention, HamiltonianSystem, LagrangianSystem, StepperConfig};

use crate::error::CliError;
use crate::run::RESIDUAL_TOL;
use crate::scenario::{Formalism, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct EquationAudit {
    /// 0-based coordinate index of the equation.
    pub index: usize,
    pub stated: Vec<(usize, i64)>,
    pub derived: Vec<(usize, i64)>,
    pub stated_residual: f64,
    pub derived_residual: f64,
}

impl EquationAudit {
    pub fn symbolic_match(&self) -> bool {
        self.stated == self.derived
    }
}

#[derive(Debug, Clone)]
pub struct ElAudit {
    pub formalism: Formalism,
    pub label: String,
    pub equations: Vec<EquationAudit>,
}

impl ElAudit {
    pub fn mismatches(&self) -> usize {
        self.equations.iter().filter(|e| !e.symbolic_match()).count()
    }

    pub fn render(&self) -> String {
        let (lhs, f) = match self.formalism {
            Formalism::Lagrangian => ("d/dt ∂L/∂x", "L"),
            Formalism::Hamiltonian => ("dx/dt", "H"),
        };
        let mut out = format!("{} {}\n", self.formalism, self.label);
        for e in &self.equations {
            let k = e.index + 1;
            let verdict = if e.symbolic_match() { "agree" } else { "DIFFER" };
            let _ = writeln!(
                out,
                "{verdict}: {lhs}_{k}  stated {}  derived {}  max|res| stated {:.3e} derived {:.3e}",
                terms(&e.stated, f),
                terms(&e.derived, f),
                e.stated_residual,
                e.derived_residual,
            );
        }
        let _ = writeln!(
            out,
            "summary: {} of {} equations differ",
            self.mismatches(),
            self.equations.len()
        );
        out
    }
}

fn terms(t: &[(usize, i64)], f: &str) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter()
        .map(|&(c, s)| format!("{}∂{f}/∂x_{}", if s < 0 { "-" } else { "+" }, c + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn rows_of(m: &IntMatrix) -> Vec<Vec<(usize, i64)>> {
    (0..m.dim())
        .map(|a| {
            (0..m.dim())
                .filter(|&c| m.get(a, c) != 0)
                .map(|c| (c, m.get(a, c)))
                .collect()
        })
        .collect()
}

fn rows_of_table(dim: usize, entries: &[(usize, usize, i64)]) -> Vec<Vec<(usize, i64)>> {
    let mut rows = vec![Vec::new(); dim];
    for &(a, c, s) in entries {
        rows[a].push((c, s));
    }
    for r in &mut rows {
        r.sort_unstable();
    }
    rows
}

fn column_max(series: &[Vec<f64>], k: usize) -> f64 {
    series.iter().map(|r| r[k].abs()).fold(0.0, f64::max)
}

pub fn audit_scenario(s: &Scenario) -> Result<ElAudit, CliError> {
    let cfg = StepperConfig::new(s.method, s.dt)?;
    let kind = s.kind();
    let (n, dim) = (s.n, s.dim());
    let field = s.field()?;
    let (stated_rows, derived_rows, stated_res, derived_res) = match s.formalism {
        Formalism::Lagrangian => {
            let sys = LagrangianSystem::new(kind, field, Convention::Derived)?;
            let traj = sys.integrate(&s.x0, s.t_end, &cfg)?;
            (
                rows_of_table(dim, &expand(n, &euler_lagrange_system(kind.tag))),
                rows_of(&build_structure(kind, n)?.matrix),
                sys.residuals_with(&traj, Convention::Printed)?,
                sys.residuals_with(&traj, Convention::Derived)?,
            )
        }
        Formalism::Hamiltonian => {
            let sys = HamiltonianSystem::new(kind, field)?;
            let traj = sys.integrate(&s.x0, s.t_end, &cfg)?;
            let derived: Vec<Vec<f64>> = traj
                .states
                .iter()
                .zip(&traj.velocities)
                .map(|(x, v)| Ok(sys.flow(x)?.iter().zip(v).map(|(f, v)| v - f).collect()))
                .collect::<paramech_core::Result<_>>()?;
            (
                rows_of_table(dim, &expand(n, &hamilton_system(kind.tag))),
                rows_of(&canonical_two_form(kind, n)?),
                sys.residuals(&traj)?,
                derived,
            )
        }
    };
    debug_assert!(max_abs(&derived_res).is_finite());
    let equations = (0..dim)
        .map(|a| EquationAudit {
            index: a,
            stated: stated_rows[a].clone(),
            derived: derived_rows[a].clone(),
            stated_residual: column_max(&stated_res, a),
            derived_residual: column_max(&derived_res, a),
        })
        .collect();
    Ok(ElAudit {
        formalism: s.formalism,
        label: format!("{kind} n={n} (residual tolerance {RESIDUAL_TOL:e})"),
        equations,
    })
}
