//! Scenario files: one TOML document per simulation.
//!
//! ```toml
//! n = 1
//! formalism = "hamiltonian"
//! structure = "F"
//! x0 = [1.0, 0.0, 0.0, 0.0]
//! t_end = 6.283185307179586
//! dt = 0.001
//! method = "implicit_midpoint"
//!
//! [function]
//! kind = "polynomial"
//! terms = [{ coeff = "1/2", exponents = [2, 0, 0, 0] }]
//! ```
//!
//! `function.kind` is `polynomial`, `harmonic` or `kinetic_minus_potential`
//! (with `masses` and `g_const`). Polynomial coefficients are exact: either
//! an integer, a float (taken at its exact binary value) or a `"p/q"` string.

use std::fmt;
use std::path::PathBuf;

use paramech_core::poly::rat_from_f64;
use paramech_core::{Convention, Method, PolyScalar, Rational, ScalarField, StructureKind, StructureTag};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_error(field: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Field {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formalism {
    Lagrangian,
    Hamiltonian,
}

impl fmt::Display for Formalism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formalism::Lagrangian => "lagrangian",
            Formalism::Hamiltonian => "hamiltonian",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    /// `½ Σ x_a²`.
    Harmonic,
    KineticMinusPotential {
        masses: Vec<f64>,
        g_const: f64,
    },
    Polynomial(PolyScalar),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outputs {
    pub trajectory: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub n: usize,
    pub formalism: Formalism,
    pub structure: StructureTag,
    /// Lagrangian only; `None` reads as derived.
    pub convention: Option<Convention>,
    pub function: FunctionSpec,
    pub x0: Vec<f64>,
    pub t_end: f64,
    pub dt: f64,
    pub method: Method,
    pub outputs: Outputs,
}

impl Scenario {
    pub fn dim(&self) -> usize {
        4 * self.n
    }

    /// The structure as used by the formalism: tangent for Lagrangian, dual
    /// for Hamiltonian scenarios.
    pub fn kind(&self) -> StructureKind {
        match self.formalism {
            Formalism::Lagrangian => StructureKind::tangent(self.structure),
            Formalism::Hamiltonian => StructureKind::cotangent(self.structure),
        }
    }

    pub fn field(&self) -> paramech_core::Result<ScalarField> {
        Ok(match &self.function {
            FunctionSpec::Harmonic => ScalarField::polynomial(PolyScalar::half_sum_of_squares(self.dim())),
            FunctionSpec::KineticMinusPotential { masses, g_const } => {
                ScalarField::kinetic_minus_potential(masses.clone(), *g_const)?
            }
            FunctionSpec::Polynomial(p) => ScalarField::polynomial(p.clone()),
        })
    }
}

// ---- file representation ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    n: usize,
    formalism: String,
    structure: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    convention: Option<String>,
    x0: Vec<f64>,
    t_end: f64,
    dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    method: Option<String>,
    function: RawFunction,
    #[serde(default, skip_serializing_if = "RawOutputs::is_empty")]
    outputs: RawOutputs,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawFunction {
    Harmonic,
    KineticMinusPotential { masses: Vec<f64>, g_const: f64 },
    Polynomial { terms: Vec<RawTerm> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coeff: RawCoeff,
    exponents: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawCoeff {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trajectory: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    summary: Option<PathBuf>,
}

impl RawOutputs {
    fn is_empty(&self) -> bool {
        self.trajectory.is_none() && self.summary.is_none()
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |p| before.len() - p - 1) + 1;
    (line, column)
}

fn parse_coeff(c: &RawCoeff, k: usize) -> Result<Rational, ScenarioError> {
    let field = format!("function.terms[{k}].coeff");
    match c {
        RawCoeff::Int(i) => Ok(Rational::from_integer((*i).into())),
        RawCoeff::Float(f) => rat_from_f64(*f).map_err(|e| field_error(&field, e.to_string())),
        RawCoeff::Text(s) => s
            .trim()
            .parse::<Rational>()
            .map_err(|_| field_error(&field, format!("`{s}` is not a rational number"))),
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        ScenarioError::Syntax {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    from_raw(raw)
}

fn from_raw(raw: RawScenario) -> Result<Scenario, ScenarioError> {
    if raw.n < 1 {
        return Err(field_error("n", "must be at least 1"));
    }
    let dim = 4 * raw.n;
    let formalism = match raw.formalism.as_str() {
        "lagrangian" => Formalism::Lagrangian,
        "hamiltonian" => Formalism::Hamiltonian,
        other => {
            return Err(field_error(
                "formalism",
                format!("expected lagrangian or hamiltonian, got `{other}`"),
            ))
        }
    };
    let structure: StructureTag = raw
        .structure
        .parse()
        .map_err(|_| field_error("structure", format!("expected F, G or H, got `{}`", raw.structure)))?;
    let convention = match (&raw.convention, formalism) {
        (None, _) => None,
        (Some(_), Formalism::Hamiltonian) => {
            return Err(field_error("convention", "only applies to lagrangian scenarios"))
        }
        (Some(c), Formalism::Lagrangian) => Some(
            c.parse::<Convention>()
                .map_err(|_| field_error("convention", format!("expected derived or printed, got `{c}`")))?,
        ),
    };
    let method = match &raw.method {
        None => Method::ImplicitMidpoint,
        Some(m) => m.parse::<Method>().map_err(|e| field_error("method", e.to_string()))?,
    };
    if formalism == Formalism::Lagrangian && method == Method::SymplecticEuler {
        return Err(field_error(
            "method",
            "lagrangian scenarios use rk4 or implicit_midpoint",
        ));
    }
    if raw.x0.len() != dim {
        return Err(field_error(
            "x0",
            format!("expected {dim} values for n = {}, got {}", raw.n, raw.x0.len()),
        ));
    }
    if raw.x0.iter().any(|v| !v.is_finite()) {
        return Err(field_error("x0", "values must be finite"));
    }
    if !(raw.dt > 0.0 && raw.dt.is_finite()) {
        return Err(field_error("dt", "must be positive"));
    }
    if !(raw.t_end >= 0.0 && raw.t_end.is_finite()) {
        return Err(field_error("t_end", "must be nonnegative"));
    }
    if raw.t_end > 0.0 && raw.dt >= raw.t_end {
        return Err(field_error("dt", "must be smaller than t_end (or set t_end = 0)"));
    }
    let function = match raw.function {
        RawFunction::Harmonic => FunctionSpec::Harmonic,
        RawFunction::KineticMinusPotential { masses, g_const } => {
            if masses.len() != raw.n {
                return Err(field_error(
                    "function.masses",
                    format!("expected {} masses, got {}", raw.n, masses.len()),
                ));
            }
            if masses.iter().any(|m| !(*m > 0.0 && m.is_finite())) {
                return Err(field_error("function.masses", "masses must be positive"));
            }
            if !g_const.is_finite() {
                return Err(field_error("function.g_const", "must be finite"));
            }
            FunctionSpec::KineticMinusPotential { masses, g_const }
        }
        RawFunction::Polynomial { terms } => {
            let mut parsed = Vec::with_capacity(terms.len());
            for (k, t) in terms.iter().enumerate() {
                if t.exponents.len() != dim {
                    return Err(field_error(
                        &format!("function.terms[{k}].exponents"),
                        format!("expected {dim} exponents, got {}", t.exponents.len()),
                    ));
                }
                parsed.push((t.exponents.clone(), parse_coeff(&t.coeff, k)?));
            }
            FunctionSpec::Polynomial(
                PolyScalar::from_terms(dim, parsed).map_err(|e| field_error("function.terms", e.to_string()))?,
            )
        }
    };
    Ok(Scenario {
        n: raw.n,
        formalism,
        structure,
        convention,
        function,
        x0: raw.x0,
        t_end: raw.t_end,
        dt: raw.dt,
        method,
        outputs: Outputs {
            trajectory: raw.outputs.trajectory,
            summary: raw.outputs.summary,
        },
    })
}

pub fn serialize_scenario(s: &Scenario) -> String {
    let function = match &s.function {
        FunctionSpec::Harmonic => RawFunction::Harmonic,
        FunctionSpec::KineticMinusPotential { masses, g_const } => RawFunction::KineticMinusPotential {
            masses: masses.clone(),
            g_const: *g_const,
        },
        FunctionSpec::Polynomial(p) => RawFunction::Polynomial {
            terms: p
                .terms()
                .map(|(e, c)| RawTerm {
                    coeff: RawCoeff::Text(c.to_string()),
                    exponents: e.clone(),
                })
                .collect(),
        },
    };
    let raw = RawScenario {
        n: s.n,
        formalism: s.formalism.to_string(),
        structure: s.structure.to_string(),
        convention: s.convention.map(|c| c.to_string()),
        x0: s.x0.clone(),
        t_end: s.t_end,
        dt: s.dt,
        method: Some(s.method.to_string()),
        function,
        outputs: RawOutputs {
            trajectory: s.outputs.trajectory.clone(),
            summary: s.outputs.summary.clone(),
        },
    };
    toml::to_string(&raw).expect("scenario fields are always representable")
}
