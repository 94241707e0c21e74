//! Running scenarios: integrate, measure residuals, write outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use paramech_core::audit::max_abs;
use paramech_core::{Convention, HamiltonianSystem, LagrangianSystem, StepperConfig, Trajectory};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{trajectory_csv, write_atomic};
use crate::scenario::{parse_scenario, Formalism, Scenario};

/// Residuals above this count as "equations not satisfied" in warnings.
pub const RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub formalism: String,
    pub structure: String,
    pub method: String,
    pub dt: f64,
    pub t_end: f64,
    pub steps: usize,
    pub energy_initial: f64,
    pub energy_final: f64,
    /// `max_t |E(t) - E(0)|`.
    pub energy_drift: f64,
    pub final_state: Vec<f64>,
    /// `max_a |x_a(t_end) - x_a(0)|`.
    pub return_error: f64,
    /// Which equations the `res_*` columns measure.
    pub residuals: String,
    pub residual_max_abs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived_residual_max_abs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_residual_max_abs: Option<f64>,
    pub warnings: Vec<String>,
}

impl Summary {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("summary fields are always representable")
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub trajectory: Trajectory,
    pub residuals: Vec<Vec<f64>>,
    pub summary: Summary,
}

pub fn simulate(s: &Scenario) -> Result<Simulation, CliError> {
    let cfg = StepperConfig::new(s.method, s.dt)?;
    let field = s.field()?;
    let kind = s.kind();
    let mut warnings = Vec::new();
    let (trajectory, residuals, label, derived, printed) = match s.formalism {
        Formalism::Lagrangian => {
            let convention = s.convention.unwrap_or_default();
            let sys = LagrangianSystem::new(kind, field, convention)?;
            let traj = sys.integrate(&s.x0, s.t_end, &cfg)?;
            let derived = sys.residuals_with(&traj, Convention::Derived)?;
            let printed = sys.residuals_with(&traj, Convention::Printed)?;
            let (d, p) = (max_abs(&derived), max_abs(&printed));
            if p > RESIDUAL_TOL {
                warnings.push(format!(
                    "stated Euler-Lagrange equations ({}) are not satisfied along the trajectory \
                     (max residual {p:.3e}); they differ from the derived equations",
                    s.structure
                ));
            }
            if d > RESIDUAL_TOL {
                warnings.push(format!("derived equations residual {d:.3e} exceeds {RESIDUAL_TOL:e}"));
            }
            let (res, label) = match convention {
                Convention::Derived => (derived, "derived Euler-Lagrange equations"),
                Convention::Printed => (printed, "stated Euler-Lagrange equations"),
            };
            (traj, res, label, Some(d), Some(p))
        }
        Formalism::Hamiltonian => {
            let sys = HamiltonianSystem::new(kind, field)?;
            let traj = sys.integrate(&s.x0, s.t_end, &cfg)?;
            let res = sys.residuals(&traj)?;
            let worst = max_abs(&res);
            if worst > RESIDUAL_TOL {
                warnings.push(format!("stated Hamilton equations residual {worst:.3e}"));
            }
            (traj, res, "stated Hamilton equations", None, None)
        }
    };
    let energy = trajectory.series("energy").unwrap_or(&[]);
    let final_state = trajectory.final_state().unwrap_or(&s.x0).to_vec();
    let summary = Summary {
        formalism: s.formalism.to_string(),
        structure: kind.to_string(),
        method: s.method.to_string(),
        dt: s.dt,
        t_end: s.t_end,
        steps: trajectory.len().saturating_sub(1),
        energy_initial: energy.first().copied().unwrap_or(f64::NAN),
        energy_final: energy.last().copied().unwrap_or(f64::NAN),
        energy_drift: trajectory.drift("energy").unwrap_or(0.0),
        return_error: final_state
            .iter()
            .zip(&s.x0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
        final_state,
        residuals: label.into(),
        residual_max_abs: max_abs(&residuals),
        derived_residual_max_abs: derived,
        printed_residual_max_abs: printed,
        warnings,
    };
    Ok(Simulation {
        trajectory,
        residuals,
        summary,
    })
}

pub fn read_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_scenario(&text)?)
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub scenario: PathBuf,
    pub trajectory_path: PathBuf,
    pub summary_path: PathBuf,
    pub summary: Summary,
}

fn resolve(base: &Path, configured: Option<&PathBuf>, default: String) -> PathBuf {
    let p = configured.cloned().unwrap_or_else(|| PathBuf::from(default));
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

/// Runs one scenario file; outputs go to `out` or beside the scenario file.
pub fn run_file(path: &Path, out: Option<&Path>) -> Result<RunOutcome, CliError> {
    let scenario = read_scenario(path)?;
    let sim = simulate(&scenario)?;
    let base = match out {
        Some(d) => d.to_path_buf(),
        None => path.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let stem = path
        .file_stem()
        .map_or("scenario".into(), |s| s.to_string_lossy().into_owned());
    let trajectory_path = resolve(&base, scenario.outputs.trajectory.as_ref(), format!("{stem}.csv"));
    let summary_path = resolve(&base, scenario.outputs.summary.as_ref(), format!("{stem}.summary.toml"));
    let csv = trajectory_csv(&sim.trajectory, &sim.residuals).map_err(|e| CliError::Io {
        path: trajectory_path.clone(),
        source: e.into(),
    })?;
    write_atomic(&trajectory_path, &csv)?;
    write_atomic(&summary_path, sim.summary.to_toml().as_bytes())?;
    Ok(RunOutcome {
        scenario: path.to_path_buf(),
        trajectory_path,
        summary_path,
        summary: sim.summary,
    })
}

/// Scenario-level parallelism from `PARAMECH_THREADS`, else the core count.
pub fn thread_cap(var: Option<&str>) -> Result<usize, CliError> {
    match var {
        None => Ok(std::thread::available_parallelism().map_or(1, usize::from)),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Usage(format!(
                "PARAMECH_THREADS must be a positive integer, got `{v}`"
            ))),
        },
    }
}

/// Runs scenario files on up to `threads` workers; results keep input order.
pub fn run_many(paths: &[PathBuf], out: Option<&Path>, threads: usize) -> Vec<Result<RunOutcome, CliError>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<RunOutcome, CliError>>>> = paths.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads.clamp(1, paths.len().max(1)) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = paths.get(k) else { break };
                let result = run_file(path, out);
                *slots[k].lock().expect("no worker panics while holding the lock") = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| {
            m.into_inner()
                .expect("lock is not poisoned")
                .expect("every slot is filled")
        })
        .collect()
}
