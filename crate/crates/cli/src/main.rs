use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use paramech_cli::audit_el::audit_scenario;
use paramech_cli::error::{CliError, EXIT_AUDIT_FAILED, EXIT_OK};
use paramech_cli::output::write_atomic;
use paramech_cli::plot::{parse_cols, select_columns};
use paramech_cli::run::{read_scenario, run_many, thread_cap};

#[derive(Parser)]
#[command(name = "paramech", version, about = "Mechanics on para-quaternionic Kähler space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one or more scenario files and write trajectory + summary.
    Run {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        /// Output directory (default: beside each scenario file).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity audit for n = 1..=N.
    Verify {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare stated and derived equations of motion for a scenario.
    AuditEl { scenario: PathBuf },
    /// Extract columns from a trajectory CSV.
    Plotdata {
        trajectory: PathBuf,
        /// Comma-separated header names, e.g. `t,x_1,x_2`.
        #[arg(long)]
        cols: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn stdout(bytes: &[u8]) -> Result<(), CliError> {
    std::io::stdout().write_all(bytes).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn execute(cmd: Command) -> Result<u8, CliError> {
    match cmd {
        Command::Run { scenarios, out } => {
            let threads = thread_cap(std::env::var("PARAMECH_THREADS").ok().as_deref())?;
            let mut code = EXIT_OK;
            for (path, result) in scenarios.iter().zip(run_many(&scenarios, out.as_deref(), threads)) {
                match result {
                    Ok(o) => {
                        println!(
                            "{}: {} steps, energy drift {:.3e}, residual {:.3e} -> {}",
                            path.display(),
                            o.summary.steps,
                            o.summary.energy_drift,
                            o.summary.residual_max_abs,
                            o.trajectory_path.display()
                        );
                        for w in &o.summary.warnings {
                            eprintln!("warning: {}: {w}", path.display());
                        }
                    }
                    Err(e) => {
                        eprintln!("error: {}: {e}", path.display());
                        if code == EXIT_OK {
                            code = e.exit_code();
                        }
                    }
                }
            }
            Ok(code)
        }
        Command::Verify { n, report } => {
            let audit = paramech_core::audit::verify_all(n)?;
            let text = audit.render();
            stdout(text.as_bytes())?;
            if let Some(path) = report {
                write_atomic(&path, text.as_bytes())?;
            }
            Ok(if audit.passed() { EXIT_OK } else { EXIT_AUDIT_FAILED })
        }
        Command::AuditEl { scenario } => {
            let s = read_scenario(&scenario)?;
            stdout(audit_scenario(&s)?.render().as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Plotdata { trajectory, cols, out } => {
            let bytes = select_columns(&trajectory, &parse_cols(&cols))?;
            match out {
                Some(path) => write_atomic(&path, &bytes)?,
                None => stdout(&bytes)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
