use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use paramech_cli::parse_scenario;
use paramech_cli::scenario::serialize_scenario;
use proptest::prelude::*;

fn paramech(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_paramech"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("PARAMECH_THREADS", t),
        None => cmd.env_remove("PARAMECH_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const HARMONIC_F_STAR: &str = r#"
n = 1
formalism = "hamiltonian"
structure = "F*"
x0 = [1.0, 0.0, 0.0, 0.0]
t_end = 6.283185307179586
dt = 1e-3

[function]
kind = "harmonic"
"#;

fn summary(path: &Path) -> toml::Table {
    fs::read_to_string(path).unwrap().parse().unwrap()
}

#[test]
fn run_harmonic_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "osc.toml", HARMONIC_F_STAR);
    let out = dir.path().join("out");
    let o = paramech(&["run", &file, "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = fs::read_to_string(out.join("osc.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,x_1,x_2,x_3,x_4,energy,res_1,res_2,res_3,res_4"
    );
    assert_eq!(lines.count(), 6285); // 6283 full steps, one shortened final step, t = 0
    let s = summary(&out.join("osc.summary.toml"));
    assert!(s["energy_drift"].as_float().unwrap() <= 1e-10);
    assert!(s["return_error"].as_float().unwrap() <= 1e-6);
    assert!(s["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn printed_f_convention_warns_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
n = 1
formalism = "lagrangian"
structure = "F"
convention = "printed"
x0 = [1.0, 0.0, 0.0, 0.0]
t_end = 1.0
dt = 1e-2
[function]
kind = "harmonic"
"#;
    let file = write(dir.path(), "f.toml", text);
    let o = paramech(&["run", &file], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let s = summary(&dir.path().join("f.summary.toml"));
    assert!(s["residual_max_abs"].as_float().unwrap() > 0.1);
    assert!(s["derived_residual_max_abs"].as_float().unwrap() <= 1e-6);
    assert_eq!(s["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn degenerate_lagrangian_is_singular() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
n = 1
formalism = "lagrangian"
structure = "G"
x0 = [1.0, 0.0, 0.0, 0.0]
t_end = 1.0
dt = 1e-2
[function]
kind = "polynomial"
terms = [{ coeff = 1, exponents = [1, 0, 0, 0] }, { coeff = "1/2", exponents = [0, 2, 0, 0] }]
"#;
    let file = write(dir.path(), "lin.toml", text);
    let o = paramech(&["run", &file], None);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!dir.path().join("lin.csv").exists());
}

#[test]
fn parse_errors_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "n = 1\nformalism = \n");
    let o = paramech(&["run", &bad], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let missing = dir.path().join("nope.toml");
    assert_eq!(
        paramech(&["run", missing.to_str().unwrap()], None).status.code(),
        Some(5)
    );
    assert_eq!(paramech(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn run_many_respects_thread_cap_and_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.toml", HARMONIC_F_STAR);
    let b = write(dir.path(), "b.toml", &HARMONIC_F_STAR.replace("F*", "G*"));
    let bad = write(dir.path(), "c.toml", "n = 0\n");
    let o = paramech(&["run", &a, &b], Some("2"));
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.find("a.toml").unwrap() < stdout.find("b.toml").unwrap());
    // sequential run writes byte-identical output
    let first = fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(paramech(&["run", &b], Some("1")).status.code(), Some(0));
    assert_eq!(fs::read(dir.path().join("b.csv")).unwrap(), first);

    assert_eq!(paramech(&["run", &a, &bad], Some("2")).status.code(), Some(2));
    assert_eq!(paramech(&["run", &a], Some("zero")).status.code(), Some(2));
}

#[test]
fn verify_reports_documented_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("audit.txt");
    let o = paramech(&["verify", "--n", "1", "--report", report.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&report).unwrap();
    assert_eq!(text, String::from_utf8_lossy(&o.stdout));
    assert!(text.contains("discrepancy (documented)"));
    assert!(text.lines().last().unwrap().contains("0 fail"));
    assert_eq!(paramech(&["verify", "--n", "0"], None).status.code(), Some(2));
}

#[test]
fn audit_el_and_plotdata() {
    let dir = tempfile::tempdir().unwrap();
    let text = HARMONIC_F_STAR.replace("hamiltonian", "lagrangian").replace("F*", "F");
    let file = write(dir.path(), "l.toml", &text);
    let o = paramech(&["audit-el", &file], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("summary: 4 of 4 equations differ"));

    assert_eq!(paramech(&["run", &file], None).status.code(), Some(0));
    let csv = dir.path().join("l.csv");
    let o = paramech(&["plotdata", csv.to_str().unwrap(), "--cols", "t,x_1,x_2"], None);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(stdout.lines().next().unwrap(), "t,x_1,x_2");
    let row: Vec<f64> = stdout
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row, vec![0.0, 1.0, 0.0]);
    let o = paramech(&["plotdata", csv.to_str().unwrap(), "--cols", "t,y"], None);
    assert_eq!(o.status.code(), Some(2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scenario_round_trips(
        n in 1usize..3,
        hamiltonian in any::<bool>(),
        tag in 0usize..3,
        dt in 1e-4f64..1e-1,
        steps in 1u32..1000,
        seed in prop::collection::vec(-10.0f64..10.0, 8),
    ) {
        let structure = ["F", "G", "H"][tag];
        let (formalism, structure) = if hamiltonian {
            ("hamiltonian", format!("{structure}*"))
        } else {
            ("lagrangian", structure.to_string())
        };
        let x0: Vec<String> = seed[..4 * n].iter().map(|v| format!("{v:?}")).collect();
        let text = format!(
            "n = {n}\nformalism = \"{formalism}\"\nstructure = \"{structure}\"\nx0 = [{}]\n\
             t_end = {:?}\ndt = {dt:?}\n[function]\nkind = \"harmonic\"\n",
            x0.join(", "),
            dt * f64::from(steps) * 1.5,
        );
        let s = parse_scenario(&text).unwrap();
        prop_assert_eq!(parse_scenario(&serialize_scenario(&s)).unwrap(), s);
    }
}
