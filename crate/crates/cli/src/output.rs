//! Trajectory tables and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use paramech_core::Trajectory;

use crate::error::CliError;

/// 17 significant digits: enough to round-trip every `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `bytes` to a temporary file beside `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn trajectory_header(dim: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend((1..=dim).map(|k| format!("x_{k}")));
    h.push("energy".into());
    h.extend((1..=dim).map(|k| format!("res_{k}")));
    h
}

/// `t, x_1..x_{4n}, energy, res_1..res_{4n}`, one row per sample.
pub fn trajectory_csv(traj: &Trajectory, residuals: &[Vec<f64>]) -> Result<Vec<u8>, csv::Error> {
    let dim = traj.states.first().map_or(0, Vec::len);
    let energy = traj.series("energy").unwrap_or(&[]);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(trajectory_header(dim))?;
    for (k, (t, x)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut row = vec![fmt17(*t)];
        row.extend(x.iter().map(|v| fmt17(*v)));
        row.push(energy.get(k).map_or_else(String::new, |e| fmt17(*e)));
        row.extend(residuals[k].iter().map(|v| fmt17(*v)));
        w.write_record(&row)?;
    }
    Ok(w.into_inner().expect("writing to a Vec cannot fail"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 1.234_567_890_123_456_7e10] {
            let s = fmt17(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn header_layout() {
        assert_eq!(
            trajectory_header(4).join(","),
            "t,x_1,x_2,x_3,x_4,energy,res_1,res_2,res_3,res_4"
        );
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("file.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
