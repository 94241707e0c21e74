//! Column extraction from trajectory tables.

use std::path::Path;

use crate::error::CliError;

/// Selects `cols` (by header name, in the given order) from a trajectory CSV.
pub fn select_columns(path: &Path, cols: &[String]) -> Result<Vec<u8>, CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let csv_io = |e: csv::Error| io(e.into());
    let mut reader = csv::Reader::from_path(path).map_err(csv_io)?;
    let header = reader.headers().map_err(csv_io)?.clone();
    let picks = cols
        .iter()
        .map(|c| {
            header
                .iter()
                .position(|h| h == c)
                .ok_or_else(|| CliError::Usage(format!("no column `{c}` in {}", path.display())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if picks.is_empty() {
        return Err(CliError::Usage("no columns requested".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(cols).map_err(csv_io)?;
    for record in reader.records() {
        let record = record.map_err(csv_io)?;
        w.write_record(picks.iter().map(|&k| record.get(k).unwrap_or("")))
            .map_err(csv_io)?;
    }
    Ok(w.into_inner().expect("writing to a Vec cannot fail"))
}

pub fn parse_cols(spec: &str) -> Vec<String> {
    spec.split(',')
        .map(|c| c.trim().to_string())
        .filter(|c| !c.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_in_requested_order() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        std::fs::write(&p, "t,x_1,x_2\n0,1,2\n1,3,4\n").unwrap();
        let out = select_columns(&p, &parse_cols("x_2, t")).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "x_2,t\n2,0\n4,1\n");
        let err = select_columns(&p, &parse_cols("x_9")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = select_columns(&dir.path().join("missing.csv"), &parse_cols("t")).unwrap_err();
        assert_eq!(err.exit_code(), 5);
    }
}
