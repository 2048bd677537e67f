//! Turning `--type`/`--matrix` and `--weights` into a Coxeter datum.

use std::path::Path;

use cell_lab_core::coxeter::{matrix_for_type_name, CoxeterDatum};

use crate::CliError;

/// Reads a Coxeter matrix: one row per line, entries separated by whitespace
/// or commas, `#` starts a comment.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>().map_err(|_| CliError::Usage(format!("matrix line {}: bad entry {s:?}", lineno + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn load_matrix(path: &Path) -> Result<Vec<Vec<usize>>, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text)
}

/// Missing weights mean `L = l`.
pub fn datum(ty: Option<&str>, matrix: Option<&Path>, weights: Option<&[u32]>) -> Result<CoxeterDatum, CliError> {
    let m = match (ty, matrix) {
        (Some(name), None) => matrix_for_type_name(name).map_err(|e| CliError::Usage(e.to_string()))?,
        (None, Some(path)) => load_matrix(path)?,
        _ => return Err(CliError::Usage("exactly one of --type and --matrix is required".into())),
    };
    let w = weights.map(<[u32]>::to_vec).unwrap_or_else(|| vec![1; m.len()]);
    CoxeterDatum::new(m, w).map_err(|e| CliError::Usage(e.to_string()))
}
