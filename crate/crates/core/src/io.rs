//! JSON files for states and tactics.
//!
//! A state file is either a named state
//! `{"name": "werner", "params": {"a": 0.6}}` or an explicit density matrix
//! `{"dims": [2, 2], "matrix": [[[re, im], ...], ...]}` given row by row.
//! A tactic file is `{"label": ..., "u_a": {"matrix": ...}, "v_b": {"matrix": ...}}`.
//! Floats are written in shortest round-trip form, so re-reading a written
//! file reproduces every entry bit for bit.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::games::Tactic;
use crate::qcore::{c, ComplexMatrix, DensityMatrix};
use crate::states::NamedState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix, dims: Option<Vec<usize>>) -> Self {
        let matrix = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|col| [m[(r, col)].re, m[(r, col)].im]).collect())
            .collect();
        MatrixFile { dims, matrix }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let rows = self.matrix.len();
        if rows == 0 {
            return Err(Error::validation("matrix", "empty"));
        }
        if let Some(bad) = self.matrix.iter().position(|row| row.len() != rows) {
            return Err(Error::validation(
                "matrix",
                format!("row {bad} has {} entries, expected {rows}", self.matrix[bad].len()),
            ));
        }
        if self.matrix.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(Error::validation("matrix", "non-finite entry"));
        }
        Ok(ComplexMatrix::from_fn(rows, rows, |r, col| {
            let [re, im] = self.matrix[r][col];
            c(re, im)
        }))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum StateFile {
    Named {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, Value>,
    },
    Matrix(MatrixFile),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TacticFile {
    #[serde(default)]
    pub label: String,
    pub u_a: MatrixFile,
    pub v_b: MatrixFile,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn param_text(key: &str, v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::validation(key, "parameter must be a number or a string")),
    }
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    match serde_json::from_str::<StateFile>(text).map_err(parse_err)? {
        StateFile::Named { name, params } => {
            let params = params
                .iter()
                .map(|(k, v)| Ok((k.clone(), param_text(k, v)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            NamedState::from_params(&name, &params)?.density()
        }
        StateFile::Matrix(m) => {
            let matrix = m.to_matrix()?;
            let dims = m.dims.unwrap_or_else(|| match matrix.nrows() {
                4 => vec![2, 2],
                n => vec![n],
            });
            DensityMatrix::new(dims, matrix)
        }
    }
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    let file = StateFile::Matrix(MatrixFile::from_matrix(rho.matrix(), Some(rho.dims().to_vec())));
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn named_state_to_json(state: &NamedState) -> String {
    let params = state.params().into_iter().map(|(k, v)| (k, Value::String(v))).collect();
    let file = StateFile::Named {
        name: state.name().to_string(),
        params,
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn parse_tactic(text: &str) -> Result<Tactic> {
    let file: TacticFile = serde_json::from_str(text).map_err(parse_err)?;
    let label = if file.label.is_empty() { "file".to_string() } else { file.label };
    Tactic::new(file.u_a.to_matrix()?, file.v_b.to_matrix()?, label)
}

pub fn tactic_to_json(t: &Tactic) -> String {
    let file = TacticFile {
        label: t.label.clone(),
        u_a: MatrixFile::from_matrix(&t.u_a, None),
        v_b: MatrixFile::from_matrix(&t.v_b, None),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A path to a state file, or else the named-state mini-syntax.
pub fn resolve_state(arg: &str) -> Result<DensityMatrix> {
    let path = Path::new(arg);
    if path.is_file() {
        return parse_state(&read_to_string(path)?);
    }
    if arg.ends_with(".json") {
        return Err(Error::Io(format!("{arg}: no such file")));
    }
    arg.parse::<NamedState>()?.density()
}
