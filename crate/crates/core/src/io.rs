//! JSON state schema shared with the command-line tool.
//!
//! A state file is either a raw matrix,
//! `{"modes": n, "A": [[...], ...]}` (row-major, dimension 2n x 2n), or a
//! one-mode parameter record, `{"one_mode": {"d": .., "m": .., "theta": ..}}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{CorrelationMatrix, OneModeParams};

#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    #[serde(default)]
    modes: Option<usize>,
    #[serde(rename = "A", default)]
    a: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    one_mode: Option<OneModeRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct OneModeRecord {
    d: f64,
    m: f64,
    #[serde(default)]
    theta: f64,
}

/// A parsed state: the correlation matrix plus the one-mode parameters when
/// the file provided them directly.
#[derive(Debug, Clone)]
pub struct ParsedState {
    pub cov: CorrelationMatrix,
    pub params: Option<OneModeParams>,
}

/// Parses a state from JSON text.
pub fn parse_state_json(text: &str) -> Result<ParsedState> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("state JSON: {e}")))?;
    match (file.a, file.one_mode) {
        (Some(rows), None) => {
            let dim = rows.len();
            if dim == 0 || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::Malformed(format!(
                    "matrix must be square, got {dim} rows"
                )));
            }
            if let Some(n) = file.modes {
                if 2 * n != dim {
                    return Err(Error::Malformed(format!(
                        "modes = {n} inconsistent with a {dim}x{dim} matrix"
                    )));
                }
            }
            let flat: Vec<f64> = rows.into_iter().flatten().collect();
            if flat.iter().any(|x| !x.is_finite()) {
                return Err(Error::Malformed("matrix entries must be finite".into()));
            }
            let a = DMatrix::from_row_slice(dim, dim, &flat);
            Ok(ParsedState {
                cov: CorrelationMatrix::new(a)?,
                params: None,
            })
        }
        (None, Some(one)) => {
            if !(one.d.is_finite() && one.m.is_finite() && one.theta.is_finite()) {
                return Err(Error::Malformed("one_mode fields must be finite".into()));
            }
            let params = OneModeParams::new(one.d, one.m, one.theta)?;
            Ok(ParsedState {
                cov: params.to_cov(),
                params: Some(params),
            })
        }
        (Some(_), Some(_)) => Err(Error::Malformed(
            "state file must provide either \"A\" or \"one_mode\", not both".into(),
        )),
        (None, None) => Err(Error::Malformed(
            "state file must provide \"A\" or \"one_mode\"".into(),
        )),
    }
}

/// Serializes a one-mode parameter state (used by tests and tooling).
pub fn one_mode_json(d: f64, m: f64, theta: f64) -> String {
    serde_json::json!({ "one_mode": { "d": d, "m": m, "theta": theta } }).to_string()
}
