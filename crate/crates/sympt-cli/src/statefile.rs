//! State persistence in the `sympt-state-v1` JSON format.
//!
//! The matrix is stored row-major as `[re, im]` pairs with 17
//! significant digits, which round-trips every f64 exactly: a
//! save / load / save cycle produces byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;
use sympt_core::dicke::SymmetricState;

pub const FORMAT_TAG: &str = "sympt-state-v1";

/// A state-file problem, with enough context to diagnose the field.
#[derive(Debug)]
pub enum StateFileError {
    Io(std::io::Error),
    /// JSON syntax or schema problem (includes line/column).
    Parse(String),
    /// Structurally valid JSON that violates the format contract.
    Invalid(String),
}

impl std::fmt::Display for StateFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateFileError::Io(e) => write!(f, "i/o error: {e}"),
            StateFileError::Parse(msg) => write!(f, "parse error: {msg}"),
            StateFileError::Invalid(msg) => write!(f, "invalid state file: {msg}"),
        }
    }
}

impl std::error::Error for StateFileError {}

impl From<std::io::Error> for StateFileError {
    fn from(e: std::io::Error) -> Self {
        StateFileError::Io(e)
    }
}

#[derive(Deserialize)]
struct StateFile {
    format: String,
    n_qubits: usize,
    rank_tol: f64,
    matrix: Vec<[f64; 2]>,
}

fn fmt_f64(x: f64) -> String {
    // 17 significant digits: 1 leading + 16 after the point
    format!("{x:.16e}")
}

/// Serializes a state to the `sympt-state-v1` JSON text.
pub fn render_state(s: &SymmetricState, rank_tol: f64) -> String {
    let d = s.dim();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"format\": \"{FORMAT_TAG}\",");
    let _ = writeln!(out, "  \"n_qubits\": {},", s.n_qubits());
    let _ = writeln!(out, "  \"rank_tol\": {},", fmt_f64(rank_tol));
    out.push_str("  \"matrix\": [\n");
    for i in 0..d {
        for j in 0..d {
            let z = s.matrix()[(i, j)];
            let sep = if i == d - 1 && j == d - 1 { "" } else { "," };
            let _ = writeln!(out, "    [{}, {}]{sep}", fmt_f64(z.re), fmt_f64(z.im));
        }
    }
    out.push_str("  ]\n}\n");
    out
}

/// Writes a state file.
pub fn save_state(path: &Path, s: &SymmetricState, rank_tol: f64) -> Result<(), StateFileError> {
    std::fs::write(path, render_state(s, rank_tol))?;
    Ok(())
}

/// Reads and validates a state file; returns the state and the rank
/// tolerance recorded with it.
pub fn load_state(path: &Path) -> Result<(SymmetricState, f64), StateFileError> {
    let text = std::fs::read_to_string(path)?;
    let file: StateFile =
        serde_json::from_str(&text).map_err(|e| StateFileError::Parse(format!("{e}")))?;
    if file.format != FORMAT_TAG {
        return Err(StateFileError::Invalid(format!(
            "field 'format': expected \"{FORMAT_TAG}\", found \"{}\"",
            file.format
        )));
    }
    if file.n_qubits < 1 || file.n_qubits > 30 {
        return Err(StateFileError::Invalid(format!(
            "field 'n_qubits': {} outside 1..=30",
            file.n_qubits
        )));
    }
    let d = file.n_qubits + 1;
    if file.matrix.len() != d * d {
        return Err(StateFileError::Invalid(format!(
            "field 'matrix': {} entries, expected {} for {} qubits",
            file.matrix.len(),
            d * d,
            file.n_qubits
        )));
    }
    if !(file.rank_tol.is_finite() && file.rank_tol > 0.0) {
        return Err(StateFileError::Invalid(format!(
            "field 'rank_tol': {} is not a positive number",
            file.rank_tol
        )));
    }
    let matrix = DMatrix::from_fn(d, d, |i, j| {
        let [re, im] = file.matrix[i * d + j];
        Complex64::new(re, im)
    });
    let state = SymmetricState::new_density(file.n_qubits, matrix)
        .map_err(|e| StateFileError::Invalid(format!("field 'matrix': {e}")))?;
    Ok((state, file.rank_tol))
}
