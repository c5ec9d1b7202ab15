//! The `classify` command: full diagnosis of a saved state.

use std::path::Path;

use serde::Serialize;

use sympt_core::classify::{
    classify_ranks, decompose_separable, default_max_terms, edge_excluded, find_product_vector,
    schmidt_bound, Rule, SeparableDecomposition, Verdict, EDGE_RESIDUAL_THRESHOLD,
};
use sympt_core::spectra::{is_ppt, rank_profile};

use crate::statefile::{load_state, StateFileError};

/// Exit code contract of the `classify` command.
pub const EXIT_SEPARABLE: i32 = 0;
pub const EXIT_CANDIDATE_ENTANGLED: i32 = 1;
pub const EXIT_GENERICALLY_SEPARABLE: i32 = 2;
pub const EXIT_PARSE_ERROR: i32 = 64;

/// Everything the command reports about one state.
#[derive(Debug, Serialize)]
pub struct ClassifyOutput {
    pub n_qubits: usize,
    pub rank_tol: f64,
    pub rank_profile: String,
    pub is_ppt: bool,
    pub min_view_eigenvalue: f64,
    pub verdict: String,
    pub triggered_rules: Vec<String>,
    pub edge_exclusion: String,
    pub product_vector_found: bool,
    pub product_vector_residual: f64,
    pub decomposition_terms: Option<usize>,
    pub schmidt_bound: Option<usize>,
}

/// Classifies a state file. Returns the report and the exit code.
///
/// When the rank rules alone do not prove separability, the constructive
/// certificate is attempted and upgrades the verdict on success.
pub fn classify_file(
    path: &Path,
    rank_tol_override: Option<f64>,
) -> Result<(ClassifyOutput, i32), StateFileError> {
    let (state, stored_tol) = load_state(path)?;
    let rank_tol = rank_tol_override.unwrap_or(stored_tol);
    let n = state.n_qubits();

    let profile = rank_profile(&state, rank_tol).map_err(to_invalid)?;
    let ppt = is_ppt(&state, rank_tol).map_err(to_invalid)?;
    // the rank rules presume a PPT state; a negative partial
    // transposition already certifies entanglement
    let mut classification = if ppt.is_ppt {
        classify_ranks(&profile, n)
    } else {
        sympt_core::classify::Classification {
            verdict: Verdict::CandidateEntangled,
            triggered_rules: Vec::new(),
        }
    };
    let mut decomposition_terms = None;
    if classification.verdict != Verdict::Separable && ppt.is_ppt {
        if let SeparableDecomposition::Decomposed(terms) =
            decompose_separable(&state, default_max_terms(n), rank_tol).map_err(to_invalid)?
        {
            decomposition_terms = Some(terms.len());
            classification.verdict = Verdict::Separable;
            classification
                .triggered_rules
                .push(Rule::ConstructiveDecomposition);
        }
    }
    let edge = edge_excluded(&profile, n);
    let report =
        find_product_vector(&state, EDGE_RESIDUAL_THRESHOLD, rank_tol).map_err(to_invalid)?;
    let bound = schmidt_bound(&state, rank_tol).map_err(to_invalid)?;

    let exit = match classification.verdict {
        Verdict::Separable => EXIT_SEPARABLE,
        Verdict::CandidateEntangled => EXIT_CANDIDATE_ENTANGLED,
        Verdict::GenericallySeparable => EXIT_GENERICALLY_SEPARABLE,
    };
    let output = ClassifyOutput {
        n_qubits: n,
        rank_tol,
        rank_profile: profile.to_string(),
        is_ppt: ppt.is_ppt,
        min_view_eigenvalue: ppt.min_eigenvalue,
        verdict: classification.verdict.to_string(),
        triggered_rules: classification
            .triggered_rules
            .iter()
            .map(|r| r.to_string())
            .collect(),
        edge_exclusion: edge.to_string(),
        product_vector_found: report.found_vector.is_some(),
        product_vector_residual: report.residual,
        decomposition_terms,
        schmidt_bound: bound,
    };
    Ok((output, exit))
}

fn to_invalid(e: sympt_core::Error) -> StateFileError {
    StateFileError::Invalid(e.to_string())
}

/// Human-readable rendering.
pub fn render_human(out: &ClassifyOutput) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(s, "qubits:            {}", out.n_qubits);
    let _ = writeln!(s, "rank tolerance:    {:.3e}", out.rank_tol);
    let _ = writeln!(s, "rank profile:      {}", out.rank_profile);
    let _ = writeln!(
        s,
        "ppt:               {} (min view eigenvalue {:.3e})",
        if out.is_ppt { "yes" } else { "no" },
        out.min_view_eigenvalue
    );
    let _ = writeln!(s, "verdict:           {}", out.verdict);
    let _ = writeln!(s, "rules:             {}", out.triggered_rules.join(", "));
    let _ = writeln!(s, "edge exclusion:    {}", out.edge_exclusion);
    let _ = writeln!(
        s,
        "product vector:    {} (residual {:.3e})",
        if out.product_vector_found {
            "found"
        } else {
            "none below threshold"
        },
        out.product_vector_residual
    );
    if let Some(terms) = out.decomposition_terms {
        let _ = writeln!(s, "decomposition:     {terms} product terms");
    }
    match out.schmidt_bound {
        Some(b) => {
            let _ = writeln!(s, "schmidt bound:     {b}");
        }
        None => {
            let _ = writeln!(s, "schmidt bound:     no certificate");
        }
    }
    s
}
