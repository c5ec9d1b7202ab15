//! Campaign orchestration, state-file persistence, and report
//! generation around the `sympt-core` library.

pub mod campaign;
pub mod classify_cmd;
pub mod oracle;
pub mod statefile;
pub mod tables;

/// Reads the default rank tolerance, honoring `SYMPT_DEFAULT_TOL`.
pub fn default_rank_tol() -> f64 {
    match std::env::var("SYMPT_DEFAULT_TOL") {
        Ok(text) => text.trim().parse().unwrap_or(sympt_core::DEFAULT_RANK_TOL),
        Err(_) => sympt_core::DEFAULT_RANK_TOL,
    }
}
