//! The `oracle-check` command: cross-validates the compressed
//! partial-transposition path against the literal full-space computation
//! on random states.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sympt_core::dicke::{compression_isometry, expand_to_full, partial_transpose_view};
use sympt_core::fullspace::{partial_transpose_full, to_bipartite_dicke_basis};
use sympt_core::sampling::random_psd_state;
use sympt_core::spectra::{rank_profile, spectral_summary, RankProfile};

#[derive(Debug, Serialize)]
pub struct OracleRow {
    pub n_qubits: usize,
    pub states: usize,
    pub max_entry_deviation: f64,
    pub max_isometry_defect: f64,
    pub profiles_matched: bool,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
    pub passed: bool,
}

/// Checks `states` random PSD symmetric states per qubit count in
/// `2..=max_n` (capped at 8): the compressed views must match the
/// expand / transpose / project path entrywise within `1e-10`, and the
/// rank profiles computed both ways must agree exactly.
pub fn run_oracle_check(max_n: usize, states: usize, seed: u64, rank_tol: f64) -> OracleReport {
    let max_n = max_n.clamp(2, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut passed = true;
    for n in 2..=max_n {
        let mut worst = 0.0_f64;
        let mut iso_defect = 0.0_f64;
        let mut profiles_ok = true;
        for k in 1..=n / 2 {
            let iso = compression_isometry(n, k).unwrap();
            let gram = iso.matrix().transpose() * iso.matrix();
            for i in 0..gram.nrows() {
                for j in 0..gram.ncols() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    iso_defect = iso_defect.max((gram[(i, j)] - want).abs());
                }
            }
        }
        for i in 0..states {
            // sweep ranks low to full so kernels of every size appear
            let rank = 1 + (i % (n + 1));
            let s = random_psd_state(n, rank, &mut rng);
            let full = expand_to_full(&s).unwrap();
            let mut oracle_ranks = vec![spectral_summary(s.matrix(), rank_tol).unwrap().rank];
            for k in 1..=n / 2 {
                let view = partial_transpose_view(&s, k).unwrap();
                let pt = partial_transpose_full(&full, n, k).unwrap();
                let projected = to_bipartite_dicke_basis(&pt, n, k).unwrap();
                let dev = (view.matrix() - &projected)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0_f64, f64::max);
                worst = worst.max(dev);
                oracle_ranks.push(spectral_summary(&projected, rank_tol).unwrap().rank);
            }
            let direct = rank_profile(&s, rank_tol).unwrap();
            if direct != RankProfile::new(oracle_ranks) {
                profiles_ok = false;
            }
        }
        let row_ok = worst < 1e-10 && iso_defect < 1e-12 && profiles_ok;
        passed &= row_ok;
        rows.push(OracleRow {
            n_qubits: n,
            states,
            max_entry_deviation: worst,
            max_isometry_defect: iso_defect,
            profiles_matched: profiles_ok,
        });
    }
    OracleReport { rows, passed }
}

pub fn render_report(report: &OracleReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>3} | {:>7} | {:>14} | {:>14} | profiles",
        "n", "states", "max entry dev", "isometry dev"
    );
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{:>3} | {:>7} | {:>14.3e} | {:>14.3e} | {}",
            row.n_qubits,
            row.states,
            row.max_entry_deviation,
            row.max_isometry_defect,
            if row.profiles_matched {
                "match"
            } else {
                "MISMATCH"
            }
        );
    }
    let _ = writeln!(
        out,
        "overall: {}",
        if report.passed { "PASS" } else { "FAIL" }
    );
    out
}
