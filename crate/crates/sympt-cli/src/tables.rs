//! Rank-table reproduction: observed extremal entangled profiles per
//! qubit count against the expected family, plus the counting-inequality
//! exclusion table used to cross-check them.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;

use sympt_core::classify::extremality_excluded;
use sympt_core::spectra::{max_rank_profile, RankProfile};

use crate::campaign::{run_campaign, CampaignConfig};

/// Expected extremal entangled profiles for `n` qubits.
///
/// The observed regularity: odd `n` has a single configuration (all
/// ranks maximal, last lowered by two). Even `n` has the last two views
/// lowered by `(1, 1)` for `n = 4`, by `(1, 2)` and `(1, 3)` for
/// `n = 6, 8`, and additionally by `(0, 4)` from `n = 10` on.
pub fn expected_extremal_profiles(n: usize) -> Vec<RankProfile> {
    let maxp = max_rank_profile(n);
    let m = n / 2;
    let build = |deficits: &[(usize, usize)]| -> RankProfile {
        let mut ranks = maxp.ranks().to_vec();
        for &(k, d) in deficits {
            ranks[k] -= d;
        }
        RankProfile::new(ranks)
    };
    if n % 2 == 1 {
        return vec![build(&[(m, 2)])];
    }
    match n {
        4 => vec![build(&[(1, 1), (2, 1)])],
        6 | 8 => vec![build(&[(m - 1, 1), (m, 2)]), build(&[(m - 1, 1), (m, 3)])],
        _ => vec![
            build(&[(m - 1, 1), (m, 2)]),
            build(&[(m - 1, 1), (m, 3)]),
            build(&[(m, 4)]),
        ],
    }
}

/// All profiles with maximal state rank excluded by the squared-rank
/// counting inequality, enumerated over the full box of view ranks.
pub fn exclusion_table(n: usize) -> Vec<RankProfile> {
    let maxp = max_rank_profile(n);
    let m = n / 2;
    let mut out = Vec::new();
    let mut current = vec![n + 1; m + 1];
    fn recurse(
        k: usize,
        m: usize,
        maxp: &RankProfile,
        current: &mut Vec<usize>,
        out: &mut Vec<RankProfile>,
        n: usize,
    ) {
        if k > m {
            let p = RankProfile::new(current.clone());
            if extremality_excluded(&p, n) {
                out.push(p);
            }
            return;
        }
        for r in 1..=maxp.rank(k) {
            current[k] = r;
            recurse(k + 1, m, maxp, current, out, n);
        }
    }
    recurse(1, m, &maxp, &mut current, &mut out, n);
    out.sort();
    out
}

/// One row of the reproduction table.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub n_qubits: usize,
    pub runs: usize,
    pub expected: Vec<String>,
    pub observed: Vec<String>,
    /// observed is a nonempty subset of expected
    pub matched: bool,
    /// no observed profile sits in the exclusion table (small n only)
    pub exclusion_cross_check: Option<bool>,
    pub extremal_entangled_fraction: f64,
}

/// The full artifact emitted by the `table` command.
#[derive(Debug, Clone, Serialize)]
pub struct TableArtifact {
    pub seed: u64,
    pub runs_per_n: usize,
    pub rows: Vec<TableRow>,
}

impl TableArtifact {
    pub fn all_matched(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.matched && r.exclusion_cross_check != Some(false))
    }
}

/// Runs one campaign per qubit count and tabulates the observed extremal
/// entangled profiles against [`expected_extremal_profiles`].
pub fn reproduce_rank_table(
    max_n: usize,
    runs_per_n: usize,
    seed: u64,
    rank_tol: f64,
    parallelism: usize,
    output_dir: Option<&Path>,
) -> Result<TableArtifact, String> {
    if !(4..=30).contains(&max_n) {
        return Err(format!("max qubit count {max_n} outside 4..=30"));
    }
    let mut rows = Vec::new();
    for n in 4..=max_n {
        let cfg = CampaignConfig {
            n_qubits: n,
            runs: runs_per_n,
            seed,
            rank_tol,
            target_profile: None,
            output_dir: None,
            parallelism,
        };
        let report = run_campaign(&cfg)?;
        let observed = report.entangled_profiles();
        let expected: Vec<String> = expected_extremal_profiles(n)
            .iter()
            .map(|p| p.to_string())
            .collect();
        let expected_set: BTreeSet<&String> = expected.iter().collect();
        let matched = !observed.is_empty() && observed.iter().all(|p| expected_set.contains(p));
        let exclusion_cross_check = (n <= 6).then(|| {
            let excluded: BTreeSet<String> =
                exclusion_table(n).iter().map(|p| p.to_string()).collect();
            observed.iter().all(|p| !excluded.contains(p))
        });
        rows.push(TableRow {
            n_qubits: n,
            runs: runs_per_n,
            expected,
            observed,
            matched,
            exclusion_cross_check,
            extremal_entangled_fraction: report.extremal_entangled_fraction,
        });
    }
    let artifact = TableArtifact {
        seed,
        runs_per_n,
        rows,
    };
    if let Some(dir) = output_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        let json = serde_json::to_string_pretty(&artifact).expect("artifact serializes");
        std::fs::write(dir.join("rank_table.json"), json)
            .map_err(|e| format!("rank_table.json: {e}"))?;
        std::fs::write(dir.join("rank_table.txt"), render_table(&artifact))
            .map_err(|e| format!("rank_table.txt: {e}"))?;
    }
    Ok(artifact)
}

/// Plain-text rendering of the table.
pub fn render_table(artifact: &TableArtifact) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "extremal entangled rank profiles ({} runs per n, seed {})",
        artifact.runs_per_n, artifact.seed
    );
    let _ = writeln!(
        out,
        "{:>3} | {:<34} | {:<34} | {:>8} | match | exclusion",
        "n", "observed", "expected", "fraction"
    );
    for row in &artifact.rows {
        let _ = writeln!(
            out,
            "{:>3} | {:<34} | {:<34} | {:>8.4} | {:<5} | {}",
            row.n_qubits,
            row.observed.join(" "),
            row.expected.join(" "),
            row.extremal_entangled_fraction,
            if row.matched { "yes" } else { "NO" },
            match row.exclusion_cross_check {
                Some(true) => "clean",
                Some(false) => "VIOLATED",
                None => "-",
            }
        );
    }
    out
}
