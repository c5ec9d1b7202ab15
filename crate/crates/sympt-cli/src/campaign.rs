//! Extremal-search campaigns: seeded parallel runs, frequency tables,
//! and CSV/JSON persistence.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use sympt_core::classify::Verdict;
use sympt_core::dicke::SymmetricState;
use sympt_core::extremal::{run_to_extremal_with_rng, SearchOpts, SearchStatus, SearchTrajectory};
use sympt_core::spectra::RankProfile;

use crate::statefile;

/// Campaign parameters.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub n_qubits: usize,
    pub runs: usize,
    pub seed: u64,
    pub rank_tol: f64,
    pub target_profile: Option<RankProfile>,
    pub output_dir: Option<PathBuf>,
    pub parallelism: usize,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.runs < 1 {
            return Err("runs must be >= 1".into());
        }
        if !(4..=30).contains(&self.n_qubits) {
            return Err(format!("n_qubits {} outside 4..=30", self.n_qubits));
        }
        if !(self.rank_tol.is_finite() && self.rank_tol > 0.0) {
            return Err("rank tolerance must be positive".into());
        }
        Ok(())
    }
}

/// Per-run summary row.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub run_index: usize,
    pub seed: u64,
    pub n_steps: usize,
    pub terminal_profile: String,
    pub extremal: bool,
    /// True for extremal terminals of rank above one.
    pub entangled: bool,
    pub verdict: String,
    pub status: String,
    pub wall_ms: u128,
}

/// Aggregated campaign outcome.
#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub n_qubits: usize,
    pub runs: usize,
    pub seed: u64,
    pub rank_tol: f64,
    /// Terminal-profile frequencies, extremal entangled terminals
    /// prefixed `E`, everything else `S`.
    pub profile_frequencies: BTreeMap<String, usize>,
    pub extremal_entangled_fraction: f64,
    /// Frequencies of the profile reached by the first step of each run
    /// (the maximal profile minus one rank drop).
    pub first_step_profiles: BTreeMap<String, usize>,
    pub records: Vec<RunRecord>,
}

impl CampaignReport {
    /// Profiles of the extremal entangled terminals, deduplicated.
    pub fn entangled_profiles(&self) -> Vec<String> {
        let mut set: Vec<String> = self
            .records
            .iter()
            .filter(|r| r.entangled)
            .map(|r| r.terminal_profile.clone())
            .collect();
        set.sort();
        set.dedup();
        set
    }
}

fn status_name(status: SearchStatus) -> &'static str {
    match status {
        SearchStatus::Extremal => "extremal",
        SearchStatus::TargetReached => "target-reached",
        SearchStatus::AbortedDegenerate => "aborted-degenerate",
        SearchStatus::AbortedStepLimit => "aborted-step-limit",
    }
}

fn verdict_name(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Separable => "separable",
        Verdict::GenericallySeparable => "generically-separable",
        Verdict::CandidateEntangled => "candidate-entangled",
    }
}

/// One seeded search run; stream `run_index` of the campaign generator.
pub fn single_run(cfg: &CampaignConfig, run_index: usize) -> (SearchTrajectory, RunRecord) {
    let opts = SearchOpts {
        rank_tol: cfg.rank_tol,
        target_profile: cfg.target_profile.clone(),
        ..SearchOpts::default()
    };
    let initial = SymmetricState::maximally_mixed(cfg.n_qubits);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(run_index as u64);
    let started = Instant::now();
    let trajectory = run_to_extremal_with_rng(&initial, &mut rng, cfg.seed, &opts)
        .expect("search runs cannot fail on a valid initial state");
    let wall_ms = started.elapsed().as_millis();
    let entangled = trajectory.terminal_extremal && trajectory.terminal_profile.state_rank() > 1;
    let record = RunRecord {
        run_index,
        seed: cfg.seed,
        n_steps: trajectory.steps.len(),
        terminal_profile: trajectory.terminal_profile.to_string(),
        extremal: trajectory.terminal_extremal,
        entangled,
        verdict: verdict_name(trajectory.terminal_classification.verdict).to_string(),
        status: status_name(trajectory.status).to_string(),
        wall_ms,
    };
    (trajectory, record)
}

/// Runs the campaign on a worker pool of `cfg.parallelism` threads.
///
/// Reports are deterministic for a fixed `(seed, runs, n_qubits,
/// rank_tol)` regardless of parallelism (wall times excepted): every run
/// draws from its own counter-keyed stream and results merge in run
/// order. Extremal entangled terminals are saved as state files in the
/// output directory.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport, String> {
    cfg.validate()?;
    if let Some(dir) = &cfg.output_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        let probe = dir.join(".write-probe");
        std::fs::write(&probe, b"ok").map_err(|e| format!("output dir not writable: {e}"))?;
        let _ = std::fs::remove_file(&probe);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism.max(1))
        .build()
        .map_err(|e| format!("worker pool: {e}"))?;
    let outcomes: Vec<(SearchTrajectory, RunRecord)> = pool.install(|| {
        (0..cfg.runs)
            .into_par_iter()
            .map(|i| single_run(cfg, i))
            .collect()
    });

    let mut profile_frequencies = BTreeMap::new();
    let mut first_step_profiles = BTreeMap::new();
    let mut records = Vec::with_capacity(cfg.runs);
    let mut entangled_count = 0usize;
    for (trajectory, record) in &outcomes {
        let tag = if record.entangled { "E" } else { "S" };
        *profile_frequencies
            .entry(format!("{tag} {}", record.terminal_profile))
            .or_insert(0) += 1;
        if let Some(first) = trajectory.steps.first() {
            *first_step_profiles
                .entry(first.profile.to_string())
                .or_insert(0) += 1;
        }
        if record.entangled {
            entangled_count += 1;
        }
        records.push(record.clone());
    }

    let report = CampaignReport {
        n_qubits: cfg.n_qubits,
        runs: cfg.runs,
        seed: cfg.seed,
        rank_tol: cfg.rank_tol,
        profile_frequencies,
        extremal_entangled_fraction: entangled_count as f64 / cfg.runs as f64,
        first_step_profiles,
        records,
    };

    if let Some(dir) = &cfg.output_dir {
        write_csv(&dir.join("report.csv"), &report).map_err(|e| format!("report.csv: {e}"))?;
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(dir.join("report.json"), json).map_err(|e| format!("report.json: {e}"))?;
        for (trajectory, record) in &outcomes {
            if record.entangled {
                let path = dir.join(format!("state_run{:05}.json", record.run_index));
                statefile::save_state(&path, &trajectory.terminal, cfg.rank_tol)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
        }
    }
    Ok(report)
}

/// Writes the per-run table: `run_index, seed, n_steps,
/// terminal_profile, extremal, verdict, wall_ms`.
pub fn write_csv(path: &Path, report: &CampaignReport) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(
        f,
        "run_index,seed,n_steps,terminal_profile,extremal,verdict,wall_ms"
    )?;
    for r in &report.records {
        writeln!(
            f,
            "{},{},{},{},{},{},{}",
            r.run_index,
            r.seed,
            r.n_steps,
            r.terminal_profile,
            r.extremal as u8,
            r.verdict,
            r.wall_ms
        )?;
    }
    Ok(())
}

/// Short human-readable summary of a campaign.
pub fn render_summary(report: &CampaignReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "campaign: {} qubits, {} runs, seed {}, rank tol {:.1e}",
        report.n_qubits, report.runs, report.seed, report.rank_tol
    );
    let _ = writeln!(
        out,
        "extremal entangled fraction: {:.4}",
        report.extremal_entangled_fraction
    );
    let _ = writeln!(out, "terminal profiles (E = extremal entangled):");
    for (profile, count) in &report.profile_frequencies {
        let _ = writeln!(out, "  {profile}: {count}");
    }
    if !report.first_step_profiles.is_empty() {
        let _ = writeln!(out, "first-step profiles:");
        for (profile, count) in &report.first_step_profiles {
            let _ = writeln!(out, "  {profile}: {count}");
        }
    }
    out
}
