use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sympt_cli::campaign::{render_summary, run_campaign, CampaignConfig};
use sympt_cli::classify_cmd::{classify_file, render_human, EXIT_PARSE_ERROR};
use sympt_cli::oracle::{render_report, run_oracle_check};
use sympt_cli::tables::{render_table, reproduce_rank_table};
use sympt_core::spectra::RankProfile;

/// Symmetric multiqubit states with positive partial transpositions:
/// extremal-state search, classification, and rank tables.
#[derive(Parser)]
#[command(name = "sympt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a randomized extremal-search campaign.
    Search(SearchArgs),
    /// Classify a saved state file.
    Classify(ClassifyArgs),
    /// Reproduce the extremal rank table over a range of qubit counts.
    Table(TableArgs),
    /// Cross-check compressed partial transpositions against the
    /// full-space computation.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct SearchArgs {
    /// Number of qubits (4..=30).
    #[arg(long, default_value_t = 4)]
    qubits: usize,
    /// Number of independent runs.
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// Campaign seed; run i draws from stream i of this seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative rank tolerance (default 1e-8, or SYMPT_DEFAULT_TOL).
    #[arg(long)]
    tol: Option<f64>,
    /// Only lower ranks above this profile, e.g. `5,7,8`.
    #[arg(long, value_name = "a,b,c")]
    target_ranks: Option<String>,
    /// Worker threads.
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    /// Output directory for reports and extremal states.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Path to a sympt-state-v1 JSON file.
    file: PathBuf,
    /// Relative rank tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Largest qubit count (table covers 4..=max).
    #[arg(long = "max-qubits", default_value_t = 8)]
    max_qubits: usize,
    /// Runs per qubit count.
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Largest qubit count to check (capped at 8).
    #[arg(long = "max-qubits", default_value_t = 8)]
    max_qubits: usize,
    /// Random states per qubit count.
    #[arg(long, default_value_t = 50)]
    states: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn rank_tol(flag: Option<f64>) -> f64 {
    flag.unwrap_or_else(sympt_cli::default_rank_tol)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Search(args) => {
            let target_profile = match args.target_ranks.as_deref().map(RankProfile::parse) {
                Some(Ok(p)) => Some(p),
                Some(Err(e)) => {
                    eprintln!("--target-ranks: {e}");
                    return ExitCode::from(2);
                }
                None => None,
            };
            let cfg = CampaignConfig {
                n_qubits: args.qubits,
                runs: args.runs,
                seed: args.seed,
                rank_tol: rank_tol(args.tol),
                target_profile,
                output_dir: args.out,
                parallelism: args.jobs,
            };
            match run_campaign(&cfg) {
                Ok(report) => {
                    print!("{}", render_summary(&report));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("search failed: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Classify(args) => match classify_file(&args.file, args.tol) {
            Ok((output, code)) => {
                if args.json {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&output).expect("serializes")
                    );
                } else {
                    print!("{}", render_human(&output));
                }
                ExitCode::from(code as u8)
            }
            Err(e) => {
                eprintln!("{}: {e}", args.file.display());
                ExitCode::from(EXIT_PARSE_ERROR as u8)
            }
        },
        Command::Table(args) => {
            match reproduce_rank_table(
                args.max_qubits,
                args.runs,
                args.seed,
                rank_tol(args.tol),
                args.jobs,
                args.out.as_deref(),
            ) {
                Ok(artifact) => {
                    print!("{}", render_table(&artifact));
                    if artifact.all_matched() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("table failed: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::OracleCheck(args) => {
            let report =
                run_oracle_check(args.max_qubits, args.states, args.seed, rank_tol(args.tol));
            print!("{}", render_report(&report));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
