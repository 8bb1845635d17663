use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use codedmm_cli::config::ExperimentConfig;
use codedmm_cli::demo::{run_demo, DemoOutcome};
use codedmm_cli::metrics_cmd::run_metrics;
use codedmm_cli::regularity::{self, run_regularity};
use codedmm_cli::sweep::{render_csv, run_sweep};

/// Coded distributed matrix multiplication experiments.
#[derive(Parser)]
#[command(name = "codedmm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo storage sweep over (scheme, budget) pairs, written as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Override the trial count from the config file.
        #[arg(long)]
        trials: Option<usize>,
        /// Override the RNG seed (default: file, then $CODEDMM_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Stop zig-zag schemes as soon as the received set decodes.
        #[arg(long)]
        optimistic_stop: bool,
    },
    /// Empirical regularity of interpolation systems over random profiles.
    VerifyRegularity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        profiles: Option<usize>,
        #[arg(long)]
        draws: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run one real coded multiplication end to end and print the report.
    DemoExec {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Debug: force two workers onto the same evaluation point.
        #[arg(long)]
        force_duplicate_points: bool,
    },
    /// Print the cost metrics of each configured scheme at one budget.
    Metrics {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        budget: usize,
    },
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, String> {
    ExperimentConfig::load(path)
}

fn run() -> Result<ExitCode, String> {
    match Cli::parse().command {
        Command::Sweep {
            config,
            output,
            trials,
            seed,
            optimistic_stop,
        } => {
            let cfg = load(&config)?;
            let trials = trials.unwrap_or(cfg.sim.trials);
            let seed = cfg.seed(seed);
            let optimistic = optimistic_stop || cfg.sim.optimistic_stop;
            let rows = run_sweep(&cfg, trials, seed, optimistic)?;
            std::fs::write(&output, render_csv(&rows))
                .map_err(|e| format!("cannot write {}: {e}", output.display()))?;
            eprintln!(
                "wrote {} rows ({} infeasible) to {}",
                rows.len(),
                rows.iter().filter(|r| r.detail.is_none()).count(),
                output.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyRegularity {
            config,
            output,
            profiles,
            draws,
            seed,
        } => {
            let cfg = load(&config)?;
            let reg = cfg.regularity.clone();
            let profiles = profiles
                .or(reg.as_ref().map(|r| r.profiles))
                .unwrap_or(50);
            let draws = draws.or(reg.as_ref().map(|r| r.draws)).unwrap_or(50);
            let seed = cfg.seed(seed);
            let rows = run_regularity(&cfg, profiles, draws, seed)?;
            std::fs::write(&output, regularity::render_csv(&rows))
                .map_err(|e| format!("cannot write {}: {e}", output.display()))?;
            eprintln!("wrote {} rows to {}", rows.len(), output.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::DemoExec {
            config,
            seed,
            force_duplicate_points,
        } => {
            let cfg = load(&config)?;
            let seed = cfg.seed(seed);
            let mut stdout = std::io::stdout();
            match run_demo(&cfg, seed, force_duplicate_points, &mut stdout)? {
                DemoOutcome::Ok => Ok(ExitCode::SUCCESS),
                DemoOutcome::DecodeFailed(msg) => {
                    eprintln!("decode failed: {msg}");
                    Ok(ExitCode::from(1))
                }
                DemoOutcome::Infeasible(msg) => {
                    eprintln!("infeasible: {msg}");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Metrics { config, budget } => {
            let cfg = load(&config)?;
            let mut stdout = std::io::stdout();
            run_metrics(&cfg, budget, &mut stdout)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
