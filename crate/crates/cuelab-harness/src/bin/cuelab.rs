use clap::{Parser, Subcommand};
use cuelab_harness::config::Config;
use cuelab_harness::experiments::run_experiment;
use cuelab_harness::report;
use std::path::PathBuf;
use std::process::ExitCode;

/// Reproducible experiments comparing exact Toeplitz determinants, Monte
/// Carlo over the circular unitary ensemble, and closed-form predictors.
#[derive(Parser)]
#[command(name = "cuelab", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker thread count override.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Trace-moment Monte Carlo against rotation-invariance targets.
    Sample,
    /// Chaos-mass draws with barrier decompositions, plus the Gaussian
    /// reference checks.
    Mass,
    /// Determinant identities and the Monte Carlo product-expectation bridge.
    Toeplitz,
    /// Exact determinant ratios against every closed-form predictor.
    VerifyAsymptotics,
    /// Total-mass law against the Fyodorov-Bouchaud reference sampler.
    FbTest,
    /// Mesoscopic two-point ratio regression.
    CkScaling,
    /// Finite-difference vs contour form of the log-determinant derivative.
    DiffIdentity,
    /// Tiny end-to-end run.
    Smoke,
}

impl Command {
    fn experiment_name(&self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::Mass => "mass",
            Command::Toeplitz => "toeplitz",
            Command::VerifyAsymptotics => "verify-asymptotics",
            Command::FbTest => "fb-test",
            Command::CkScaling => "ck-scaling",
            Command::DiffIdentity => "diff-identity",
            Command::Smoke => "smoke",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> cuelab_harness::Result<bool> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.run.seed = seed;
    }
    if let Some(workers) = cli.workers {
        cfg.run.workers = workers;
    }
    if let Some(out) = &cli.out {
        cfg.run.out = out.clone();
    }
    cfg.validate()?;
    cuelab::par::set_worker_threads(cfg.run.workers);

    let outcome = run_experiment(cli.command.experiment_name(), &cfg)?;
    std::fs::create_dir_all(&cfg.run.out)
        .map_err(|e| cuelab_harness::Error::Io {
            path: cfg.run.out.display().to_string(),
            source: e,
        })?;
    for (name, contents) in &outcome.artifacts {
        let path = cfg.run.out.join(name);
        std::fs::write(&path, contents).map_err(|e| cuelab_harness::Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
    }
    let text = report::render(cfg.run.seed, cfg.run.workers, std::slice::from_ref(&outcome));
    let report_path = cfg.run.out.join(format!("report_{}.txt", outcome.name));
    std::fs::write(&report_path, &text).map_err(|e| cuelab_harness::Error::Io {
        path: report_path.display().to_string(),
        source: e,
    })?;
    print!("{text}");
    Ok(outcome.results.iter().all(|r| r.passed))
}
