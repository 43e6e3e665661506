//! `curl-homog`: numerical laboratory for boundary-value problems of the
//! form ∇×(A(x/ε)∇×u) + B(x/ε)u = F + ∇×G with tangential boundary data,
//! their periodic cell problems, and the ε-uniform estimates connecting the
//! two.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use curl_homog::config::{Config, Mode};
use curl_homog::{experiments, verify, CliError};

#[derive(Parser)]
#[command(
    name = "curl-homog",
    version,
    about = "Oscillating-coefficient curl-curl systems: cell problems, solves, sweeps, ladders, reductions, and self-checks"
)]
struct Cli {
    /// What to run: cell | solve | sweep | converge | reduce | verify
    /// (falls back to the config's "mode" key)
    mode: Option<Mode>,
    /// Path to a JSON configuration; every key has a default, so the flag
    /// may be omitted entirely
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for reports and plot data (overrides the config's
    /// out_dir)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for script compatibility; this build computes on one thread
    #[arg(long)]
    threads: Option<usize>,
}

fn run() -> Result<bool, CliError> {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
    }
    let cfg = match &cli.config {
        Some(p) => Config::from_json(&std::fs::read_to_string(p)?)?,
        None => Config::default(),
    };
    let mode = cli.mode.or(cfg.mode).ok_or_else(|| {
        CliError::Config(
            "no mode given: pass one of cell|solve|sweep|converge|reduce|verify \
             or set \"mode\" in the config"
                .into(),
        )
    })?;
    let out_dir = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&cfg.out_dir));

    let artifacts = match mode {
        Mode::Cell => experiments::run_cell(&cfg)?.artifacts,
        Mode::Solve => experiments::run_solve(&cfg)?.artifacts,
        Mode::Sweep => experiments::run_sweep(&cfg)?.artifacts,
        Mode::Converge => experiments::run_convergence(&cfg, false)?.artifacts,
        Mode::Reduce => experiments::run_reduce(&cfg)?.artifacts,
        Mode::Verify => verify::run_all(&cfg)?.artifacts,
    };
    artifacts.write(&out_dir)?;
    print!("{}", artifacts.summary);
    Ok(artifacts.passed)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
