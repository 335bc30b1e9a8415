use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use otoc_sim::{parse_config_with, run_scenario, write_csv, Overrides, Scenario, SimError};

/// Runs one OTOC experiment described by a TOML config.
#[derive(Debug, Parser)]
#[command(name = "otoc", version)]
struct Cli {
    /// Experiment config; optional when --scenario names a scenario that
    /// needs no parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `[output] dir`).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Random seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core. Affects speed only.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Scenario (overrides the config).
    #[arg(long, value_parser = parse_scenario)]
    scenario: Option<Scenario>,
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: SimError| e.to_string())
}

fn run(cli: Cli) -> Result<bool, SimError> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| SimError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => String::new(),
    };
    let overrides = Overrides {
        scenario: cli.scenario,
        seed: cli.seed,
        output: cli.output,
    };
    let cfg = parse_config_with(&text, &overrides)?;
    let result = run_scenario(&cfg, cli.threads)?;
    let files = write_csv(&result, &cfg.output)?;
    for c in &result.checks {
        println!(
            "{} {:<32} measured {:.3e}  tolerance {:.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.tolerance
        );
    }
    eprintln!(
        "{}: wrote {} files to {} in {:.2} s",
        cfg.scenario,
        files.len(),
        cfg.output.display(),
        result.wall_time
    );
    Ok(result.all_passed())
}

fn main() -> ExitCode {
    // clap exits with 2 on bad arguments, which is taken by dimension refusals
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
