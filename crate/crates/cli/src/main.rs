use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crescendo_cli::{load_config, run_scenario_in, verify, ScenarioKind};

/// Moment-closure experiments for linear transport.
#[derive(Parser)]
#[command(name = "crescendo", version)]
struct Cli {
    /// Directory receiving scenario output.
    #[arg(long, env = "CRESCENDO_OUTPUT_ROOT", default_value = "output", global = true)]
    output_root: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a configuration file.
    Run { config: PathBuf },
    /// Run the verification suites.
    Verify {
        /// Cells used by the moment-preservation suite.
        #[arg(long, default_value_t = 400)]
        n_cells: usize,
    },
    /// List the available scenarios.
    ListScenarios,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListScenarios => {
            for kind in ScenarioKind::ALL {
                println!("{:<10} {}", kind.name(), kind.description());
            }
            ExitCode::SUCCESS
        }
        Command::Verify { n_cells } => {
            let suites = verify::run_all(n_cells);
            for s in &suites {
                println!("{}", s.summary());
            }
            if suites.iter().all(|s| s.ok()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Run { config } => run(&config, &cli.output_root),
    }
}

fn run(path: &Path, root: &Path) -> ExitCode {
    let config = match load_config(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    match run_scenario_in(&config, root, path.parent()) {
        Ok(report) => {
            print!("{}", report.render());
            if report.success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
