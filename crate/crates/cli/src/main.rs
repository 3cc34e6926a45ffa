use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vortex_kg::Exec;
use vortex_kg_cli::{run_config, validate_config, RunOptions, Scenario, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "vortex-kg",
    version,
    about = "Run vortex-filament / Klein-Gordon scenarios from TOML configs"
)]
struct Cli {
    /// Run every data-parallel loop on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario and write its outputs under `--out`.
    Run {
        config: PathBuf,
        /// Root directory; the run goes to `<out>/<name>/`.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
    /// Print the scenario kinds a config may use.
    ListScenarios,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let result = match cli.command {
        Command::Run { config, out } => ScenarioConfig::load(&config).and_then(|c| {
            let manifest = run_config(
                &c,
                &RunOptions {
                    out_root: out.clone(),
                    exec,
                },
            )?;
            println!(
                "wrote {} files to {} in {:.2}s",
                manifest.files.len() + 1,
                out.join(&c.name).display(),
                manifest.wall_clock_seconds
            );
            Ok(())
        }),
        Command::Validate { config } => ScenarioConfig::load(&config).and_then(|c| {
            validate_config(&c)?;
            println!("{}: ok ({})", config.display(), c.scenario.kind());
            Ok(())
        }),
        Command::ListScenarios => {
            for kind in Scenario::KINDS {
                println!("{kind}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
