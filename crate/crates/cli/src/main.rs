use std::path::PathBuf;
use std::process::ExitCode;

use biphoton_cli::{catalog, list_scenarios, run_scenario, CliError, RunOptions, Scenario, Source};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "biphoton", version, about = "Chirped-QPM biphoton simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or bundled scenario and write its tables.
    Run {
        /// Path to a scenario file, or a scenario name from `list`.
        scenario: String,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the number of spectral grid points.
        #[arg(long)]
        points: Option<usize>,
        /// Skip the FFT spot check against the direct sum.
        #[arg(long)]
        seedless: bool,
        /// Also write a gnuplot script next to each table.
        #[arg(long)]
        gnuplot: bool,
    },
    /// List bundled and user scenarios.
    List,
    /// Parse and check a scenario without running it.
    Validate { scenario: String },
}

fn load(arg: &str) -> Result<(catalog::Resolved, Scenario), CliError> {
    let resolved = catalog::resolve(arg)?;
    let scenario = Scenario::from_toml_str(&resolved.text)?;
    Ok((resolved, scenario))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            scenario,
            out,
            points,
            seedless,
            gnuplot,
        } => {
            let (resolved, s) = load(&scenario)?;
            let name = s.name.clone().unwrap_or(resolved.name);
            let opts = RunOptions {
                points,
                seedless,
                gnuplot,
                base_dir: resolved.base_dir,
            };
            let report = run_scenario(&s, &name, &opts)?;
            report.write_to(&out)?;
            for (file, _) in &report.files {
                println!("{}", out.join(file).display());
            }
        }
        Command::List => {
            for entry in list_scenarios() {
                match entry.source {
                    Source::Bundled => println!("{:<32} bundled", entry.name),
                    Source::User(path) => println!("{:<32} user ({})", entry.name, path.display()),
                }
            }
        }
        Command::Validate { scenario } => {
            let (resolved, s) = load(&scenario)?;
            println!("{}: ok", s.name.unwrap_or(resolved.name));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
