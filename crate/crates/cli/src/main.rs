use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod config;

use commands::{Outcome, Output};
use config::{ConfigError, RunConfig};

/// Tripod-atom phase gate: steady states, susceptibility sweeps, gate
/// reports and operating-point searches.
#[derive(Debug, Parser)]
#[command(name = "tripod-qpg", version)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Built-in configuration: fig2, fig4, fig5, quantum, semiclassical or kerr-free.
    /// `TRIPOD_QPG_PRESET_DIR` replaces the built-in set with `<dir>/<name>.toml`.
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Output file; stdout when omitted. A provenance sidecar `<out>.meta.json`
    /// is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format. Sweeps default to csv, reports to json.
    #[arg(long, global = true)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Bloch steady state: populations, coherences and solver residual.
    SteadyState,
    /// Evaluate observables over a one-dimensional grid.
    Sweep,
    /// Truth table and conditional phase of the gate.
    Gate,
    /// Rescale length or density until the conditional phase hits the target.
    SolvePi,
    /// Fractional phase change under a pump or detuning perturbation.
    Sensitivity,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::SteadyState => "steady-state",
            Command::Sweep => "sweep",
            Command::Gate => "gate",
            Command::SolvePi => "solve-pi",
            Command::Sensitivity => "sensitivity",
        }
    }
}

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_NO_SOLUTION: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return EXIT_CONFIG;
    }
    match err.downcast_ref::<tripod_core::Error>() {
        Some(tripod_core::Error::NoSolution(_)) => EXIT_NO_SOLUTION,
        Some(
            tripod_core::Error::InvalidParameter { .. }
            | tripod_core::Error::InvalidAxis(_)
            | tripod_core::Error::InvalidSweep(_),
        ) => EXIT_CONFIG,
        Some(_) => EXIT_NUMERIC,
        None => 1,
    }
}

fn render(outcome: &Outcome, format: Format) -> anyhow::Result<String> {
    Ok(match (&outcome.output, format) {
        (Output::Table(t), Format::Csv) => t.to_csv(),
        (Output::Table(t), Format::Json) => serde_json::to_string_pretty(t)? + "\n",
        (Output::Report(v), Format::Json) => serde_json::to_string_pretty(v)? + "\n",
        (Output::Report(v), Format::Csv) => commands::flatten_csv(v),
    })
}

fn write_sidecar(
    out: &Path,
    cli: &Cli,
    source: &str,
    config: &RunConfig,
    format: Format,
) -> anyhow::Result<()> {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli.command.name(),
        "source": source,
        "format": format!("{format:?}").to_lowercase(),
        "convention": commands::convention(),
        "created_unix": created,
        "config": config,
    });
    std::fs::write(&name, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("cannot write {}", PathBuf::from(&name).display()))
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let (config, source) = match (&cli.config, &cli.preset) {
        (Some(path), _) => (RunConfig::load(path)?, format!("config:{}", path.display())),
        (None, Some(name)) => (RunConfig::preset(name)?, format!("preset:{name}")),
        (None, None) => {
            return Err(ConfigError("give --config <path> or --preset <name>".into()).into())
        }
    };
    let outcome = match cli.command {
        Command::SteadyState => commands::steady(&config)?,
        Command::Sweep => commands::sweep_table(&config)?,
        Command::Gate => commands::gate(&config)?,
        Command::SolvePi => commands::solve(&config)?,
        Command::Sensitivity => commands::sensitivity_report(&config)?,
    };
    let format = cli.format.unwrap_or(match outcome.output {
        Output::Table(_) => Format::Csv,
        Output::Report(_) => Format::Json,
    });
    let text = render(&outcome, format)?;
    if let Some(note) = &outcome.summary {
        eprint!("{note}");
    }
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text)
                .with_context(|| format!("cannot write {}", path.display()))?;
            write_sidecar(path, cli, &source, &config, format)?;
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
