use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use szego_lab::runner::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "szego-lab", version, about = "Perturbed cubic Szegő soliton experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    plots: bool,
    /// Worker threads; SZEGO_LAB_THREADS takes precedence.
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the PDE and write the trajectory and conservation report.
    Simulate(Common),
    /// Integrate the effective dynamics on the soliton manifold.
    Effective(Common),
    /// Decompose a PDE run and compare with the effective dynamics.
    Track(Common),
    /// Tracked runs over eps_list with fitted ε-exponents.
    Sweep(Common),
    /// Run the acceptance suite.
    Validate(Common),
}

fn run(cli: Cli) -> szego_lab::Result<bool> {
    let (common, needs_config) = match &cli.command {
        Command::Validate(c) => (c, false),
        Command::Simulate(c) | Command::Effective(c) | Command::Track(c) | Command::Sweep(c) => (c, true),
    };
    runner::configure_threads(runner::resolve_threads(common.parallel)?);
    let cfg = match &common.config {
        Some(p) => Some(ExperimentConfig::from_path(p)?),
        None if needs_config => {
            return Err(szego_lab::Error::Config { path: "--config".into(), message: "required".into() })
        }
        None => None,
    };
    let out = common
        .out
        .clone()
        .or_else(|| cfg.as_ref().map(|c| c.out.clone()))
        .unwrap_or_else(|| PathBuf::from("out"));
    let plots = common.plots;
    match (&cli.command, cfg.as_ref()) {
        (Command::Simulate(_), Some(c)) => print_json(&runner::cmd_simulate(c, &out, plots)?),
        (Command::Effective(_), Some(c)) => print_json(&runner::cmd_effective(c, &out, plots)?),
        (Command::Track(_), Some(c)) => print_json(&runner::cmd_track(c, &out, plots)?),
        (Command::Sweep(_), Some(c)) => print_json(&runner::cmd_sweep(c, &out, plots)?.slopes),
        (Command::Validate(_), c) => {
            let s = runner::cmd_validate(c, &out)?;
            let failed: Vec<String> = s.criteria.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
            if failed.is_empty() {
                println!("all {} criteria passed", s.criteria.len());
            } else {
                println!("failed criteria: {}", failed.join(", "));
            }
            return Ok(s.passed);
        }
        _ => unreachable!("config presence checked above"),
    }
    Ok(true)
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).unwrap_or_default());
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(runner::exit_code(&e))
        }
    }
}
