use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use lockup_core::batch::{
    five_attacks, run_batch, run_batch_sequential, summary_table, write_summary_csv, BatchItem,
    SummaryRow,
};
use lockup_core::config::{parse_scenario, RoadPreset, ScenarioFile};
use lockup_core::output::write_run;
use lockup_core::sim::{run_scenario, Termination};

const EXIT_INVALID: u8 = 1;
const EXIT_INTEGRATION: u8 = 2;

#[derive(Parser)]
#[command(
    name = "lockup",
    version,
    about = "Wheel-lockup brake attack simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its trajectory and manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Output file stem; defaults to the config file stem.
        #[arg(long)]
        name: Option<String>,
    },
    /// Run a predefined suite of scenarios.
    Batch {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, value_enum, default_value_t = Road::Dry)]
        road: Road,
        #[arg(long)]
        outdir: PathBuf,
        /// Base scenario the suite entries are derived from.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Run on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
    /// Print the switching-gain lower bounds for a scenario.
    Gains {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    FiveAttacks,
}

#[derive(Clone, Copy, ValueEnum)]
enum Road {
    Dry,
    Wet,
    Both,
}

impl Road {
    fn presets(self) -> &'static [RoadPreset] {
        match self {
            Road::Dry => &[RoadPreset::DryAsphalt],
            Road::Wet => &[RoadPreset::WetAsphalt],
            Road::Both => &[RoadPreset::DryAsphalt, RoadPreset::WetAsphalt],
        }
    }
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Invalid(anyhow::Error),
    Integration(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.into())
    }
}

fn load(path: &Path) -> anyhow::Result<ScenarioFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_scenario(&text).with_context(|| format!("in {}", path.display()))
}

fn cmd_run(config: &Path, out: &Path, name: Option<String>) -> Result<(), Failure> {
    let file = load(config)?;
    let name = name.unwrap_or_else(|| {
        config
            .file_stem()
            .map_or_else(|| "run".to_string(), |s| s.to_string_lossy().into_owned())
    });
    let scenario = file.build(&name)?;
    let start = Instant::now();
    let result = run_scenario(&scenario)?;
    let files = write_run(out, &file, &result, start.elapsed())?;
    let m = &result.metrics;
    println!(
        "{name}: success={} t_lockup={} rows={} -> {}",
        m.success,
        m.time_to_lockup
            .map_or("-".to_string(), |t| format!("{t:.4}")),
        result.samples.len(),
        files.csv.display()
    );
    match result.termination {
        Termination::Failed(why) => Err(Failure::Integration(why)),
        _ => Ok(()),
    }
}

fn cmd_batch(
    road: Road,
    outdir: &Path,
    config: Option<&Path>,
    sequential: bool,
) -> Result<(), Failure> {
    let base = match config {
        Some(path) => load(path)?,
        None => ScenarioFile::default(),
    };
    let items: Vec<BatchItem> = road
        .presets()
        .iter()
        .flat_map(|&r| five_attacks(&base, r))
        .collect();
    for item in &items {
        item.config.build(&item.name)?;
    }
    let outcomes = if sequential {
        run_batch_sequential(&items)
    } else {
        run_batch(&items)
    };
    let mut failed = Vec::new();
    for o in &outcomes {
        match &o.result {
            Ok(r) => {
                write_run(outdir, &o.item.config, r, o.elapsed)?;
                if let Termination::Failed(why) = &r.termination {
                    failed.push(format!("{}: {why}", r.name));
                }
            }
            Err(e) => failed.push(format!("{}: {e}", o.item.name)),
        }
    }
    let rows: Vec<SummaryRow> = outcomes.iter().map(SummaryRow::from_outcome).collect();
    write_summary_csv(&rows, &outdir.join("summary.csv"))?;
    print!("{}", summary_table(&rows));
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Integration(failed.join("; ")))
    }
}

fn cmd_gains(config: &Path) -> Result<(), Failure> {
    let file = load(config)?;
    let g = file.gain_bounds()?;
    let i = g.inputs;
    println!(
        "v_min = {} m/s, mu_max = {:.6}, mu_hat_max = {:.6}, nu = {}, nu_hat = {}",
        i.v_min, i.mu_max, i.mu_hat_max, i.nu, i.nu_hat
    );
    println!("k*' = {:.6}", g.k_star_prime);
    println!("k*  = {:.6}", g.k_star);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, out, name } => cmd_run(&config, &out, name),
        Command::Batch {
            suite: Suite::FiveAttacks,
            road,
            outdir,
            config,
            sequential,
        } => cmd_batch(road, &outdir, config.as_deref(), sequential),
        Command::Gains { config } => cmd_gains(&config),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Integration(why)) => {
            eprintln!("integration failed: {why}");
            ExitCode::from(EXIT_INTEGRATION)
        }
    }
}
