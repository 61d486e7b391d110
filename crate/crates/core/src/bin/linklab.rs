use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use linklab::analytics::Method;
use linklab::harness::{run_sweep, write_outputs, HarnessError, Overrides, Preset, RunConfig};

const EXIT_FATAL: u8 = 3;

#[derive(Parser)]
#[command(version, about = "Outage and DPSK BER sweeps for multi-hop hybrid FSO/RF relay links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the average SNR and write <name>.csv and <name>.json.
    ///
    /// SNRs are power decibels (γ = 10^(dB/10)); the FSO and RF branches
    /// share the swept average SNR. LINKLAB_THREADS caps the worker count.
    Run {
        /// JSON run config; optional when --preset is given.
        #[arg(long, required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Built-in figure preset (fig2 … fig7); replaces the config's curves.
        #[arg(long, value_parser = parse_preset)]
        preset: Option<Preset>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Monte-Carlo seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated subset of closed,series,asymptotic,quadrature,mc.
        #[arg(long, value_delimiter = ',', value_parser = parse_method)]
        methods: Option<Vec<Method>>,
        /// Monte-Carlo trials per point.
        #[arg(long)]
        trials: Option<u64>,
    },
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    Preset::parse(s).ok_or_else(|| format!("unknown preset {s:?}; expected fig2 … fig7"))
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::parse(s).ok_or_else(|| format!("unknown method {s:?}; expected closed, series, asymptotic, quadrature or mc"))
}

fn configure_threads() -> Result<(), HarnessError> {
    let Ok(text) = std::env::var("LINKLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| HarnessError::Config(format!("LINKLAB_THREADS must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| HarnessError::Fatal(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    let Command::Run { config, preset, out_dir, seed, methods, trials } = cli.command;
    configure_threads()?;
    let base = match &config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::from_json("{}")?,
    };
    let cfg = base.resolve(&Overrides { preset, methods, seed, trials })?;
    let record = run_sweep(&cfg)?;
    for skipped in &record.skipped {
        eprintln!("note: {skipped} skipped, the method does not apply to this curve");
    }
    let failed: Vec<_> = record.rows.iter().filter(|r| r.value.is_none()).collect();
    if !failed.is_empty() {
        eprintln!("note: {} of {} points carry no value (see the error field in the JSON)", failed.len(), record.rows.len());
    }
    for row in failed.iter().filter(|r| r.fatal) {
        eprintln!("error: {}/{} at {} dB: {}", row.curve, row.method, row.gamma_avg_db, row.error.as_deref().unwrap_or(""));
    }
    let (csv, json) = write_outputs(&record, &out_dir)?;
    println!("{}", csv.display());
    println!("{}", json.display());
    Ok(!record.has_fatal())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FATAL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
