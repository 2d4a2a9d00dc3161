use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use noma_outage::experiment::{
    curve_requests, parse_experiment_file, run_sweep, write_outputs, ExperimentSpec,
};
use noma_outage::Error;

/// Worker threads for sweeps and simulation; unset means one per core.
const WORKERS_ENV: &str = "NOMA_OUTAGE_WORKERS";

#[derive(Parser)]
#[command(
    name = "noma-outage",
    version,
    about = "Outage and throughput sweeps for CD/PD-NOMA user pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write CSV (and optionally SVG) output.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = ["fig1", "fig2", "fig3", "fig4"])]
        preset: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
        /// Override any configuration key.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Parse and check a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn exit_code(err: &Error) -> ExitCode {
    if err.is_non_convergence() {
        ExitCode::from(3)
    } else if err.is_config_error() || matches!(err.root(), Error::Io { .. }) {
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    }
}

fn configure_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("{WORKERS_ENV} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn describe(spec: &ExperimentSpec) -> String {
    format!(
        "{}: {} curves over {} SNR points",
        spec.run_name(),
        curve_requests(spec).len(),
        spec.grid.len()
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_workers() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match cli.command {
        Command::Validate { config } => match parse_experiment_file(&config, &[]) {
            Ok(spec) => {
                println!("ok: {}", describe(&spec));
                ExitCode::SUCCESS
            }
            Err(err) => {
                eprintln!("error: {err}");
                exit_code(&err)
            }
        },
        Command::Run {
            config,
            preset,
            trials,
            seed,
            out,
            svg,
            set,
        } => {
            let mut overrides = Vec::new();
            for kv in &set {
                let Some((k, v)) = kv.split_once('=') else {
                    eprintln!("error: --set expects KEY=VALUE, got `{kv}`");
                    return ExitCode::from(2);
                };
                overrides.push((k.trim().to_string(), v.trim().to_string()));
            }
            if let Some(p) = preset {
                overrides.push(("preset".into(), p));
            }
            if let Some(t) = trials {
                overrides.push(("trials".into(), t.to_string()));
            }
            if let Some(s) = seed {
                overrides.push(("seed".into(), s.to_string()));
            }
            if let Some(o) = out {
                overrides.push(("out_dir".into(), o.display().to_string()));
            }
            if svg {
                overrides.push(("svg".into(), "true".into()));
            }
            let result = parse_experiment_file(&config, &overrides).and_then(|spec| {
                eprintln!("running {}", describe(&spec));
                let output = run_sweep(&spec)?;
                for note in &output.notes {
                    eprintln!("note: {note}");
                }
                write_outputs(&spec, &output)
            });
            match result {
                Ok(paths) => {
                    for p in paths {
                        println!("{}", p.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    exit_code(&err)
                }
            }
        }
    }
}
