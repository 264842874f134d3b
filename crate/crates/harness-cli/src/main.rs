use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use harness_cli::config::{apply_overrides, parse_config, BackendChoice, ExperimentKind, Overrides};
use harness_cli::error::{HarnessError, Result};
use harness_cli::runner;

/// Experiment runner: reads a JSON config, runs the named experiment, and
/// writes deterministic CSV result files.
#[derive(Parser, Debug)]
#[command(name = "hdosc", version, about)]
struct Cli {
    /// Which experiment to run; must match the config's `experiment` tag.
    #[arg(value_enum)]
    experiment: ExperimentKind,

    /// Path to the JSON config file.
    #[arg(long)]
    config: PathBuf,

    /// Override the config's base seed (experiments with randomness only).
    #[arg(long)]
    seed: Option<u64>,

    /// Override the config's backend selection (graph and resonator only).
    #[arg(long, value_enum)]
    backend: Option<BackendChoice>,

    /// Override the config's output path.
    #[arg(long)]
    out: Option<String>,

    /// After the run, evaluate the config's thresholds; exit 4 on failure.
    #[arg(long)]
    check: bool,
}

fn init_thread_pool() -> Result<()> {
    let Ok(raw) = std::env::var("HDOSC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        HarnessError::Config(format!(
            "HDOSC_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))
}

fn real_main(cli: Cli) -> Result<bool> {
    init_thread_pool()?;

    let text = std::fs::read_to_string(&cli.config).map_err(|e| {
        HarnessError::Config(format!("cannot read config {}: {e}", cli.config.display()))
    })?;
    let mut config = parse_config(&text)?;
    if config.kind() != cli.experiment {
        return Err(HarnessError::Config(format!(
            "config is for {:?} but the command line asked for {:?}",
            config.kind().name(),
            cli.experiment.name()
        )));
    }
    apply_overrides(
        &mut config,
        &Overrides {
            seed: cli.seed,
            backend: cli.backend,
            out: cli.out.clone(),
        },
    )?;
    config.validate()?;

    let output = runner::run(&config)?;
    for file in &output.files {
        if let Some(parent) = std::path::Path::new(&file.path).parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(&file.path, &file.bytes)?;
        println!("wrote {}", file.path);
    }

    if cli.check {
        for line in &output.check.lines {
            let tag = if line.passed { "PASS" } else { "FAIL" };
            println!("check: {tag} — {}", line.label);
        }
        return Ok(output.check.passed());
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
