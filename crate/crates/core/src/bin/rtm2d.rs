//! Command-line driver: run one experiment recipe per invocation.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 1 I/O or other failure.

use clap::{Args, Parser, Subcommand};
use rtm2d_core::error::Error;
use rtm2d_core::harness::{run_experiment, ExperimentConfig, Mode};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rtm2d",
    about = "2D acoustic scattering synthesis and phaseless RTM imaging",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a scattering dataset file.
    Synth(RunArgs),
    /// Compute a phaseless RTM image (from a dataset file or by synthesis).
    Image(RunArgs),
    /// Compare phaseless and full-phase images with decomposition metrics.
    Compare(RunArgs),
    /// Compare imaging values against the resolution-theory reference.
    Oracle(RunArgs),
    /// Image across a list of noise levels and write a noise report.
    #[command(name = "noise-sweep")]
    NoiseSweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment recipe (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the probe wavenumber (replaces k / wavelengths).
    #[arg(long)]
    k: Option<f64>,
    /// Override the noise level list with a single value.
    #[arg(long)]
    mu: Option<f64>,
    /// Override the noise seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn apply(args: &RunArgs, mode: Mode, cfg: &mut ExperimentConfig) {
    cfg.mode = mode;
    if let Some(k) = args.k {
        cfg.k = Some(k);
        cfg.wavelengths = None;
    }
    if args.mu.is_some() || args.seed.is_some() {
        let mut noise = cfg.noise();
        if let Some(mu) = args.mu {
            noise.mu = vec![mu];
        }
        if let Some(seed) = args.seed {
            noise.seed = seed;
        }
        cfg.noise = Some(noise);
    }
    if let Some(dir) = &args.out_dir {
        cfg.outputs.dir = dir.clone();
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 1,
        e if e.is_config() => 2,
        Error::Geometry(_) => 2, // bad scene in the recipe
        _ => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (args, mode) = match &cli.command {
        Command::Synth(a) => (a, Mode::Synth),
        Command::Image(a) => (a, Mode::Image),
        Command::Compare(a) => (a, Mode::Compare),
        Command::Oracle(a) => (a, Mode::Oracle),
        Command::NoiseSweep(a) => (a, Mode::NoiseSweep),
    };
    let mut cfg = match ExperimentConfig::load(&args.config) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    apply(args, mode, &mut cfg);
    match run_experiment(&cfg) {
        Ok(summary) => {
            println!("done: {} file(s) written", summary.files.len());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
