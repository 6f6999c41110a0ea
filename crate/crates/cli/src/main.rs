use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use camcov::commands;
use camcov::config::RunConfig;
use camcov::Result;

/// Coverage evaluation and placement optimization for camera networks.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Random seed, overriding `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report the coverage of a given deployment.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Camera poses (TOML, one [[camera]] table each).
        #[arg(long)]
        poses: PathBuf,
    },
    /// Optimize the poses of `optimizer.cameras` cameras.
    Optimize {
        #[command(flatten)]
        common: Common,
    },
    /// Place cameras one at a time and report the recognized-ratio curve.
    Heuristic {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_cameras: usize,
    },
}

fn load(common: &Common) -> Result<(RunConfig, PathBuf)> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg = cfg.with_seed(seed);
    }
    let out = common.out_dir.clone().unwrap_or_else(|| cfg.out_dir.clone());
    if cfg.threads > 0 {
        // only fails if a pool already exists, which is harmless here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global();
    }
    Ok((cfg, out))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evaluate { common, poses } => {
            let (cfg, out) = load(&common)?;
            let rep = commands::evaluate(&cfg, &poses, &out)?;
            println!("recognized ratio {:.4}, area {:.6} m² of {:.6} m²", rep.recognized_ratio, rep.recognized_area, rep.total_area);
        }
        Command::Optimize { common } => {
            let (cfg, out) = load(&common)?;
            let res = commands::optimize(&cfg, &out)?;
            println!("recognized ratio {:.4}, area {:.6} m²", res.best.recognized_ratio, res.best.fitness);
        }
        Command::Heuristic { common, max_cameras } => {
            let (cfg, out) = load(&common)?;
            for step in commands::heuristic(&cfg, max_cameras, &out)? {
                println!("{} cameras: recognized ratio {:.4}", step.cameras, step.recognized_ratio);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
