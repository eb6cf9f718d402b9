use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use irsfactory_cli::commands::{deploy_to, AxisValues};
use irsfactory_cli::{cmd_compare, cmd_simulate, cmd_sweep, FileConfig};
use irsfactory_core::engine::{EngineMode, SampleBudget};

/// Expected SNR, finite-blocklength capacity and outage of IRS-assisted links in a
/// factory with random blockages.
#[derive(Parser, Debug)]
#[command(name = "irsfactory", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the wall split, element grid and positions for a list of IRS counts.
    Deploy {
        #[command(flatten)]
        common: Common,
        /// IRS counts to tabulate.
        #[arg(long = "m", value_delimiter = ',', default_values_t = [1usize, 4, 8, 12, 16])]
        counts: Vec<usize>,
    },
    /// Monte Carlo metrics over the UE grid.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Grid aggregates over the cartesian product of one or more parameter axes.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Axis and values, e.g. `M=1,4,8,12,16`; repeat for a product sweep.
        /// Axes: M, h, lambdaB, PT.
        #[arg(long, required = true)]
        axis: Vec<AxisValues>,
    },
    /// Monte Carlo metrics paired with the closed-form SNR and capacity bound.
    Compare {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Geometric,
    Enumerated,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON configuration file; missing fields take reference defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (deploy prints to stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Realizations per UE position.
    #[arg(long, conflicts_with = "full")]
    samples: Option<usize>,
    /// Full-scale budget: 2500 blockage drops x 4000 fading draws per position.
    #[arg(long)]
    full: bool,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// UE grid spacing in metres.
    #[arg(long = "grid-res")]
    grid_res: Option<f64>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<FileConfig> {
        let mut cfg = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.engine.seed = seed;
        }
        if let Some(n) = self.samples {
            cfg.engine.samples = n;
            cfg.engine.drops = None;
            cfg.engine.draws = None;
        }
        if self.full {
            let b = SampleBudget::full();
            cfg.engine.samples = b.total();
            cfg.engine.drops = Some(b.drops);
            cfg.engine.draws = Some(b.draws);
        }
        if let Some(mode) = self.mode {
            cfg.engine.mode = match mode {
                ModeArg::Geometric => EngineMode::Geometric,
                ModeArg::Enumerated => EngineMode::Enumerated,
            };
        }
        if let Some(r) = self.grid_res {
            cfg.engine.grid_resolution_m = r;
            cfg.engine.subgrid = None;
        }
        Ok(cfg)
    }

    fn out(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Deploy { common, counts } => {
            deploy_to(&common.config()?, counts, common.out.as_deref())?;
        }
        Command::Simulate { common } => {
            let out = cmd_simulate(&common.config()?, &common.out())?;
            let s = out.report.summary;
            log::info!(
                "manifest {}: SNR mean {:.2} dB (min {:.2}), FB capacity mean {:.4} (min {:.4})",
                out.manifest_id,
                s.snr_db.mean,
                s.snr_db.min,
                s.fb_capacity.mean,
                s.fb_capacity.min
            );
        }
        Command::Sweep { common, axis } => {
            cmd_sweep(&common.config()?, axis, &common.out())?;
        }
        Command::Compare { common } => {
            cmd_compare(&common.config()?, &common.out())?;
        }
    }
    Ok(())
}

fn threads(cli: &Cli) -> Option<usize> {
    match &cli.command {
        Command::Deploy { common, .. }
        | Command::Simulate { common }
        | Command::Sweep { common, .. }
        | Command::Compare { common } => common.threads,
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match threads(&cli) {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("cannot start worker pool")?
            .install(|| run(cli)),
        None => run(cli),
    }
}
