use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use htlpp_cli::{
    read_weights_file, run, AiryParams, ContinuumParams, ConvergeParams, DiscreteParams, Experiment, GreedyParams,
    Manifest, RunConfig, StableParams, VERSION,
};

#[derive(Parser)]
#[command(name = "htlpp", version, about = "Heavy-tailed last-passage percolation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Master seed.
    #[arg(long, global = true, env = "HTLPP_SEED", default_value_t = 0)]
    seed: u64,
    /// Number of independent replicates.
    #[arg(long, global = true, default_value_t = 100)]
    replicates: usize,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice passage times T^(n).
    Discrete {
        #[command(flatten)]
        params: DiscreteParams,
        /// Whitespace-separated weights (row-major) used instead of random grids.
        #[arg(long)]
        weights_file: Option<PathBuf>,
    },
    /// Truncated continuum times T_k with the remainder diagnostic U_k.
    Continuum(ContinuumParams),
    /// Traces of the heavy-tailed Airy process and samples of Theta.
    Airy(AiryParams),
    /// Greedy paths, their measure and the multifractal spectrum.
    Greedy(GreedyParams),
    /// Stable-process directed percolation L(n, t).
    Stable(StableParams),
    /// KS distance between rescaled lattice times and the continuum limit.
    Converge(ConvergeParams),
    /// Repeat the run recorded in a manifest.
    Rerun {
        manifest: PathBuf,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        set_threads(threads)?;
    }
    let config = match cli.command {
        Command::Rerun { manifest } => {
            let m = Manifest::read(&manifest)?;
            if m.version != VERSION {
                eprintln!("warning: manifest written by version {}, running {VERSION}", m.version);
            }
            m.config
        }
        command => {
            let experiment = match command {
                Command::Discrete {
                    mut params,
                    weights_file,
                } => {
                    if let Some(path) = weights_file {
                        params.weights = Some(read_weights_file(&path)?);
                    }
                    Experiment::Discrete(params)
                }
                Command::Continuum(p) => Experiment::Continuum(p),
                Command::Airy(p) => Experiment::Airy(p),
                Command::Greedy(p) => Experiment::Greedy(p),
                Command::Stable(p) => Experiment::Stable(p),
                Command::Converge(p) => Experiment::Converge(p),
                Command::Rerun { .. } => unreachable!(),
            };
            RunConfig {
                master_seed: cli.seed,
                replicates: cli.replicates,
                experiment,
            }
        }
    };
    for path in run(&config, &cli.out)? {
        println!("{}", path.display());
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn set_threads(threads: usize) -> Result<()> {
    use anyhow::Context;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the worker pool")
}

#[cfg(not(feature = "parallel"))]
fn set_threads(_threads: usize) -> Result<()> {
    eprintln!("warning: built without the `parallel` feature; --threads is ignored");
    Ok(())
}
