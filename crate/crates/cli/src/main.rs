use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use cone_quantile::parse_rational;
use cone_quantile_cli::commands::{self, CmdResult, Failure, RegionRun};
use cone_quantile_cli::document::plot_cycle;
use cone_quantile_cli::input::{parse_row, read_cloud, read_cone};

/// Exact multivariate lower cone quantiles and Tukey depth regions.
#[derive(Parser)]
#[command(name = "cquant", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Univariate lower quantile and phi minimum of a one-column file.
    Uniquantile {
        file: PathBuf,
        #[arg(long)]
        p: String,
        /// Also solve the check-loss LP by exact simplex and compare.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        nudge: bool,
    },
    /// Lower C-quantile region for a cone given by generator rows.
    Region {
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        cone: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        nudge: bool,
    },
    /// Tukey depth region.
    Tukey {
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        nudge: bool,
        /// Remove redundant halfspaces from the region's H-representation.
        #[arg(long)]
        prune: bool,
    },
    /// Tukey depth of a point given as comma-separated coordinates.
    Depth { file: PathBuf, point: String },
    /// Check a region against the independent oracles.
    Verify {
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        cone: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        nudge: bool,
    },
}

fn parse_p(text: &str) -> CmdResult<cone_quantile::Rational> {
    parse_rational(text).context("--p").map_err(Failure::Input)
}

fn emit(run: &RegionRun, out: Option<PathBuf>, plot: Option<PathBuf>) -> CmdResult<()> {
    let json = run.document.to_json();
    match out {
        Some(path) => std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{json}"),
    }
    if let Some(path) = plot {
        match plot_cycle(&run.region.region) {
            Some(text) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
            None => eprintln!("note: --plot needs a nonempty bounded 2-D region; nothing written"),
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult<()> {
    match cli.command {
        Command::Uniquantile { file, p, check, nudge } => {
            let data = read_cloud(&file)?;
            print!("{}", commands::uniquantile(&data, &parse_p(&p)?, check, nudge)?);
        }
        Command::Region { file, p, cone, out, plot, nudge } => {
            let data = read_cloud(&file)?;
            let cone = read_cone(&cone)?;
            let run = commands::region(&data, &parse_p(&p)?, &cone, nudge)?;
            emit(&run, out, plot)?;
        }
        Command::Tukey { file, p, out, plot, nudge, prune } => {
            let data = read_cloud(&file)?;
            let run = commands::tukey(&data, &parse_p(&p)?, nudge, prune)?;
            emit(&run, out, plot)?;
        }
        Command::Depth { file, point } => {
            let data = read_cloud(&file)?;
            let z = parse_row(&point).context("point")?;
            println!("{}", commands::depth(&data, &z)?);
        }
        Command::Verify { file, p, cone, seed, trials, nudge } => {
            let data = read_cloud(&file)?;
            let cone = cone.map(|c| read_cone(&c)).transpose()?;
            print!("{}", commands::verify(&data, &parse_p(&p)?, cone.as_ref(), seed, trials, nudge)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("cquant: {failure}");
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
