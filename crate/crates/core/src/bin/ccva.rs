use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand as ClapSubcommand};

use ccva_core::cli::{execute, workers_from_env, CliError, Overrides, RunConfig, Subcommand};
use ccva_core::{FvaMode, ScenarioFamily};

/// Climate change valuation adjustment: CVA/FVA under flat CDS
/// extrapolation versus climate-stressed hazard curves.
#[derive(Parser, Debug)]
#[command(name = "ccva", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// fca | signed
    #[arg(long)]
    fva_mode: Option<FvaMode>,
    /// Exposure grid step in years.
    #[arg(long)]
    grid_step: Option<f64>,
}

#[derive(ClapSubcommand, Debug)]
enum Command {
    /// CVA/FVA under both measures and the CCVA decomposition.
    Report(Common),
    /// Run a scenario family grid.
    Grid {
        /// slowest-uniform | midpoint | transition (default: config, then slowest-uniform)
        family: Option<ScenarioFamily>,
        #[command(flatten)]
        common: Common,
    },
    /// Hazard, survival and par spread curves for plotting.
    Curves(Common),
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let (cmd, common) = match cli.command {
        Command::Report(c) => (Subcommand::Report, c),
        Command::Grid { family, common } => (Subcommand::Grid(family), common),
        Command::Curves(c) => (Subcommand::Curves, c),
    };
    let cfg = RunConfig::load(common.config.as_deref())?;
    let overrides = Overrides {
        fva_mode: common.fva_mode,
        grid_step: common.grid_step,
        workers: workers_from_env()?,
    };
    execute(cmd, cfg, &overrides, &common.out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ccva: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
