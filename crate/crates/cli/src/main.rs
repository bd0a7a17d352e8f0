use bscap_cli::config::CliConfig;
use bscap_cli::presets::parse_preset_id;
use bscap_cli::quantity::Quantity;
use bscap_cli::sweep::{SweepSpec, SweepVariable};
use bscap_cli::{apply_overrides, load_config, CliError, Overrides};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "bscap",
    about = "Capacity bounds of an ambient-backscatter network over a multicarrier legacy link",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Scenario config file (key = value lines); defaults apply when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Monte-Carlo trials per estimate
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed for the per-trial random streams
    #[arg(long)]
    seed: Option<u64>,
    /// Write the CSV here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the alternative high-SNR log²e factor and unit-energy 4-ASK
    #[arg(long)]
    strict_paper: bool,
    /// Full-accuracy run: 10⁶ trials per estimate
    #[arg(long)]
    full: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate quantities on a single scenario
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated quantity names (see README for the list)
        #[arg(long)]
        quantity: Option<String>,
    },
    /// Sweep one variable over a grid
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Sweep variable: alpha_sq_db | d12_ratio | snr_b_db | snr_l_db
        #[arg(long)]
        variable: Option<String>,
        /// Comma-separated, strictly increasing grid values
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        quantity: Option<String>,
    },
    /// Run a stock figure preset (fig3..fig11)
    Figure {
        /// Preset id, e.g. fig3 or 3
        #[arg(long)]
        preset: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn overrides(common: &CommonArgs) -> Overrides {
    Overrides {
        trials: common.trials,
        seed: common.seed,
        strict_paper: common.strict_paper,
        full: common.full,
    }
}

fn parse_quantities(cfg: &CliConfig, flag: &Option<String>) -> Result<Vec<Quantity>, CliError> {
    match flag {
        None => Ok(cfg.quantities.clone()),
        Some(list) => list
            .split(',')
            .map(|name| {
                Quantity::from_name(name.trim())
                    .ok_or_else(|| CliError::Validation(format!("unknown quantity '{name}'")))
            })
            .collect(),
    }
}

fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Run { common, quantity } => {
            let mut cfg = load_config(common.config.as_deref())?;
            apply_overrides(&mut cfg, &overrides(common));
            let quantities = parse_quantities(&cfg, quantity)?;
            bscap_cli::run_scenario(&cfg, &quantities)
        }
        Command::Sweep { common, variable, grid, quantity } => {
            let mut cfg = load_config(common.config.as_deref())?;
            apply_overrides(&mut cfg, &overrides(common));
            cfg.quantities = parse_quantities(&cfg, quantity)?;
            let var = match variable {
                Some(name) => SweepVariable::from_name(name).ok_or_else(|| {
                    CliError::Validation(format!("unknown sweep variable '{name}'"))
                })?,
                None => cfg.sweep_variable.ok_or_else(|| {
                    CliError::Validation(
                        "no sweep variable: pass --variable or set sweep.variable".into(),
                    )
                })?,
            };
            let grid_values = match grid {
                Some(text) => text
                    .split(',')
                    .map(|v| {
                        v.trim().parse::<f64>().map_err(|e| {
                            CliError::Validation(format!("bad grid value '{v}': {e}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => cfg.sweep_grid.clone(),
            };
            let spec = SweepSpec { variable: var, grid: grid_values };
            bscap_cli::run_sweep(&cfg, &spec)
        }
        Command::Figure { preset, common } => {
            let id = parse_preset_id(preset).map_err(CliError::Validation)?;
            bscap_cli::run_figure(id, &overrides(common))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let out_path = match &cli.command {
        Command::Run { common, .. }
        | Command::Sweep { common, .. }
        | Command::Figure { common, .. } => common.out.clone(),
    };
    match execute(&cli.command) {
        Ok(csv) => match out_path {
            None => print!("{csv}"),
            Some(path) => {
                if let Err(e) = std::fs::write(&path, csv) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(1);
                }
            }
        },
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
