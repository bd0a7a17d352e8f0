//! Batch front-end for the capacity simulator: scenario configs, parameter
//! sweeps, figure presets, CSV emission.

pub mod config;
pub mod output;
pub mod presets;
pub mod quantity;
pub mod sweep;

use config::{CliConfig, ConfigError};
use output::RunRow;
use quantity::Quantity;
use std::time::Instant;
use sweep::{SweepColumn, SweepSpec};

/// Command-level failure, split by exit code: validation problems exit
/// with 2, everything else with 1.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Other(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Other(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Batch-level overrides coming from command-line flags.
#[derive(Debug, Default, Clone, Copy)]
pub struct Overrides {
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub strict_paper: bool,
    /// Full-accuracy run: 10⁶ trials unless --trials says otherwise.
    pub full: bool,
}

pub fn apply_overrides(cfg: &mut CliConfig, ov: &Overrides) {
    if ov.full {
        cfg.trials = 1_000_000;
    }
    if let Some(t) = ov.trials {
        cfg.trials = t;
    }
    if let Some(s) = ov.seed {
        cfg.seed = s;
    }
    if ov.strict_paper {
        cfg.strict_paper = true;
        cfg.scenario.constellation.normalization =
            bscap::frontend::Normalization::UnitEnergy;
    }
}

pub fn load_config(path: Option<&std::path::Path>) -> Result<CliConfig, CliError> {
    match path {
        None => Ok(CliConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Other(format!("cannot read {}: {e}", p.display())))?;
            Ok(CliConfig::parse(&text)?)
        }
    }
}

/// Evaluates the configured quantities on a single scenario and renders the
/// result CSV.
pub fn run_scenario(cfg: &CliConfig, quantities: &[Quantity]) -> Result<String, CliError> {
    cfg.validate()?;
    let plan = bscap::mc::TrialPlan::new(cfg.trials, cfg.seed);
    let mut rows = Vec::with_capacity(quantities.len());
    for q in quantities {
        let started = Instant::now();
        let est = q
            .evaluate(&cfg.scenario, &plan, cfg.r_s, cfg.strict_paper)
            .map_err(CliError::Validation)?;
        rows.push(RunRow {
            quantity: q.name(),
            mean: est.mean,
            std_error: est.std_error,
            trials: est.trials,
            runtime_s: started.elapsed().as_secs_f64(),
        });
    }
    Ok(output::emit_run(cfg, &rows))
}

/// Runs the configured sweep (every quantity becomes one column) and renders
/// the CSV table.
pub fn run_sweep(cfg: &CliConfig, spec: &SweepSpec) -> Result<String, CliError> {
    cfg.validate()?;
    let columns: Vec<SweepColumn> = cfg
        .quantities
        .iter()
        .map(|&q| SweepColumn {
            label: q.name().to_string(),
            scenario: cfg.scenario.clone(),
            quantity: q,
            frozen: false,
        })
        .collect();
    let table =
        sweep::run_sweep_columns(&columns, spec, cfg.trials, cfg.seed, cfg.r_s, cfg.strict_paper)
            .map_err(CliError::Validation)?;
    Ok(output::emit_sweep(cfg, &table, &[]))
}

/// Runs a figure preset end to end and renders the CSV table.
pub fn run_figure(id: u8, ov: &Overrides) -> Result<String, CliError> {
    let mut preset = presets::figure_preset(id).map_err(CliError::Validation)?;
    apply_overrides(&mut preset.config, ov);
    if ov.strict_paper {
        for col in &mut preset.columns {
            col.scenario.constellation.normalization =
                bscap::frontend::Normalization::UnitEnergy;
        }
    }
    let cfg = &preset.config;
    cfg.validate()?;
    let table = sweep::run_sweep_columns(
        &preset.columns,
        &preset.spec,
        cfg.trials,
        cfg.seed,
        cfg.r_s,
        cfg.strict_paper,
    )
    .map_err(CliError::Validation)?;
    Ok(output::emit_sweep(cfg, &table, &preset.comments))
}
