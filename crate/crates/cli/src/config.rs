//! Flat key-value scenario configuration files.
//!
//! The format is line-oriented: `section.key = value`, `#` starts a comment,
//! blank lines are ignored. Every key is typed and unknown keys are rejected.
//! Node coordinates may be given for the legacy pair (nodes 1 and 3); they
//! are reduced to the distance d13 once at load time.

use crate::quantity::Quantity;
use crate::sweep::SweepVariable;
use bscap::frontend::{ConstellationKind, Normalization};
use bscap::scenario::{SamplingMode, Scenario};

/// Parsed configuration: the scenario plus batch-level knobs.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub scenario: Scenario,
    pub trials: usize,
    pub seed: u64,
    /// Outage target rate R_s in b/s/Hz.
    pub r_s: f64,
    /// Use the alternative high-SNR log²e factor and the unit-energy 4-ASK
    /// normalization.
    pub strict_paper: bool,
    pub quantities: Vec<Quantity>,
    pub sweep_variable: Option<SweepVariable>,
    pub sweep_grid: Vec<f64>,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::default(),
            trials: 100_000,
            seed: 1,
            r_s: 6.0,
            strict_paper: false,
            quantities: vec![Quantity::C3NoBackscatter, Quantity::C3Semianalytic],
            sweep_variable: None,
            sweep_grid: Vec::new(),
        }
    }
}

#[derive(Debug, PartialEq)]
pub enum ConfigError {
    Syntax { line: usize, message: String },
    UnknownKey { line: usize, key: String },
    BadValue { line: usize, key: String, message: String },
    Validation(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Syntax { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::UnknownKey { line, key } => write!(f, "line {line}: unknown key '{key}'"),
            ConfigError::BadValue { line, key, message } => {
                write!(f, "line {line}: bad value for '{key}': {message}")
            }
            ConfigError::Validation(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

struct NodeOverride {
    node1: Option<(f64, f64)>,
    node3: Option<(f64, f64)>,
}

impl CliConfig {
    /// Parses a config file body on top of the defaults and validates every
    /// frame inequality.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = CliConfig::default();
        let mut nodes = NodeOverride { node1: None, node3: None };
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: line_no,
                message: format!("expected 'key = value', got '{line}'"),
            })?;
            cfg.apply(key.trim(), value.trim(), line_no, &mut nodes)?;
        }
        if let (Some(a), Some(b)) = (nodes.node1, nodes.node3) {
            cfg.scenario.geometry.d13 = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        } else if nodes.node1.is_some() || nodes.node3.is_some() {
            return Err(ConfigError::Validation(
                "geometry.node1 and geometry.node3 must be given together".into(),
            ));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Runs the frame/geometry/power validation and reports the violated
    /// inequality verbatim.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.scenario
            .validate_brx()
            .map_err(|e| ConfigError::Validation(e.to_string()))?;
        if self.trials == 0 {
            return Err(ConfigError::Validation("mc.trials must be at least 1".into()));
        }
        if self.r_s.is_nan() || self.r_s < 0.0 {
            return Err(ConfigError::Validation(format!(
                "rate.r_s must be nonnegative, got {}",
                self.r_s
            )));
        }
        Ok(())
    }

    fn apply(
        &mut self,
        key: &str,
        value: &str,
        line: usize,
        nodes: &mut NodeOverride,
    ) -> Result<(), ConfigError> {
        let bad = |message: String| ConfigError::BadValue {
            line,
            key: key.to_string(),
            message,
        };
        let parse_f64 = |v: &str| v.parse::<f64>().map_err(|e| bad(e.to_string()));
        let parse_usize = |v: &str| v.parse::<usize>().map_err(|e| bad(e.to_string()));
        let sc = &mut self.scenario;
        match key {
            "frame.m" => sc.frame.m = parse_usize(value)?,
            "frame.l_cp" => sc.frame.l_cp = parse_usize(value)?,
            "links.l12.order" => sc.links.l12.order = parse_usize(value)?,
            "links.l12.to" => sc.links.l12.time_offset = parse_usize(value)?,
            "links.l13.order" => sc.links.l13.order = parse_usize(value)?,
            "links.l13.to" => sc.links.l13.time_offset = parse_usize(value)?,
            "links.l23.order" => sc.links.l23.order = parse_usize(value)?,
            "links.l23.to" => sc.links.l23.time_offset = parse_usize(value)?,
            "links.l14.order" => sc.links.l14.order = parse_usize(value)?,
            "links.l14.to" => sc.links.l14.time_offset = parse_usize(value)?,
            "links.l24.order" => sc.links.l24.order = parse_usize(value)?,
            "links.l24.to" => sc.links.l24.time_offset = parse_usize(value)?,
            "links.l21.order" => sc.links.l21.order = parse_usize(value)?,
            "links.l21.to" => sc.links.l21.time_offset = parse_usize(value)?,
            "geometry.d12" => sc.geometry.d12 = parse_f64(value)?,
            "geometry.d13" => sc.geometry.d13 = parse_f64(value)?,
            "geometry.d14" => sc.geometry.d14 = parse_f64(value)?,
            "geometry.phi" => sc.geometry.phi = parse_f64(value)?,
            "geometry.theta" => sc.geometry.theta = parse_f64(value)?,
            "geometry.eta" => sc.geometry.eta = parse_f64(value)?,
            "geometry.node1" => nodes.node1 = Some(parse_pair(value).map_err(bad)?),
            "geometry.node3" => nodes.node3 = Some(parse_pair(value).map_err(bad)?),
            "power.snr_l_db" => sc.snr_l_db = parse_f64(value)?,
            "power.alpha_sq" => sc.alpha_sq = parse_f64(value)?,
            "power.alpha_sq_db" => sc.alpha_sq = 10f64.powf(parse_f64(value)? / 10.0),
            "power.sigma_s_sq" => sc.sigma_s_sq = parse_f64(value)?,
            "power.sigma_v1_sq" => sc.sigma_v1_sq = parse_f64(value)?,
            "power.sigma_v4_sq" => sc.sigma_v4_sq = parse_f64(value)?,
            "constellation.kind" => {
                sc.constellation.kind = match value.to_ascii_lowercase().as_str() {
                    "bpsk" => ConstellationKind::Bpsk,
                    "qpsk" => ConstellationKind::Qpsk,
                    "ask4" => ConstellationKind::Ask4,
                    other => return Err(bad(format!("unknown constellation '{other}'"))),
                }
            }
            "constellation.normalization" => {
                sc.constellation.normalization = match value.to_ascii_lowercase().as_str() {
                    "max_amplitude" => Normalization::MaxAmplitude,
                    "unit_energy" => Normalization::UnitEnergy,
                    other => return Err(bad(format!("unknown normalization '{other}'"))),
                }
            }
            "sampling.mode" => {
                sc.sampling = match value.to_ascii_lowercase().as_str() {
                    "marginal" => SamplingMode::Marginal,
                    "tap_level" => SamplingMode::TapLevel,
                    other => return Err(bad(format!("unknown sampling mode '{other}'"))),
                }
            }
            "mc.trials" => self.trials = parse_usize(value)?,
            "mc.seed" => self.seed = value.parse::<u64>().map_err(|e| bad(e.to_string()))?,
            "rate.r_s" => self.r_s = parse_f64(value)?,
            "run.strict_paper" => {
                self.strict_paper = value.parse::<bool>().map_err(|e| bad(e.to_string()))?
            }
            "run.quantities" => {
                self.quantities = value
                    .split(',')
                    .map(|name| Quantity::from_name(name.trim()).ok_or_else(|| {
                        bad(format!("unknown quantity '{}'", name.trim()))
                    }))
                    .collect::<Result<_, _>>()?
            }
            "sweep.variable" => {
                self.sweep_variable = Some(
                    SweepVariable::from_name(value)
                        .ok_or_else(|| bad(format!("unknown sweep variable '{value}'")))?,
                )
            }
            "sweep.grid" => {
                self.sweep_grid = value
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|e| bad(e.to_string())))
                    .collect::<Result<_, _>>()?
            }
            other => {
                return Err(ConfigError::UnknownKey { line, key: other.to_string() });
            }
        }
        Ok(())
    }

    /// Canonical one-line-per-field rendering, used for the provenance hash.
    pub fn canonical_string(&self) -> String {
        let sc = &self.scenario;
        let kind = match sc.constellation.kind {
            ConstellationKind::Bpsk => "bpsk",
            ConstellationKind::Qpsk => "qpsk",
            ConstellationKind::Ask4 => "ask4",
        };
        let norm = match sc.constellation.normalization {
            Normalization::MaxAmplitude => "max_amplitude",
            Normalization::UnitEnergy => "unit_energy",
        };
        let mode = match sc.sampling {
            SamplingMode::Marginal => "marginal",
            SamplingMode::TapLevel => "tap_level",
        };
        let links = [
            ("l12", sc.links.l12),
            ("l13", sc.links.l13),
            ("l23", sc.links.l23),
            ("l14", sc.links.l14),
            ("l24", sc.links.l24),
            ("l21", sc.links.l21),
        ]
        .map(|(name, t)| format!("links.{name}={},{}", t.order, t.time_offset))
        .join(";");
        format!(
            "frame={},{};{links};geometry={:e},{:e},{:e},{:e},{:e},{:e};power={:e},{:e},{:e},{:e},{:e};constellation={kind},{norm};sampling={mode};trials={};seed={};r_s={:e};strict={}",
            sc.frame.m,
            sc.frame.l_cp,
            sc.geometry.d12,
            sc.geometry.d13,
            sc.geometry.d14,
            sc.geometry.phi,
            sc.geometry.theta,
            sc.geometry.eta,
            sc.snr_l_db,
            sc.alpha_sq,
            sc.sigma_s_sq,
            sc.sigma_v1_sq,
            sc.sigma_v4_sq,
            self.trials,
            self.seed,
            self.r_s,
            self.strict_paper,
        )
    }
}

fn parse_pair(value: &str) -> Result<(f64, f64), String> {
    let (a, b) = value.split_once(',').ok_or("expected 'x,y'")?;
    Ok((
        a.trim().parse::<f64>().map_err(|e| e.to_string())?,
        b.trim().parse::<f64>().map_err(|e| e.to_string())?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides_and_comments() {
        let cfg = CliConfig::parse(
            "# experiment\nframe.m = 16\nframe.l_cp = 8\n\npower.snr_l_db = 10  # inline\nconstellation.kind = bpsk\nmc.trials = 500\n",
        )
        .unwrap();
        assert_eq!(cfg.scenario.frame.m, 16);
        assert_eq!(cfg.scenario.snr_l_db, 10.0);
        assert_eq!(cfg.scenario.constellation.kind, ConstellationKind::Bpsk);
        assert_eq!(cfg.trials, 500);
    }

    #[test]
    fn short_cp_fails_with_named_inequality() {
        let err = CliConfig::parse("frame.l_cp = 4\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("L_cp >= L12+L23+theta12+theta23"), "{msg}");
        assert!(msg.contains("4 < 8"), "{msg}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = CliConfig::parse("frame.subcarriers = 32\n").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { line: 1, .. }));
    }

    #[test]
    fn node_coordinates_reduce_to_d13() {
        let cfg =
            CliConfig::parse("geometry.node1 = -0.5,0\ngeometry.node3 = 0.5,0\n").unwrap();
        assert!((cfg.scenario.geometry.d13 - 1.0).abs() < 1e-15);
        assert!(CliConfig::parse("geometry.node1 = -0.5,0\n").is_err());
    }

    #[test]
    fn alpha_in_db_converts() {
        let cfg = CliConfig::parse("power.alpha_sq_db = -20\n").unwrap();
        assert!((cfg.scenario.alpha_sq - 0.01).abs() < 1e-15);
    }
}
