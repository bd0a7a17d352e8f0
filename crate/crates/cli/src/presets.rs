//! Figure presets: the simulation-section parameterizations, one per plotted
//! figure, mapped onto sweep columns.

use crate::config::CliConfig;
use crate::quantity::Quantity;
use crate::sweep::{SweepColumn, SweepSpec, SweepVariable};
use bscap::frontend::ConstellationKind;
use bscap::scenario::{SamplingMode, Scenario};

const PHI_NARROW: f64 = std::f64::consts::PI / 18.0;
const PHI_WIDE: f64 = std::f64::consts::FRAC_PI_3;

#[derive(Debug, Clone)]
pub struct FigurePreset {
    pub id: u8,
    pub config: CliConfig,
    pub spec: SweepSpec,
    pub columns: Vec<SweepColumn>,
    /// Extra provenance comments carried into the CSV.
    pub comments: Vec<String>,
}

fn alpha_sq_db_grid() -> Vec<f64> {
    (0..8).map(|i| -40.0 + 5.0 * i as f64).collect()
}

fn d12_ratio_grid() -> Vec<f64> {
    (2..=30).map(|i| i as f64 * 0.05).collect()
}

fn kind_label(kind: ConstellationKind) -> &'static str {
    match kind {
        ConstellationKind::Bpsk => "bpsk",
        ConstellationKind::Qpsk => "qpsk",
        ConstellationKind::Ask4 => "ask4",
    }
}

fn angle_label(angle: f64) -> &'static str {
    if (angle - PHI_NARROW).abs() < 1e-12 {
        "10deg"
    } else {
        "60deg"
    }
}

/// Columns over {QPSK, 4-ASK} × {π/18, π/3} for a legacy-link quantity swept
/// at the legacy receiver angle φ.
fn legacy_combo_columns(base: &Scenario, quantity: Quantity, prefix: &str) -> Vec<SweepColumn> {
    let mut columns = Vec::new();
    for kind in [ConstellationKind::Qpsk, ConstellationKind::Ask4] {
        for phi in [PHI_NARROW, PHI_WIDE] {
            let mut sc = base.clone();
            sc.constellation.kind = kind;
            sc.geometry.phi = phi;
            columns.push(SweepColumn {
                label: format!("{prefix}_{}_phi{}", kind_label(kind), angle_label(phi)),
                scenario: sc,
                quantity,
                frozen: false,
            });
        }
    }
    columns
}

/// The preset for one figure id in 3..=11.
pub fn figure_preset(id: u8) -> Result<FigurePreset, String> {
    if !(3..=11).contains(&id) {
        return Err(format!("unknown figure preset {id}: expected 3..=11"));
    }
    let config = CliConfig::default();
    let base = config.scenario.clone();
    let preset = match id {
        3 => {
            let mut columns = legacy_combo_columns(&base, Quantity::C3Semianalytic, "c3");
            columns.push(SweepColumn {
                label: "c3_no_bs".into(),
                scenario: base.clone(),
                quantity: Quantity::C3NoBackscatter,
                frozen: true,
            });
            FigurePreset {
                id,
                config,
                spec: SweepSpec { variable: SweepVariable::AlphaSqDb, grid: alpha_sq_db_grid() },
                columns,
                comments: vec![
                    "reference point: delta_c3 = 0.1315 b/s/Hz at alpha_sq = -40 dB, \
                     phi = pi/18, QPSK (figure-read value, not a gate)"
                        .into(),
                ],
            }
        }
        4 | 6 => {
            let quantity = if id == 4 { Quantity::C3Semianalytic } else { Quantity::Outage };
            let prefix = if id == 4 { "c3" } else { "pout" };
            let mut columns = legacy_combo_columns(&base, quantity, prefix);
            let mut asleep = base.clone();
            asleep.alpha_sq = 0.0;
            columns.push(SweepColumn {
                label: format!("{prefix}_no_bs"),
                scenario: asleep,
                quantity: if id == 4 { Quantity::C3NoBackscatter } else { Quantity::Outage },
                frozen: true,
            });
            FigurePreset {
                id,
                config,
                spec: SweepSpec { variable: SweepVariable::D12Ratio, grid: d12_ratio_grid() },
                columns,
                comments: vec!["mean square reflection coefficient fixed at -20 dB".into()],
            }
        }
        5 => {
            let mut columns = legacy_combo_columns(&base, Quantity::Outage, "pout");
            let mut asleep = base.clone();
            asleep.alpha_sq = 0.0;
            columns.push(SweepColumn {
                label: "pout_no_bs".into(),
                scenario: asleep,
                quantity: Quantity::Outage,
                frozen: true,
            });
            FigurePreset {
                id,
                config,
                spec: SweepSpec { variable: SweepVariable::AlphaSqDb, grid: alpha_sq_db_grid() },
                columns,
                comments: vec!["outage target rate r_s = 6 b/s/Hz".into()],
            }
        }
        7 | 8 => {
            let quantity = if id == 7 { Quantity::C1Upper } else { Quantity::C1LowerCutoff };
            let prefix = if id == 7 { "c1_upper" } else { "c1_lower" };
            let mut columns = Vec::new();
            for snr_db in [-20.0, -10.0, 0.0, 10.0] {
                let mut sc = base.clone();
                sc.sampling = SamplingMode::TapLevel;
                sc.sigma_v1_sq = sc.alpha_sq / 10f64.powf(snr_db / 10.0);
                columns.push(SweepColumn {
                    label: format!("{prefix}_qpsk_snr{}", db_label(snr_db)),
                    scenario: sc,
                    quantity,
                    frozen: false,
                });
            }
            if id == 8 {
                // amplitude constellation goes through the full double-sum
                // cut-off expression
                let mut sc = base.clone();
                sc.sampling = SamplingMode::TapLevel;
                sc.constellation.kind = ConstellationKind::Ask4;
                sc.sigma_v1_sq = sc.alpha_sq * sc.constellation().sigma_b_sq();
                columns.push(SweepColumn {
                    label: "c1_lower_ask4_snr0".into(),
                    scenario: sc,
                    quantity,
                    frozen: false,
                });
            }
            FigurePreset {
                id,
                config,
                spec: SweepSpec { variable: SweepVariable::D12Ratio, grid: d12_ratio_grid() },
                columns,
                comments: vec!["co-located receiver; tap-level sampling".into()],
            }
        }
        9 => {
            let mut columns = Vec::new();
            for theta in [PHI_NARROW, PHI_WIDE] {
                for snr_db in [-10.0, 0.0, 10.0] {
                    let mut sc = base.clone();
                    sc.sampling = SamplingMode::TapLevel;
                    sc.geometry.theta = theta;
                    sc.sigma_v4_sq = sc.alpha_sq / 10f64.powf(snr_db / 10.0);
                    columns.push(SweepColumn {
                        label: format!(
                            "c4_upper_snr{}_theta{}",
                            db_label(snr_db),
                            angle_label(theta)
                        ),
                        scenario: sc,
                        quantity: Quantity::C4Upper,
                        frozen: false,
                    });
                }
            }
            FigurePreset {
                id,
                config,
                spec: SweepSpec { variable: SweepVariable::D12Ratio, grid: d12_ratio_grid() },
                columns,
                comments: vec!["separated receiver, d14 = 1".into()],
            }
        }
        10 => {
            let mut columns = Vec::new();
            for kind in [ConstellationKind::Bpsk, ConstellationKind::Qpsk, ConstellationKind::Ask4]
            {
                for theta in [PHI_NARROW, PHI_WIDE] {
                    let mut sc = base.clone();
                    sc.sampling = SamplingMode::TapLevel;
                    sc.constellation.kind = kind;
                    sc.geometry.theta = theta;
                    sc.alpha_sq = 1e-3;
                    columns.push(SweepColumn {
                        label: format!(
                            "c4_lower_{}_theta{}",
                            kind_label(kind),
                            angle_label(theta)
                        ),
                        scenario: sc,
                        quantity: Quantity::C4Lower,
                        frozen: false,
                    });
                }
            }
            FigurePreset {
                id,
                config,
                spec: SweepSpec {
                    variable: SweepVariable::SnrBDb,
                    grid: (0..8).map(|i| -30.0 + 10.0 * i as f64).collect(),
                },
                columns,
                comments: vec![
                    "noise power swept at fixed alpha_sq = -30 dB, d12/d14 = 0.2".into(),
                    "reflection kept below the direct-path interference so pairwise \
                     symbol distances govern the cut-off ordering"
                        .into(),
                ],
            }
        }
        11 => {
            let mut columns = Vec::new();
            for kind in [ConstellationKind::Qpsk, ConstellationKind::Ask4] {
                for theta in [PHI_NARROW, PHI_WIDE] {
                    let mut sc = base.clone();
                    sc.sampling = SamplingMode::TapLevel;
                    sc.constellation.kind = kind;
                    sc.geometry.theta = theta;
                    sc.sigma_v4_sq = sc.alpha_sq * sc.constellation().sigma_b_sq() * 100.0;
                    columns.push(SweepColumn {
                        label: format!(
                            "c4_lower_{}_theta{}",
                            kind_label(kind),
                            angle_label(theta)
                        ),
                        scenario: sc,
                        quantity: Quantity::C4Lower,
                        frozen: false,
                    });
                }
            }
            FigurePreset {
                id,
                config,
                spec: SweepSpec { variable: SweepVariable::D12Ratio, grid: d12_ratio_grid() },
                columns,
                comments: vec!["snr_b4 fixed at -20 dB".into()],
            }
        }
        _ => unreachable!(),
    };
    Ok(preset)
}

fn db_label(db: f64) -> String {
    if db < 0.0 {
        format!("m{}", -db as i64)
    } else {
        format!("{}", db as i64)
    }
}

/// Parses "fig7" or "7" into a preset id.
pub fn parse_preset_id(text: &str) -> Result<u8, String> {
    let digits = text.strip_prefix("fig").unwrap_or(text);
    digits
        .parse::<u8>()
        .map_err(|_| format!("cannot parse figure preset '{text}'"))
}
