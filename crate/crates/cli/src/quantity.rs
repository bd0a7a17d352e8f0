//! Estimator selector: maps quantity names to library calls.

use bscap::mc::{CapacityEstimate, TrialPlan};
use bscap::scenario::Scenario;
use bscap::{colocated, legacy, separated};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    C3NoBackscatter,
    C3Semianalytic,
    C3McFull,
    DeltaC3LowSnr,
    DeltaC3HighSnr,
    Outage,
    C1Upper,
    C1UpperLargeM,
    C1LowerCutoff,
    C1LowerMinDistance,
    C1LowerLargeM,
    C4Upper,
    C4UpperLargeM,
    C4Lower,
    C4BpskClosedForm,
    JFunction,
}

pub const ALL_QUANTITIES: [Quantity; 16] = [
    Quantity::C3NoBackscatter,
    Quantity::C3Semianalytic,
    Quantity::C3McFull,
    Quantity::DeltaC3LowSnr,
    Quantity::DeltaC3HighSnr,
    Quantity::Outage,
    Quantity::C1Upper,
    Quantity::C1UpperLargeM,
    Quantity::C1LowerCutoff,
    Quantity::C1LowerMinDistance,
    Quantity::C1LowerLargeM,
    Quantity::C4Upper,
    Quantity::C4UpperLargeM,
    Quantity::C4Lower,
    Quantity::C4BpskClosedForm,
    Quantity::JFunction,
];

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::C3NoBackscatter => "c3_no_backscatter",
            Quantity::C3Semianalytic => "c3_semianalytic",
            Quantity::C3McFull => "c3_mc_full",
            Quantity::DeltaC3LowSnr => "delta_c3_low_snr",
            Quantity::DeltaC3HighSnr => "delta_c3_high_snr",
            Quantity::Outage => "outage",
            Quantity::C1Upper => "c1_upper",
            Quantity::C1UpperLargeM => "c1_upper_large_m",
            Quantity::C1LowerCutoff => "c1_lower_cutoff",
            Quantity::C1LowerMinDistance => "c1_lower_min_distance",
            Quantity::C1LowerLargeM => "c1_lower_large_m",
            Quantity::C4Upper => "c4_upper",
            Quantity::C4UpperLargeM => "c4_upper_large_m",
            Quantity::C4Lower => "c4_lower",
            Quantity::C4BpskClosedForm => "c4_bpsk_closed_form",
            Quantity::JFunction => "j_function",
        }
    }

    pub fn from_name(name: &str) -> Option<Quantity> {
        ALL_QUANTITIES.iter().copied().find(|q| q.name() == name)
    }

    /// Evaluates the quantity on a scenario. Deterministic quantities come
    /// back with zero standard error and a single trial.
    pub fn evaluate(
        &self,
        sc: &Scenario,
        plan: &TrialPlan,
        r_s: f64,
        strict_paper: bool,
    ) -> Result<CapacityEstimate, String> {
        let exact = |v: f64| CapacityEstimate { mean: v, std_error: 0.0, trials: 1 };
        Ok(match self {
            Quantity::C3NoBackscatter => exact(legacy::c3_no_backscatter(sc.gamma13())),
            Quantity::C3Semianalytic => legacy::c3_semianalytic(sc, plan),
            Quantity::C3McFull => legacy::c3_mc_full(sc, plan),
            Quantity::DeltaC3LowSnr => exact(legacy::delta_c3_low_snr(sc)),
            Quantity::DeltaC3HighSnr => {
                exact(legacy::delta_c3_high_snr(sc, strict_paper).map_err(|e| e.to_string())?)
            }
            Quantity::Outage => legacy::outage_probability(sc, r_s, plan),
            Quantity::C1Upper => colocated::c1_upper(sc, plan),
            Quantity::C1UpperLargeM => exact(colocated::c1_upper_large_m(sc)),
            Quantity::C1LowerCutoff => colocated::c1_lower_cutoff(sc, plan),
            Quantity::C1LowerMinDistance => colocated::c1_lower_min_distance(sc, plan),
            Quantity::C1LowerLargeM => exact(colocated::c1_lower_large_m(sc).cutoff),
            Quantity::C4Upper => separated::c4_upper(sc, plan),
            Quantity::C4UpperLargeM => exact(separated::c4_upper_large_m(sc)),
            Quantity::C4Lower => separated::c4_lower(sc, plan),
            Quantity::C4BpskClosedForm => {
                exact(separated::bpsk_lower_closed_form(sc).map_err(|e| e.to_string())?)
            }
            Quantity::JFunction => {
                let g = &sc.geometry;
                exact(separated::j_function(g.d12, g.d14, g.theta, g.eta, sc.alpha()))
            }
        })
    }
}
