//! Scenario configuration: frame geometry, link orders and time offsets, node
//! geometry, powers, constellation choice, and the validation of every frame
//! inequality the signal model relies on.

use crate::channel::{self, ChannelDraw, LinkSpec, NetworkGeometry};
use crate::frontend::{
    standard_constellation_with, Constellation, ConstellationKind, Normalization,
};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("frame: 0 < L_cp < M violated: L_cp={l_cp}, M={m}")]
    CpLength { l_cp: usize, m: usize },
    #[error("IBI condition: L{link}+theta{link} <= P-1 violated: {span} > {limit}")]
    Ibi { link: &'static str, span: usize, limit: usize },
    #[error("CP condition: L_cp >= L13+theta13 violated: {l_cp} < {required}")]
    CpDirect { l_cp: usize, required: usize },
    #[error("CP condition: L_cp >= L12+L23+theta12+theta23 violated: {l_cp} < {required}")]
    CpComposite { l_cp: usize, required: usize },
    #[error("composite condition: L12+L23+theta12+theta23 <= P-1 violated: {span} > {limit}")]
    CompositeLrx { span: usize, limit: usize },
    #[error("composite condition: L12+L24+theta12+theta24 <= P-1 violated: {span} > {limit}")]
    CompositeBrx { span: usize, limit: usize },
    #[error("BRx truncation: L_cp >= L14+theta14 violated: {l_cp} < {required}")]
    BrxDirect { l_cp: usize, required: usize },
    #[error("BRx truncation: L_cp >= L24+theta24 violated: {l_cp} < {required}")]
    BrxReflect { l_cp: usize, required: usize },
    #[error("BRx truncation: L_cp >= L12+L24+theta12+theta24 violated: {l_cp} < {required}")]
    BrxComposite { l_cp: usize, required: usize },
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("power: {0}")]
    Power(String),
}

/// Multicarrier frame geometry: M subcarriers plus a cyclic prefix of L_cp
/// samples, P = M + L_cp samples per frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameConfig {
    pub m: usize,
    pub l_cp: usize,
}

impl FrameConfig {
    pub fn p(&self) -> usize {
        self.m + self.l_cp
    }
}

/// Order and time offset of one directed link (the variance comes from the
/// geometry).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkTiming {
    pub order: usize,
    pub time_offset: usize,
}

impl LinkTiming {
    pub fn new(order: usize, time_offset: usize) -> Self {
        Self { order, time_offset }
    }

    pub fn span(&self) -> usize {
        self.order + self.time_offset
    }
}

/// Timing parameters of all six modeled links.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkTimings {
    pub l12: LinkTiming,
    pub l13: LinkTiming,
    pub l23: LinkTiming,
    pub l14: LinkTiming,
    pub l24: LinkTiming,
    pub l21: LinkTiming,
}

/// How the Monte-Carlo estimators sample the per-subcarrier responses.
///
/// `Marginal` draws each Ψ(m) independently from its exact CN(0, σ²) marginal
/// — fast, and unbiased for any quantity that is a sum of per-subcarrier
/// expectations. `TapLevel` draws the L+1 channel taps and derives the
/// response, preserving the correlation across subcarriers; it is the
/// authoritative mode for quantities that are nonlinear in whole-frame sums
/// or products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    Marginal,
    TapLevel,
}

/// Constellation selection carried by a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstellationSpec {
    pub kind: ConstellationKind,
    pub normalization: Normalization,
}

/// Full experiment description consumed by every estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub frame: FrameConfig,
    pub links: LinkTimings,
    pub geometry: NetworkGeometry,
    /// Legacy-link SNR σ_s²/σ_{v3}² in dB.
    pub snr_l_db: f64,
    /// Reflection power scaling α².
    pub alpha_sq: f64,
    /// Legacy symbol variance σ_s².
    pub sigma_s_sq: f64,
    /// Noise power at the co-located backscatter receiver.
    pub sigma_v1_sq: f64,
    /// Noise power at the separated backscatter receiver.
    pub sigma_v4_sq: f64,
    pub constellation: ConstellationSpec,
    pub sampling: SamplingMode,
}

impl Default for Scenario {
    fn default() -> Self {
        let timing = LinkTiming::new(3, 1);
        Scenario {
            frame: FrameConfig { m: 32, l_cp: 8 },
            links: LinkTimings {
                l12: timing,
                l13: timing,
                l23: timing,
                l14: timing,
                l24: timing,
                l21: timing,
            },
            geometry: NetworkGeometry {
                d12: 0.2,
                d13: 1.0,
                d14: 1.0,
                phi: std::f64::consts::PI / 18.0,
                theta: std::f64::consts::PI / 18.0,
                eta: 3.0,
            },
            snr_l_db: 20.0,
            alpha_sq: 0.01,
            sigma_s_sq: 1.0,
            sigma_v1_sq: 0.01,
            sigma_v4_sq: 0.01,
            constellation: ConstellationSpec {
                kind: ConstellationKind::Qpsk,
                normalization: Normalization::MaxAmplitude,
            },
            sampling: SamplingMode::Marginal,
        }
    }
}

impl Scenario {
    pub fn alpha(&self) -> f64 {
        self.alpha_sq.sqrt()
    }

    pub fn constellation(&self) -> Constellation {
        standard_constellation_with(
            self.constellation.kind,
            self.alpha(),
            self.constellation.normalization,
        )
    }

    pub fn snr_l(&self) -> f64 {
        10f64.powf(self.snr_l_db / 10.0)
    }

    /// Legacy receiver noise power implied by SNR_L and σ_s².
    pub fn sigma_v3_sq(&self) -> f64 {
        self.sigma_s_sq / self.snr_l()
    }

    /// Average SNR over the direct 1→3 link: Γ13 = σ13²·σ_s²/σ_{v3}².
    pub fn gamma13(&self) -> f64 {
        self.geometry.sigma13_sq() * self.snr_l()
    }

    /// SNR_{B,1} = α²σ_b²/σ_{v1}² of the co-located backscatter receiver.
    pub fn snr_b1(&self) -> f64 {
        self.alpha_sq * self.constellation().sigma_b_sq() / self.sigma_v1_sq
    }

    /// SNR_{B,4} = α²σ_b²/σ_{v4}² of the separated backscatter receiver.
    pub fn snr_b4(&self) -> f64 {
        self.alpha_sq * self.constellation().sigma_b_sq() / self.sigma_v4_sq
    }

    pub fn spec12(&self) -> LinkSpec {
        LinkSpec::new(self.links.l12.order, self.links.l12.time_offset, self.geometry.sigma12_sq())
    }

    pub fn spec13(&self) -> LinkSpec {
        LinkSpec::new(self.links.l13.order, self.links.l13.time_offset, self.geometry.sigma13_sq())
    }

    pub fn spec23(&self) -> LinkSpec {
        let var = self.geometry.sigma23_sq().expect("validated geometry");
        LinkSpec::new(self.links.l23.order, self.links.l23.time_offset, var)
    }

    pub fn spec14(&self) -> LinkSpec {
        LinkSpec::new(self.links.l14.order, self.links.l14.time_offset, self.geometry.sigma14_sq())
    }

    pub fn spec24(&self) -> LinkSpec {
        let var = self.geometry.sigma24_sq().expect("validated geometry");
        LinkSpec::new(self.links.l24.order, self.links.l24.time_offset, var)
    }

    pub fn spec21(&self) -> LinkSpec {
        LinkSpec::new(self.links.l21.order, self.links.l21.time_offset, self.geometry.sigma21_sq())
    }

    /// Draws one joint realization of all link tap vectors.
    pub fn draw_channels(&self, rng: &mut impl Rng) -> ChannelDraw {
        ChannelDraw {
            c12: channel::draw_taps(&self.spec12(), rng),
            c13: channel::draw_taps(&self.spec13(), rng),
            c23: channel::draw_taps(&self.spec23(), rng),
            c14: channel::draw_taps(&self.spec14(), rng),
            c24: channel::draw_taps(&self.spec24(), rng),
            c21: channel::draw_taps(&self.spec21(), rng),
        }
    }

    /// Checks the frame inequalities used by the legacy-receiver model: CP
    /// bounds, per-link IBI spans, and the composite-order conditions.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let (m, l_cp) = (self.frame.m, self.frame.l_cp);
        if l_cp == 0 || l_cp >= m {
            return Err(ScenarioError::CpLength { l_cp, m });
        }
        let limit = self.frame.p() - 1;
        for (name, t) in [
            ("12", self.links.l12),
            ("13", self.links.l13),
            ("23", self.links.l23),
            ("14", self.links.l14),
            ("24", self.links.l24),
            ("21", self.links.l21),
        ] {
            if t.span() > limit {
                return Err(ScenarioError::Ibi { link: name, span: t.span(), limit });
            }
        }
        let direct = self.links.l13.span();
        if l_cp < direct {
            return Err(ScenarioError::CpDirect { l_cp, required: direct });
        }
        let composite_lrx = self.links.l12.span() + self.links.l23.span();
        if l_cp < composite_lrx {
            return Err(ScenarioError::CpComposite { l_cp, required: composite_lrx });
        }
        if composite_lrx > limit {
            return Err(ScenarioError::CompositeLrx { span: composite_lrx, limit });
        }
        let composite_brx = self.links.l12.span() + self.links.l24.span();
        if composite_brx > limit {
            return Err(ScenarioError::CompositeBrx { span: composite_brx, limit });
        }
        self.validate_physical()
    }

    /// Checks the additional truncation inequalities assumed by the separated
    /// backscatter receiver when it discards L_b = L_cp samples.
    pub fn validate_brx(&self) -> Result<(), ScenarioError> {
        self.validate()?;
        let l_cp = self.frame.l_cp;
        let direct = self.links.l14.span();
        if l_cp < direct {
            return Err(ScenarioError::BrxDirect { l_cp, required: direct });
        }
        let reflect = self.links.l24.span();
        if l_cp < reflect {
            return Err(ScenarioError::BrxReflect { l_cp, required: reflect });
        }
        let composite = self.links.l12.span() + self.links.l24.span();
        if l_cp < composite {
            return Err(ScenarioError::BrxComposite { l_cp, required: composite });
        }
        Ok(())
    }

    fn validate_physical(&self) -> Result<(), ScenarioError> {
        let g = &self.geometry;
        for (name, d) in [("d12", g.d12), ("d13", g.d13), ("d14", g.d14)] {
            if d.is_nan() || d <= 0.0 {
                return Err(ScenarioError::Geometry(format!("{name} must be positive, got {d}")));
            }
        }
        g.d23().map_err(|e| ScenarioError::Geometry(e.to_string()))?;
        g.d24().map_err(|e| ScenarioError::Geometry(e.to_string()))?;
        if !g.eta.is_finite() || g.eta < 0.0 {
            return Err(ScenarioError::Geometry(format!("eta must be finite and >= 0, got {}", g.eta)));
        }
        if !(0.0..=1.0).contains(&self.alpha_sq) {
            return Err(ScenarioError::Power(format!("alpha^2 must lie in [0, 1], got {}", self.alpha_sq)));
        }
        for (name, v) in [
            ("sigma_s_sq", self.sigma_s_sq),
            ("sigma_v1_sq", self.sigma_v1_sq),
            ("sigma_v4_sq", self.sigma_v4_sq),
        ] {
            if v.is_nan() || v <= 0.0 || !v.is_finite() {
                return Err(ScenarioError::Power(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.snr_l_db.is_finite() {
            return Err(ScenarioError::Power(format!("snr_l_db must be finite, got {}", self.snr_l_db)));
        }
        Ok(())
    }
}
