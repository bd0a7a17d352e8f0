//! Capacity bounds of the backscatter link when its receiver is co-located
//! with the legacy transmitter.
//!
//! The receiver knows the transmitted block and the compound 1→2→1 response,
//! subtracts its self-interference, and correlates against the known
//! signature ψ(m) = Ψ12(m)Ψ21(m)s(m); the scalar output is a conditionally
//! Gaussian channel in the backscatter symbol with effective SNR
//! SNR_{B,1}·Θ121, Θ121 = ‖ψ‖². Everything below is a functional of that
//! scalar channel: a maximum-entropy upper bound, cut-off-rate lower bounds,
//! their deterministic large-M limits, and a Monte-Carlo estimate of the
//! Gaussian-mixture mutual information that sits between them.

use crate::channel::{self, LinkSpec, ResponseTable};
use crate::frontend::Constellation;
use crate::mc::{run_estimate, CapacityEstimate, TrialPlan};
use crate::numerics::LOG2_E;
use crate::scenario::{SamplingMode, Scenario};
use num_complex::Complex64;
use rand::Rng;

/// One realization of the correlator signature and its energy.
#[derive(Debug, Clone)]
pub struct ColocatedRealization {
    /// Signature ψ(m) = Ψ12(m)Ψ21(m)s(m).
    pub psi: Vec<Complex64>,
    /// Θ121 = ‖ψ‖².
    pub theta121: f64,
    /// SNR_{B,1} = α²σ_b²/σ_{v1}².
    pub snr_b1: f64,
}

impl ColocatedRealization {
    pub fn from_psi(psi: Vec<Complex64>, snr_b1: f64) -> Self {
        let theta121 = psi.iter().map(|z| z.norm_sqr()).sum();
        Self { psi, theta121, snr_b1 }
    }
}

/// Reusable sampler for co-located realizations; honors the scenario's
/// sampling mode and precomputes the twiddle tables for the tap-level path.
pub struct ColocatedSampler {
    mode: SamplingMode,
    m: usize,
    sigma_s_sq: f64,
    sigma12_sq: f64,
    sigma21_sq: f64,
    snr_b1: f64,
    spec12: LinkSpec,
    spec21: LinkSpec,
    t12: ResponseTable,
    t21: ResponseTable,
}

impl ColocatedSampler {
    pub fn new(sc: &Scenario) -> Self {
        let spec12 = sc.spec12();
        let spec21 = sc.spec21();
        Self {
            mode: sc.sampling,
            m: sc.frame.m,
            sigma_s_sq: sc.sigma_s_sq,
            sigma12_sq: sc.geometry.sigma12_sq(),
            sigma21_sq: sc.geometry.sigma21_sq(),
            snr_b1: sc.snr_b1(),
            t12: ResponseTable::new(spec12.order, spec12.time_offset, sc.frame.m),
            t21: ResponseTable::new(spec21.order, spec21.time_offset, sc.frame.m),
            spec12,
            spec21,
        }
    }

    pub fn draw(&self, rng: &mut impl Rng) -> ColocatedRealization {
        let zero = Complex64::new(0.0, 0.0);
        let mut psi = vec![zero; self.m];
        match self.mode {
            SamplingMode::Marginal => {
                for slot in psi.iter_mut() {
                    let p12 = channel::draw_cn(self.sigma12_sq, rng);
                    let p21 = channel::draw_cn(self.sigma21_sq, rng);
                    let s = channel::draw_cn(self.sigma_s_sq, rng);
                    *slot = p12 * p21 * s;
                }
            }
            SamplingMode::TapLevel => {
                let c12 = channel::draw_taps(&self.spec12, rng);
                let c21 = channel::draw_taps(&self.spec21, rng);
                let mut p12 = vec![zero; self.m];
                let mut p21 = vec![zero; self.m];
                self.t12.apply(&c12, &mut p12);
                self.t21.apply(&c21, &mut p21);
                for (i, slot) in psi.iter_mut().enumerate() {
                    let s = channel::draw_cn(self.sigma_s_sq, rng);
                    *slot = p12[i] * p21[i] * s;
                }
            }
        }
        ColocatedRealization::from_psi(psi, self.snr_b1)
    }
}

/// Draws one co-located realization according to the scenario's sampling
/// mode.
pub fn draw_colocated_realization(sc: &Scenario, rng: &mut impl Rng) -> ColocatedRealization {
    ColocatedSampler::new(sc).draw(rng)
}

/// Maximum-entropy upper bound: (1/M)·E[log₂(1 + SNR_{B,1}·Θ121)].
pub fn c1_upper(sc: &Scenario, plan: &TrialPlan) -> CapacityEstimate {
    sc.validate().expect("scenario failed validation");
    let sampler = ColocatedSampler::new(sc);
    let m = sc.frame.m as f64;
    run_estimate(plan, move |rng| {
        let r = sampler.draw(rng);
        (1.0 + r.snr_b1 * r.theta121).log2() / m
    })
}

/// Deterministic large-M limit of the upper bound:
/// (1/M)·log₂(1 + SNR_{B,1}·M·σ_s²·σ12⁴), with σ12⁴ = (d12²)^{−η}.
pub fn c1_upper_large_m(sc: &Scenario) -> f64 {
    let m = sc.frame.m as f64;
    let sigma12_sq = sc.geometry.sigma12_sq();
    (1.0 + sc.snr_b1() * m * sc.sigma_s_sq * sigma12_sq * sigma12_sq).log2() / m
}

/// Exponent scale Θ·SNR/(4σ_b²) shared by the cut-off expressions.
fn pairwise_scale(theta121: f64, snr_b1: f64, sigma_b_sq: f64) -> f64 {
    theta121 * snr_b1 / (4.0 * sigma_b_sq)
}

/// Cut-off rate of one realization of the scalar channel, for an arbitrary
/// input pmf: −log₂ Σ_{q1,q2} p_{q1}p_{q2}·exp(−Θ·SNR·|β_{q1}−β_{q2}|²/(4σ_b²)).
/// Nonnegative and at most log₂Q.
pub fn cutoff_rate_realization(c: &Constellation, theta121: f64, snr_b1: f64) -> f64 {
    let k = pairwise_scale(theta121, snr_b1, c.sigma_b_sq());
    let points = c.points();
    let probs = c.probs();
    let mut sum = 0.0;
    for (q1, &b1) in points.iter().enumerate() {
        for (q2, &b2) in points.iter().enumerate() {
            sum += probs[q1] * probs[q2] * (-k * (b1 - b2).norm_sqr()).exp();
        }
    }
    (-sum.log2()).max(0.0)
}

/// Reference-point form of the equiprobable cut-off rate, valid for
/// distance-invariant sets: log₂Q − log₂(1 + Σ_{q≥2} e^{−k|β1−βq|²}).
fn cutoff_equiprobable_psk(points: &[Complex64], k: f64) -> f64 {
    let q = points.len() as f64;
    let tail: f64 = points[1..]
        .iter()
        .map(|&b| (-k * (points[0] - b).norm_sqr()).exp())
        .sum();
    (q.log2() - (1.0 + tail).log2()).max(0.0)
}

/// Full double-sum form of the equiprobable cut-off rate.
fn cutoff_equiprobable_general(points: &[Complex64], k: f64) -> f64 {
    let q = points.len() as f64;
    let mut sum = 0.0;
    for &b1 in points {
        for &b2 in points {
            sum += (-k * (b1 - b2).norm_sqr()).exp();
        }
    }
    (-(sum / (q * q)).log2()).max(0.0)
}

/// Cut-off-rate lower bound with equiprobable symbols:
/// (1/M)·E[R₁(Θ121)]. Distance-invariant constellations use the
/// reference-point form, everything else the full double sum.
pub fn c1_lower_cutoff(sc: &Scenario, plan: &TrialPlan) -> CapacityEstimate {
    sc.validate().expect("scenario failed validation");
    let sampler = ColocatedSampler::new(sc);
    let constellation = sc.constellation();
    let sigma_b_sq = constellation.sigma_b_sq();
    let points = constellation.points().to_vec();
    let distance_invariant = constellation.is_distance_invariant();
    let m = sc.frame.m as f64;
    run_estimate(plan, move |rng| {
        let r = sampler.draw(rng);
        let k = pairwise_scale(r.theta121, r.snr_b1, sigma_b_sq);
        let rate = if distance_invariant {
            cutoff_equiprobable_psk(&points, k)
        } else {
            cutoff_equiprobable_general(&points, k)
        };
        rate / m
    })
}

/// Looser minimum-distance lower bound:
/// (1/M)·E[log₂Q − log₂(1 + (Q−1)·e^{−Θ·SNR·δ_min²/(4σ_b²)})].
pub fn c1_lower_min_distance(sc: &Scenario, plan: &TrialPlan) -> CapacityEstimate {
    sc.validate().expect("scenario failed validation");
    let sampler = ColocatedSampler::new(sc);
    let constellation = sc.constellation();
    let sigma_b_sq = constellation.sigma_b_sq();
    let delta_min_sq = constellation.delta_min() * constellation.delta_min();
    let q = constellation.size() as f64;
    let m = sc.frame.m as f64;
    run_estimate(plan, move |rng| {
        let r = sampler.draw(rng);
        let k = pairwise_scale(r.theta121, r.snr_b1, sigma_b_sq);
        (q.log2() - (1.0 + (q - 1.0) * (-k * delta_min_sq).exp()).log2()).max(0.0) / m
    })
}

/// Deterministic large-M limits of the two lower bounds, obtained by
/// replacing Θ121 with its mean M·σ_s²·σ12⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LargeMLowerBounds {
    pub cutoff: f64,
    pub min_distance: f64,
}

pub fn c1_lower_large_m(sc: &Scenario) -> LargeMLowerBounds {
    let constellation = sc.constellation();
    let m = sc.frame.m as f64;
    let sigma12_sq = sc.geometry.sigma12_sq();
    let theta = m * sc.sigma_s_sq * sigma12_sq * sigma12_sq;
    let k = pairwise_scale(theta, sc.snr_b1(), constellation.sigma_b_sq());
    let points = constellation.points();
    let q = constellation.size() as f64;
    let delta_min_sq = constellation.delta_min() * constellation.delta_min();
    LargeMLowerBounds {
        cutoff: cutoff_equiprobable_psk(points, k) / m,
        min_distance: (q.log2() - (1.0 + (q - 1.0) * (-k * delta_min_sq).exp()).log2()).max(0.0)
            / m,
    }
}

/// Monte-Carlo estimate of the Gaussian-mixture mutual information
/// I(b; z₁ | ψ = ξ) in bits, clamped to [0, log₂Q].
///
/// The sufficient statistic normalizes to z = κ·β_q + CN(0, 1) with
/// κ² = Θ121·SNR_{B,1}/σ_b², so the estimate only needs the realization
/// energy. Densities are evaluated in log domain.
pub fn mixture_mutual_information(
    c: &Constellation,
    realization: &ColocatedRealization,
    mc_samples: usize,
    rng: &mut impl Rng,
) -> f64 {
    let kappa = (realization.theta121 * realization.snr_b1 / c.sigma_b_sq()).sqrt();
    let points = c.points();
    let probs = c.probs();
    let ln_probs: Vec<f64> = probs.iter().map(|p| p.ln()).collect();
    let mut acc_log2_f = 0.0;
    for _ in 0..mc_samples {
        let q = c.sample_index(rng);
        let z = kappa * points[q] + channel::draw_cn(1.0, rng);
        // log Σ_q' p_q' exp(−|z − κβ_q'|²), via log-sum-exp
        let exponents: Vec<f64> = points
            .iter()
            .zip(&ln_probs)
            .map(|(&b, &lp)| lp - (z - kappa * b).norm_sqr())
            .collect();
        let max = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + exponents.iter().map(|e| (e - max).exp()).sum::<f64>().ln();
        let ln_f = lse - std::f64::consts::PI.ln();
        acc_log2_f += ln_f * LOG2_E;
    }
    let entropy_bits = -acc_log2_f / mc_samples as f64;
    let noise_entropy_bits = (std::f64::consts::PI * std::f64::consts::E).log2();
    let mi = entropy_bits - noise_entropy_bits;
    mi.clamp(0.0, (c.size() as f64).log2())
}
