//! Capacity bounds of the backscatter link when its receiver and the legacy
//! transmitter are distinct nodes.
//!
//! The separated receiver knows the channel responses and the carrier offset
//! but not the legacy data, so conditioned on the backscatter symbol the
//! received block is zero-mean Gaussian with a diagonal covariance in the
//! frequency domain. The per-subcarrier variances Λ_q(m) drive everything: a
//! cut-off-rate lower bound through a product of Bhattacharyya-type factors,
//! a perfect-side-information upper bound through Θ124, and a BPSK
//! closed-form limit governed by the zero-noise ratio J.

use crate::channel::{self, LinkSpec, ResponseTable};
use crate::frontend::Constellation;
use crate::mc::{run_estimate, CapacityEstimate, TrialPlan};
use crate::scenario::{SamplingMode, Scenario};
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SeparatedError {
    #[error("the BPSK closed form requires a BPSK constellation")]
    NotBpsk,
    #[error("covariance ratio exceeds one at subcarrier {m}: {ratio}")]
    RatioExceedsOne { m: usize, ratio: f64 },
}

/// One realization of the three relevant responses and the legacy block.
#[derive(Debug, Clone)]
pub struct SeparatedRealization {
    pub psi12: Vec<Complex64>,
    pub psi24: Vec<Complex64>,
    pub psi14: Vec<Complex64>,
    pub s: Vec<Complex64>,
    /// Θ124 = Σ_m |s(m)|²|Ψ12(m)|²|Ψ24(m)|².
    pub theta124: f64,
    /// SNR_{B,4} = α²σ_b²/σ_{v4}².
    pub snr_b4: f64,
}

impl SeparatedRealization {
    pub fn new(
        psi12: Vec<Complex64>,
        psi24: Vec<Complex64>,
        psi14: Vec<Complex64>,
        s: Vec<Complex64>,
        snr_b4: f64,
    ) -> Self {
        assert_eq!(psi12.len(), psi24.len());
        assert_eq!(psi12.len(), psi14.len());
        assert_eq!(psi12.len(), s.len());
        let theta124 = psi12
            .iter()
            .zip(&psi24)
            .zip(&s)
            .map(|((a, b), c)| a.norm_sqr() * b.norm_sqr() * c.norm_sqr())
            .sum();
        Self { psi12, psi24, psi14, s, theta124, snr_b4 }
    }
}

/// Reusable sampler honoring the scenario's sampling mode. Tap-level sampling
/// preserves the correlation of the responses across subcarriers and is the
/// authoritative mode for the cut-off-rate estimator, whose value depends on
/// whole-frame products.
pub struct SeparatedSampler {
    mode: SamplingMode,
    m: usize,
    sigma_s_sq: f64,
    sigma12_sq: f64,
    sigma24_sq: f64,
    sigma14_sq: f64,
    snr_b4: f64,
    spec12: LinkSpec,
    spec24: LinkSpec,
    spec14: LinkSpec,
    t12: ResponseTable,
    t24: ResponseTable,
    t14: ResponseTable,
}

impl SeparatedSampler {
    pub fn new(sc: &Scenario) -> Self {
        let spec12 = sc.spec12();
        let spec24 = sc.spec24();
        let spec14 = sc.spec14();
        Self {
            mode: sc.sampling,
            m: sc.frame.m,
            sigma_s_sq: sc.sigma_s_sq,
            sigma12_sq: sc.geometry.sigma12_sq(),
            sigma24_sq: sc.geometry.sigma24_sq().expect("validated geometry"),
            sigma14_sq: sc.geometry.sigma14_sq(),
            snr_b4: sc.snr_b4(),
            t12: ResponseTable::new(spec12.order, spec12.time_offset, sc.frame.m),
            t24: ResponseTable::new(spec24.order, spec24.time_offset, sc.frame.m),
            t14: ResponseTable::new(spec14.order, spec14.time_offset, sc.frame.m),
            spec12,
            spec24,
            spec14,
        }
    }

    pub fn draw(&self, rng: &mut impl Rng) -> SeparatedRealization {
        let zero = Complex64::new(0.0, 0.0);
        let s: Vec<Complex64> =
            (0..self.m).map(|_| channel::draw_cn(self.sigma_s_sq, rng)).collect();
        let (psi12, psi24, psi14) = match self.mode {
            SamplingMode::Marginal => (
                (0..self.m).map(|_| channel::draw_cn(self.sigma12_sq, rng)).collect(),
                (0..self.m).map(|_| channel::draw_cn(self.sigma24_sq, rng)).collect(),
                (0..self.m).map(|_| channel::draw_cn(self.sigma14_sq, rng)).collect(),
            ),
            SamplingMode::TapLevel => {
                let c12 = channel::draw_taps(&self.spec12, rng);
                let c24 = channel::draw_taps(&self.spec24, rng);
                let c14 = channel::draw_taps(&self.spec14, rng);
                let mut p12 = vec![zero; self.m];
                let mut p24 = vec![zero; self.m];
                let mut p14 = vec![zero; self.m];
                self.t12.apply(&c12, &mut p12);
                self.t24.apply(&c24, &mut p24);
                self.t14.apply(&c14, &mut p14);
                (p12, p24, p14)
            }
        };
        SeparatedRealization::new(psi12, psi24, psi14, s, self.snr_b4)
    }
}

/// Draws one separated-receiver realization according to the scenario's
/// sampling mode.
pub fn draw_separated_realization(sc: &Scenario, rng: &mut impl Rng) -> SeparatedRealization {
    SeparatedSampler::new(sc).draw(rng)
}

/// Per-symbol, per-subcarrier received variances Λ_q(m), stored row-major
/// with one row per constellation point.
#[derive(Debug, Clone)]
pub struct LambdaSpectrum {
    values: Vec<f64>,
    q: usize,
    m: usize,
}

impl LambdaSpectrum {
    pub fn symbols(&self) -> usize {
        self.q
    }

    pub fn subcarriers(&self) -> usize {
        self.m
    }

    pub fn value(&self, q: usize, m: usize) -> f64 {
        self.values[q * self.m + m]
    }

    pub fn row(&self, q: usize) -> &[f64] {
        &self.values[q * self.m..(q + 1) * self.m]
    }
}

/// Conditional variances of the received subcarriers given symbol β_q:
/// Λ_q(m) = α²σ_s²|Ψ12|²|Ψ24|²|β_q|² + 2ασ_s²·Re{Ψ12Ψ24Ψ14*·β_q}
///        + σ_s²|Ψ14|² + σ_{v4}².
///
/// Positivity is guaranteed analytically (the first three terms complete to
/// σ_s²|α·Ψ12Ψ24·β_q + Ψ14|²) and asserted here.
pub fn lambda_spectrum(
    r: &SeparatedRealization,
    c: &Constellation,
    sigma_s_sq: f64,
    sigma_v4_sq: f64,
    alpha: f64,
) -> LambdaSpectrum {
    let m = r.psi12.len();
    let q = c.size();
    let mut values = Vec::with_capacity(q * m);
    for &beta in c.points() {
        for i in 0..m {
            let prod = r.psi12[i] * r.psi24[i];
            let direct = r.psi14[i];
            let lam = alpha * alpha * sigma_s_sq * prod.norm_sqr() * beta.norm_sqr()
                + 2.0 * alpha * sigma_s_sq * (prod * direct.conj() * beta).re
                + sigma_s_sq * direct.norm_sqr()
                + sigma_v4_sq;
            assert!(
                lam > 0.0,
                "internal consistency failure: Lambda_q(m) = {lam} <= 0 at q-point {beta}, m = {i}"
            );
            values.push(lam);
        }
    }
    LambdaSpectrum { values, q, m }
}

/// Cut-off rate of one realization for equiprobable symbols:
/// log₂Q − log₂[1 + (2^M/Q)·Σ_{q1≠q2} Π_m √(Λ_{q1}Λ_{q2})/(Λ_{q1}+Λ_{q2})],
/// evaluated in the log domain and clamped to be nonnegative.
pub fn cutoff_rate_realization_sep(lambda: &LambdaSpectrum) -> f64 {
    let q = lambda.symbols();
    let m = lambda.subcarriers();
    let ln_q = (q as f64).ln();
    let m_ln2 = m as f64 * std::f64::consts::LN_2;
    let mut inner = 0.0;
    for q1 in 0..q {
        for q2 in (q1 + 1)..q {
            let mut log_prod = 0.0;
            for i in 0..m {
                let l1 = lambda.value(q1, i);
                let l2 = lambda.value(q2, i);
                log_prod += 0.5 * (l1.ln() + l2.ln()) - (l1 + l2).ln();
            }
            // ordered pairs come in symmetric twos
            inner += 2.0 * (m_ln2 + log_prod - ln_q).exp();
        }
    }
    ((q as f64).log2() - (1.0 + inner).log2()).max(0.0)
}

/// Cut-off-rate lower bound: (1/M)·E[R₄] over (s, Ψ12, Ψ24, Ψ14).
pub fn c4_lower(sc: &Scenario, plan: &TrialPlan) -> CapacityEstimate {
    sc.validate().expect("scenario failed validation");
    let sampler = SeparatedSampler::new(sc);
    let constellation = sc.constellation();
    let sigma_s_sq = sc.sigma_s_sq;
    let sigma_v4_sq = sc.sigma_v4_sq;
    let alpha = sc.alpha();
    let m = sc.frame.m as f64;
    run_estimate(plan, move |rng| {
        let r = sampler.draw(rng);
        let lambda = lambda_spectrum(&r, &constellation, sigma_s_sq, sigma_v4_sq, alpha);
        cutoff_rate_realization_sep(&lambda) / m
    })
}

/// Perfect-side-information upper bound: (1/M)·E[log₂(1 + SNR_{B,4}·Θ124)].
pub fn c4_upper(sc: &Scenario, plan: &TrialPlan) -> CapacityEstimate {
    sc.validate().expect("scenario failed validation");
    let sampler = SeparatedSampler::new(sc);
    let m = sc.frame.m as f64;
    run_estimate(plan, move |rng| {
        let r = sampler.draw(rng);
        (1.0 + r.snr_b4 * r.theta124).log2() / m
    })
}

/// Deterministic large-M limit of the upper bound:
/// (1/M)·log₂[1 + SNR_{B,4}·M·σ_s²/(d12·d24)^η], d24 from the cosine law.
pub fn c4_upper_large_m(sc: &Scenario) -> f64 {
    let m = sc.frame.m as f64;
    let d24 = sc.geometry.d24().expect("validated geometry");
    let gain = (sc.geometry.d12 * d24).powf(-sc.geometry.eta);
    (1.0 + sc.snr_b4() * m * sc.sigma_s_sq * gain).log2() / m
}

/// BPSK covariance split of Λ into a symbol-independent part and the
/// cross-term whose sign tracks the symbol.
pub struct BpskLambdaSplit {
    /// Λcommon(m) = α²σ_s²|Ψ12Ψ24|² + σ_s²|Ψ14|² + σ_{v4}².
    pub common: Vec<f64>,
    /// Λcross(m) = 2ασ_s²·Re{Ψ12Ψ24Ψ14*}.
    pub cross: Vec<f64>,
}

pub fn bpsk_lambda_split(
    r: &SeparatedRealization,
    sigma_s_sq: f64,
    sigma_v4_sq: f64,
    alpha: f64,
) -> BpskLambdaSplit {
    let mut common = Vec::with_capacity(r.psi12.len());
    let mut cross = Vec::with_capacity(r.psi12.len());
    for i in 0..r.psi12.len() {
        let prod = r.psi12[i] * r.psi24[i];
        let direct = r.psi14[i];
        common.push(
            alpha * alpha * sigma_s_sq * prod.norm_sqr()
                + sigma_s_sq * direct.norm_sqr()
                + sigma_v4_sq,
        );
        cross.push(2.0 * alpha * sigma_s_sq * (prod * direct.conj()).re);
    }
    BpskLambdaSplit { common, cross }
}

/// Π_m √(1 − (Λcross(m)/Λcommon(m))²), evaluated in the log domain. The
/// BPSK cut-off rate of the realization is 1 − log₂(1 + product).
pub fn bpsk_product_factor(
    lambda_common: &[f64],
    lambda_cross: &[f64],
) -> Result<f64, SeparatedError> {
    assert_eq!(lambda_common.len(), lambda_cross.len());
    let mut log_prod = 0.0;
    for (i, (&com, &cr)) in lambda_common.iter().zip(lambda_cross).enumerate() {
        let ratio = cr / com;
        let rem = 1.0 - ratio * ratio;
        if rem < -1e-9 {
            return Err(SeparatedError::RatioExceedsOne { m: i, ratio: ratio.abs() });
        }
        if rem <= 0.0 {
            return Ok(0.0);
        }
        log_prod += 0.5 * rem.ln();
    }
    Ok(log_prod.exp())
}

/// BPSK cut-off rate from the product factor: 1 − log₂(1 + product).
pub fn bpsk_cutoff_from_factor(product: f64) -> f64 {
    (1.0 - (1.0 + product).log2()).max(0.0)
}

/// Zero-noise mean-square ratio J = 1/(1 + 2/D + D) with
/// D = (d12·d24/d14)^η / α², d24 from the cosine law.
pub fn j_function(d12: f64, d14: f64, theta: f64, eta: f64, alpha: f64) -> f64 {
    let d24 = channel::carnot_distance(d12, d14, theta).expect("positive distances");
    let d = (d12 * d24 / d14).powf(eta) / (alpha * alpha);
    1.0 / (1.0 + 2.0 / d + d)
}

/// Low-noise BPSK closed-form lower bound:
/// (1/M)·[1 − log₂(1 + (1 − J(d12))^{M/2})].
pub fn bpsk_lower_closed_form(sc: &Scenario) -> Result<f64, SeparatedError> {
    let c = sc.constellation();
    if c.size() != 2 || !c.is_constant_modulus() {
        return Err(SeparatedError::NotBpsk);
    }
    let g = &sc.geometry;
    let j = j_function(g.d12, g.d14, g.theta, g.eta, sc.alpha());
    let m = sc.frame.m as f64;
    Ok((1.0 - (1.0 + (1.0 - j).powf(m / 2.0)).log2()).max(0.0) / m)
}
