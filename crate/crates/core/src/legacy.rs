//! Ergodic capacity, capacity gain, asymptotes, and outage probability of the
//! legacy link.
//!
//! Two estimators are provided for the ergodic capacity. The semi-analytic
//! one integrates the per-subcarrier exponential conditional in closed form
//! (through the `exi` kernel) and averages only over the backscatter symbol
//! and the 1→2 response, which gives it strictly lower variance. The full
//! estimator draws every tap vector and evaluates the log capacity of the
//! composite response; it exists to cross-validate the factorization.

use crate::channel::{self, ResponseTable};
use crate::mc::{run_estimate, CapacityEstimate, TrialPlan};
use crate::numerics::{exi, LOG2_E};
use crate::scenario::Scenario;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LegacyError {
    #[error("the high-SNR gain formula requires a constant-modulus constellation")]
    NonConstantModulus,
}

/// Ergodic capacity of the legacy link with the backscatter device asleep:
/// exi(Γ13)·log₂e b/s/Hz.
pub fn c3_no_backscatter(gamma13: f64) -> f64 {
    exi(gamma13).expect("gamma13 is nonnegative") * LOG2_E
}

/// Conditional mean SNR of subcarrier m given the backscatter symbol and the
/// 1→2 response: Υ₃(m) = Γ13·[1 + α²(σ23²/σ13²)|b|²|Ψ12(m)|²].
pub fn upsilon3(
    gamma13: f64,
    alpha: f64,
    sigma23_sq: f64,
    sigma13_sq: f64,
    b: Complex64,
    psi12_m: Complex64,
) -> f64 {
    gamma13 * (1.0 + alpha * alpha * (sigma23_sq / sigma13_sq) * b.norm_sqr() * psi12_m.norm_sqr())
}

/// Per-frame capacity of a realized composite response in b/s/Hz:
/// (1/M)·Σ_m log₂(1 + snr·|Ψ₃(m)|²).
pub fn frame_capacity(psi3: &[Complex64], snr_l: f64) -> f64 {
    let m = psi3.len() as f64;
    psi3.iter().map(|p| (1.0 + snr_l * p.norm_sqr()).log2()).sum::<f64>() / m
}

/// Semi-analytic Monte-Carlo estimator of the legacy ergodic capacity: the
/// exponential conditional of each subcarrier is integrated in closed form,
/// so only (b, Ψ12(m)) are sampled. Per-subcarrier draws use the exact
/// CN(0, σ12²) marginal, which is unbiased here because the capacity is a sum
/// of per-subcarrier expectations.
pub fn c3_semianalytic(sc: &Scenario, plan: &TrialPlan) -> CapacityEstimate {
    sc.validate().expect("scenario failed validation");
    let constellation = sc.constellation();
    let gamma13 = sc.gamma13();
    let alpha = sc.alpha();
    let sigma13_sq = sc.geometry.sigma13_sq();
    let sigma23_sq = sc.geometry.sigma23_sq().expect("validated geometry");
    let sigma12_sq = sc.geometry.sigma12_sq();
    let m = sc.frame.m;
    run_estimate(plan, move |rng| {
        let b = constellation.sample(rng);
        let mut acc = 0.0;
        for _ in 0..m {
            let psi12 = channel::draw_cn(sigma12_sq, rng);
            let ups = upsilon3(gamma13, alpha, sigma23_sq, sigma13_sq, b, psi12);
            acc += exi(ups).expect("upsilon is nonnegative");
        }
        acc * LOG2_E / m as f64
    })
}

/// Full-tap Monte-Carlo estimator of the legacy ergodic capacity: draws the
/// 1→3, 1→2 and 2→3 tap vectors and the backscatter symbol, forms the
/// composite response, and averages the per-frame capacity.
pub fn c3_mc_full(sc: &Scenario, plan: &TrialPlan) -> CapacityEstimate {
    sc.validate().expect("scenario failed validation");
    let constellation = sc.constellation();
    let alpha = sc.alpha();
    let snr_l = sc.snr_l();
    let m = sc.frame.m;
    let spec12 = sc.spec12();
    let spec13 = sc.spec13();
    let spec23 = sc.spec23();
    let t12 = ResponseTable::new(spec12.order, spec12.time_offset, m);
    let t13 = ResponseTable::new(spec13.order, spec13.time_offset, m);
    let t23 = ResponseTable::new(spec23.order, spec23.time_offset, m);
    run_estimate(plan, move |rng| {
        let c12 = channel::draw_taps(&spec12, rng);
        let c13 = channel::draw_taps(&spec13, rng);
        let c23 = channel::draw_taps(&spec23, rng);
        let b = constellation.sample(rng);
        let zero = Complex64::new(0.0, 0.0);
        let mut psi12 = vec![zero; m];
        let mut psi13 = vec![zero; m];
        let mut psi23 = vec![zero; m];
        t12.apply(&c12, &mut psi12);
        t13.apply(&c13, &mut psi13);
        t23.apply(&c23, &mut psi23);
        let scale = alpha * b;
        let mut acc = 0.0;
        for i in 0..m {
            let psi3 = psi13[i] + scale * psi12[i] * psi23[i];
            acc += (1.0 + snr_l * psi3.norm_sqr()).log2();
        }
        acc / m as f64
    })
}

/// Low-SNR asymptote of the capacity gain:
/// ΔC₃ → α²σ_b²·(σ_s²/σ_{v3}²)·(d12·d23)^{−η}·log₂e.
pub fn delta_c3_low_snr(sc: &Scenario) -> f64 {
    let sigma_b_sq = sc.constellation().sigma_b_sq();
    let d23 = sc.geometry.d23().expect("validated geometry");
    sc.alpha_sq * sigma_b_sq * sc.snr_l() * (sc.geometry.d12 * d23).powf(-sc.geometry.eta) * LOG2_E
}

/// Composite-to-direct gain ratio Ω₃ = α²·(d13/(d12·d23))^η entering the
/// high-SNR asymptote.
pub fn omega3(sc: &Scenario) -> f64 {
    let d23 = sc.geometry.d23().expect("validated geometry");
    sc.alpha_sq * (sc.geometry.d13 / (sc.geometry.d12 * d23)).powf(sc.geometry.eta)
}

/// High-SNR asymptote of the capacity gain for constant-modulus symbol sets.
///
/// The default is exi(Ω₃)·log₂e, a single nat-to-bit conversion of the
/// nat-domain gap. With `strict_paper` the gap picks up a second log₂e
/// factor; the Monte-Carlo ratio checks in the acceptance suite discriminate
/// between the two variants empirically.
pub fn delta_c3_high_snr(sc: &Scenario, strict_paper: bool) -> Result<f64, LegacyError> {
    if !sc.constellation().is_constant_modulus() {
        return Err(LegacyError::NonConstantModulus);
    }
    let base = exi(omega3(sc)).expect("omega3 is nonnegative") * LOG2_E;
    Ok(if strict_paper { base * LOG2_E } else { base })
}

/// Probability that a single frame's mutual information falls below the
/// target rate R_s, with its binomial standard error.
pub fn outage_probability(sc: &Scenario, rate_rs: f64, plan: &TrialPlan) -> CapacityEstimate {
    sc.validate().expect("scenario failed validation");
    let constellation = sc.constellation();
    let alpha = sc.alpha();
    let snr_l = sc.snr_l();
    let m = sc.frame.m;
    let spec12 = sc.spec12();
    let spec13 = sc.spec13();
    let spec23 = sc.spec23();
    let t12 = ResponseTable::new(spec12.order, spec12.time_offset, m);
    let t13 = ResponseTable::new(spec13.order, spec13.time_offset, m);
    let t23 = ResponseTable::new(spec23.order, spec23.time_offset, m);
    run_estimate(plan, move |rng| {
        let c12 = channel::draw_taps(&spec12, rng);
        let c13 = channel::draw_taps(&spec13, rng);
        let c23 = channel::draw_taps(&spec23, rng);
        let b = constellation.sample(rng);
        let zero = Complex64::new(0.0, 0.0);
        let mut psi12 = vec![zero; m];
        let mut psi13 = vec![zero; m];
        let mut psi23 = vec![zero; m];
        t12.apply(&c12, &mut psi12);
        t13.apply(&c13, &mut psi13);
        t23.apply(&c23, &mut psi23);
        let psi3 = channel::composite_legacy_response(&psi13, &psi12, &psi23, alpha, b);
        if frame_capacity(&psi3, snr_l) < rate_rs {
            1.0
        } else {
            0.0
        }
    })
}

/// Which asymptote a distance sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainAsymptote {
    LowSnr,
    HighSnr,
}

/// A capacity-gain curve along the d12 axis with its grid extrema.
#[derive(Debug, Clone)]
pub struct DistanceCurve {
    /// Grid of d12/d13 ratios.
    pub ratios: Vec<f64>,
    pub values: Vec<f64>,
    pub argmin: usize,
    pub argmax: usize,
}

/// Evaluates the chosen ΔC₃ asymptote along a grid of d12/d13 ratios, with
/// d23 recomputed from the cosine law at every point.
pub fn delta_c3_vs_distance(
    sc: &Scenario,
    d12_over_d13_grid: &[f64],
    asymptote: GainAsymptote,
) -> Result<DistanceCurve, LegacyError> {
    assert!(!d12_over_d13_grid.is_empty(), "grid must be nonempty");
    let mut values = Vec::with_capacity(d12_over_d13_grid.len());
    for &ratio in d12_over_d13_grid {
        let mut point = sc.clone();
        point.geometry.d12 = ratio * sc.geometry.d13;
        let v = match asymptote {
            GainAsymptote::LowSnr => delta_c3_low_snr(&point),
            GainAsymptote::HighSnr => delta_c3_high_snr(&point, false)?,
        };
        values.push(v);
    }
    let argmin = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let argmax = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    Ok(DistanceCurve { ratios: d12_over_d13_grid.to_vec(), values, argmin, argmax })
}
