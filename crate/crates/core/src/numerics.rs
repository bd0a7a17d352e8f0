//! Special functions and unitary transform kernels shared by the capacity
//! formulas.
//!
//! Everything here works in the nat domain; conversion to bits (a factor of
//! `LOG2_E`) happens only at capacity-facing call sites so that no quantity is
//! converted twice.

use num_complex::Complex64;
use thiserror::Error;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// log2(e), the nat-to-bit conversion factor.
pub const LOG2_E: f64 = std::f64::consts::LOG2_E;

#[derive(Debug, Error, PartialEq)]
pub enum NumericsError {
    #[error("Ei(x) is evaluated only for finite x < 0, got {0}")]
    EiDomain(f64),
    #[error("exi(x) is defined only for x >= 0, got {0}")]
    ExiDomain(f64),
}

const SERIES_MAX_TERMS: usize = 200;
const CF_MAX_ITERS: usize = 500;

/// Exponential integral Ei(x) = ∫_{-∞}^{x} e^u/u du for x < 0.
///
/// Power series in |x| up to the switchover |x| = 1, modified-Lentz continued
/// fraction beyond it. Both branches are accurate to better than 1e-10
/// relative over |x| in [1e-4, 1e4]; the switchover point was chosen so each
/// branch stays well inside its fast-convergence region.
pub fn ei_negative(x: f64) -> Result<f64, NumericsError> {
    if !x.is_finite() || x >= 0.0 {
        return Err(NumericsError::EiDomain(x));
    }
    let t = -x;
    if t <= 1.0 {
        // Ei(-t) = γ + ln t + Σ_{k≥1} (-t)^k / (k · k!)
        Ok(EULER_GAMMA + t.ln() + ei_series_sum(t))
    } else {
        // Ei(-t) = -e^{-t} · [e^t E1(t)]; the scaled factor stays O(1/t)
        Ok(-(-t).exp() * e1_scaled(t))
    }
}

/// The capacity kernel −e^{1/x}·Ei(−1/x), in nats, extended continuously with
/// exi(0) = 0. Equals E[ln(1 + x·Z)] for Z exponential with unit mean, so it
/// is strictly increasing in x.
///
/// For x ≤ 1 the scaled continued fraction is evaluated directly, which
/// avoids the overflowing e^{1/x} factor entirely.
pub fn exi(x: f64) -> Result<f64, NumericsError> {
    if x.is_nan() || x < 0.0 {
        return Err(NumericsError::ExiDomain(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= 1e-16 {
        // exi(x) = x·(1 - 1!·x + 2!·x² - …); the linear term is exact here
        return Ok(x);
    }
    if x <= 1.0 {
        Ok(e1_scaled(1.0 / x))
    } else {
        let t = 1.0 / x;
        Ok(-t.exp() * (EULER_GAMMA + t.ln() + ei_series_sum(t)))
    }
}

/// Σ_{k≥1} (-t)^k / (k · k!), the entire part of the Ei power series.
fn ei_series_sum(t: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0; // carries (-t)^k / k!
    for k in 1..=SERIES_MAX_TERMS {
        term *= -t / k as f64;
        let contrib = term / k as f64;
        sum += contrib;
        if contrib.abs() <= sum.abs() * f64::EPSILON {
            break;
        }
    }
    sum
}

/// e^t·E1(t) for t ≥ 1 via the continued fraction
/// 1/(t+1-) 1/(t+3-) 4/(t+5-) 9/(t+7-) …, evaluated with modified Lentz.
fn e1_scaled(t: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let mut b = t + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=CF_MAX_ITERS {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Applies the unitary (1/√M-normalized) DFT, or its inverse, to a block.
///
/// Direct O(M²) evaluation of the symmetric transform matrix; block lengths in
/// this crate stay small enough that the matrix definition doubles as the
/// implementation. The phase index is reduced mod M before the trig call to
/// keep arguments small.
pub fn unitary_dft(v: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let m = v.len();
    if m == 0 {
        return Vec::new();
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let scale = 1.0 / (m as f64).sqrt();
    let step = std::f64::consts::TAU / m as f64;
    (0..m)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, &x) in v.iter().enumerate() {
                let phase = sign * step * ((k * p) % m) as f64;
                acc += x * Complex64::from_polar(1.0, phase);
            }
            acc * scale
        })
        .collect()
}
