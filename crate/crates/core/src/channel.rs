//! Network geometry, path-loss variances, Rayleigh tap generation, frequency
//! responses, and tap cascades.
//!
//! Each directed link i→k is a causal FIR channel of order L with an integer
//! time offset θ; its L+1 taps are i.i.d. zero-mean circularly symmetric
//! Gaussian with per-tap variance σ²/(L+1), so that the link carries total
//! power σ² = d^{−η}. Links are statistically independent of one another.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("coincident nodes: Carnot distance evaluated to zero")]
    CoincidentNodes,
}

/// Order, time offset, and total power of one directed link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSpec {
    pub order: usize,
    pub time_offset: usize,
    pub variance: f64,
}

impl LinkSpec {
    pub fn new(order: usize, time_offset: usize, variance: f64) -> Self {
        Self { order, time_offset, variance }
    }

    /// Per-tap variance σ²/(L+1).
    pub fn tap_variance(&self) -> f64 {
        self.variance / (self.order + 1) as f64
    }

    /// L + θ, the per-frame memory footprint of the link.
    pub fn span(&self) -> usize {
        self.order + self.time_offset
    }
}

/// Node placement reduced to the distances and angles the capacity formulas
/// consume. φ is the angle at the legacy transmitter between the backscatter
/// transmitter and the legacy receiver; θ is the angle at the legacy
/// transmitter between the backscatter transmitter and the backscatter
/// receiver, so that d24 follows from (d12, d14, θ) by the cosine law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkGeometry {
    pub d12: f64,
    pub d13: f64,
    pub d14: f64,
    pub phi: f64,
    pub theta: f64,
    pub eta: f64,
}

impl NetworkGeometry {
    pub fn d23(&self) -> Result<f64, ChannelError> {
        carnot_distance(self.d12, self.d13, self.phi)
    }

    pub fn d24(&self) -> Result<f64, ChannelError> {
        carnot_distance(self.d12, self.d14, self.theta)
    }

    pub fn sigma12_sq(&self) -> f64 {
        path_loss_variance(self.d12, self.eta).expect("validated distance")
    }

    pub fn sigma13_sq(&self) -> f64 {
        path_loss_variance(self.d13, self.eta).expect("validated distance")
    }

    pub fn sigma14_sq(&self) -> f64 {
        path_loss_variance(self.d14, self.eta).expect("validated distance")
    }

    pub fn sigma23_sq(&self) -> Result<f64, ChannelError> {
        path_loss_variance(self.d23()?, self.eta)
    }

    pub fn sigma24_sq(&self) -> Result<f64, ChannelError> {
        path_loss_variance(self.d24()?, self.eta)
    }

    /// σ21² = σ12²: same distance in both directions.
    pub fn sigma21_sq(&self) -> f64 {
        self.sigma12_sq()
    }
}

/// One joint realization of all link tap vectors for a coherence interval.
/// The 2→1 return link is drawn independently of 1→2 (equal variance, no
/// reciprocity constraint).
#[derive(Debug, Clone)]
pub struct ChannelDraw {
    pub c12: Vec<Complex64>,
    pub c13: Vec<Complex64>,
    pub c23: Vec<Complex64>,
    pub c14: Vec<Complex64>,
    pub c24: Vec<Complex64>,
    pub c21: Vec<Complex64>,
}

/// Average path-loss power σ² = d^{−η}.
pub fn path_loss_variance(d: f64, eta: f64) -> Result<f64, ChannelError> {
    if d.is_nan() || d <= 0.0 {
        return Err(ChannelError::NonPositiveDistance(d));
    }
    Ok(d.powf(-eta))
}

/// Third side of a triangle from two sides and the included angle
/// (cosine law): √(a² + b² − 2ab·cos(angle)).
pub fn carnot_distance(a: f64, b: f64, angle: f64) -> Result<f64, ChannelError> {
    if a.is_nan() || a <= 0.0 {
        return Err(ChannelError::NonPositiveDistance(a));
    }
    if b.is_nan() || b <= 0.0 {
        return Err(ChannelError::NonPositiveDistance(b));
    }
    let sq = a * a + b * b - 2.0 * a * b * angle.cos();
    let d = sq.max(0.0).sqrt();
    if d == 0.0 {
        return Err(ChannelError::CoincidentNodes);
    }
    Ok(d)
}

/// Stationary points of the composite-path gain along the d12 axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityExtrema {
    /// True when 9cos²φ − 8 < 0, i.e. the gain is strictly decreasing in
    /// d12/d13 everywhere and no interior extrema exist.
    pub in_set_a: bool,
    /// Ratio d12/d13 of the interior local minimum (when defined).
    pub d_min: Option<f64>,
    /// Ratio d12/d13 of the interior local maximum (when defined).
    pub d_max: Option<f64>,
}

/// Locations of the capacity-gain extrema as the backscatter transmitter
/// moves: the roots of 2d² − 3cos(φ)d + 1 = 0 in the normalized distance
/// d = d12/d13.
pub fn mobility_extrema(angle: f64) -> MobilityExtrema {
    let c = angle.cos();
    let disc = 9.0 * c * c - 8.0;
    if disc < 0.0 {
        return MobilityExtrema { in_set_a: true, d_min: None, d_max: None };
    }
    let s = disc.sqrt();
    MobilityExtrema {
        in_set_a: false,
        d_min: Some(((3.0 * c - s) / 4.0).max(0.0)),
        d_max: Some(((3.0 * c + s) / 4.0).max(0.0)),
    }
}

/// One sample of a circularly symmetric complex Gaussian CN(0, σ²).
pub fn draw_cn(sigma_sq: f64, rng: &mut impl Rng) -> Complex64 {
    let std = (sigma_sq / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(std * re, std * im)
}

/// Draws the L+1 Rayleigh taps of a link: each tap CN(0, σ²/(L+1)), i.e.
/// independent real and imaginary parts of variance σ²/(2(L+1)).
pub fn draw_taps(spec: &LinkSpec, rng: &mut impl Rng) -> Vec<Complex64> {
    let tap_var = spec.tap_variance();
    (0..=spec.order).map(|_| draw_cn(tap_var, rng)).collect()
}

/// Per-subcarrier frequency response of a delayed FIR link:
/// Ψ(m) = e^{−j2πθm/M} Σ_ℓ c(ℓ) e^{−j2πℓm/M}, for m = 0..M−1.
pub fn freq_response(taps: &[Complex64], theta: usize, m_subcarriers: usize) -> Vec<Complex64> {
    let m = m_subcarriers;
    let step = -std::f64::consts::TAU / m as f64;
    (0..m)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, &c) in taps.iter().enumerate() {
                let phase = step * (((l + theta) * k) % m) as f64;
                acc += c * Complex64::from_polar(1.0, phase);
            }
            acc
        })
        .collect()
}

/// Precomputed twiddle table for repeated frequency-response evaluation with
/// fixed (order, offset, M). Used by the Monte-Carlo hot paths.
pub struct ResponseTable {
    /// Row m holds e^{−j2π(ℓ+θ)m/M} for ℓ = 0..=L.
    twiddles: Vec<Complex64>,
    taps_len: usize,
    m: usize,
}

impl ResponseTable {
    pub fn new(order: usize, theta: usize, m_subcarriers: usize) -> Self {
        let m = m_subcarriers;
        let step = -std::f64::consts::TAU / m as f64;
        let taps_len = order + 1;
        let mut twiddles = Vec::with_capacity(m * taps_len);
        for k in 0..m {
            for l in 0..taps_len {
                let phase = step * (((l + theta) * k) % m) as f64;
                twiddles.push(Complex64::from_polar(1.0, phase));
            }
        }
        Self { twiddles, taps_len, m }
    }

    pub fn apply(&self, taps: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(taps.len(), self.taps_len);
        debug_assert_eq!(out.len(), self.m);
        for (k, slot) in out.iter_mut().enumerate() {
            let row = &self.twiddles[k * self.taps_len..(k + 1) * self.taps_len];
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, w) in taps.iter().zip(row) {
                acc += c * w;
            }
            *slot = acc;
        }
    }
}

/// Composite legacy response Ψ₃(m) = Ψ₁₃(m) + α·b·Ψ₁₂(m)Ψ₂₃(m), elementwise.
pub fn composite_legacy_response(
    psi13: &[Complex64],
    psi12: &[Complex64],
    psi23: &[Complex64],
    alpha: f64,
    b: Complex64,
) -> Vec<Complex64> {
    assert_eq!(psi13.len(), psi12.len());
    assert_eq!(psi13.len(), psi23.len());
    psi13
        .iter()
        .zip(psi12.iter().zip(psi23))
        .map(|(&a, (&x, &y))| a + alpha * b * x * y)
        .collect()
}

/// Linear convolution of two tap vectors; the composite link has order
/// L_a + L_b and time offset θ_a + θ_b.
pub fn cascade_taps(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
