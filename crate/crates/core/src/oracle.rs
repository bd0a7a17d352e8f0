//! Time-domain brute-force propagation of one legacy frame through the full
//! matrix signal model.
//!
//! One frame of P = M + L_cp samples is pushed through dense P×P Toeplitz
//! channel matrices, including inter-block interference from the previous
//! frame, the reflection at the backscatter transmitter, and the carrier
//! frequency offset ramp at the separated receiver. This is the ground truth
//! against which the diagonal frequency-domain models are verified; it is
//! deliberately dense and unoptimized.

use crate::channel::ChannelDraw;
use crate::numerics::unitary_dft;
use crate::scenario::{FrameConfig, LinkTimings, ScenarioError};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("link span L+theta = {span} exceeds frame limit P-1 = {limit}")]
    SpanExceedsFrame { span: usize, limit: usize },
    #[error(transparent)]
    Frame(#[from] ScenarioError),
    #[error("length mismatch: {0}")]
    Length(String),
}

/// Time-domain vectors of one propagated legacy frame.
#[derive(Debug, Clone)]
pub struct FrameSignals {
    /// Transmitted block u(n) of the current frame.
    pub u_curr: Vec<Complex64>,
    /// Transmitted block u(n−1) of the previous frame.
    pub u_prev: Vec<Complex64>,
    /// Block arriving at the backscatter transmitter.
    pub r2: Vec<Complex64>,
    /// Block re-radiated by the backscatter transmitter: x̃₂ = α·b(n)·r̃₂.
    pub x2: Vec<Complex64>,
    /// Block received by the legacy receiver (noise included).
    pub r3_time: Vec<Complex64>,
    /// Block received by the separated backscatter receiver (CFO ramp and
    /// noise included).
    pub r4_time: Vec<Complex64>,
}

/// Everything `propagate_frame` needs for one frame of index n.
pub struct FrameInput<'a> {
    pub draw: &'a ChannelDraw,
    pub links: &'a LinkTimings,
    pub frame: FrameConfig,
    pub s_curr: &'a [Complex64],
    pub s_prev: &'a [Complex64],
    pub b_curr: Complex64,
    pub b_prev: Complex64,
    pub alpha: f64,
    /// Additive noise at the legacy receiver, length P. Structural-mode
    /// scattering is folded in here.
    pub noise3: &'a [Complex64],
    /// Additive noise at the separated backscatter receiver, length P.
    pub noise4: &'a [Complex64],
    /// Carrier frequency offset normalized to the subcarrier spacing.
    pub nu: f64,
    /// Frame index n; enters only through the phase e^{j2πνnP/M}.
    pub frame_index: i64,
}

/// Splits a delayed FIR link into its intra-frame and inter-frame Toeplitz
/// matrices: C0 = Σ_ℓ c(ℓ)·F^{ℓ+θ} (lower triangular) and
/// C1 = Σ_ℓ c(ℓ)·B^{P−ℓ−θ} (upper triangular), so that the block received in
/// frame n is C0·x(n) + C1·x(n−1).
pub fn shift_toeplitz_pair(
    taps: &[Complex64],
    theta: usize,
    p: usize,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>), OracleError> {
    let order = taps.len().saturating_sub(1);
    if order + theta > p.saturating_sub(1) {
        return Err(OracleError::SpanExceedsFrame { span: order + theta, limit: p - 1 });
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut c0 = DMatrix::from_element(p, p, zero);
    let mut c1 = DMatrix::from_element(p, p, zero);
    for (l, &c) in taps.iter().enumerate() {
        let shift = l + theta;
        for i in shift..p {
            c0[(i, i - shift)] = c;
        }
        if shift > 0 {
            let off = p - shift;
            for i in 0..(p - off) {
                c1[(i, i + off)] = c;
            }
        }
        // shift == 0 contributes B^P = 0: the link has no inter-frame leakage
    }
    Ok((c0, c1))
}

/// Multicarrier precoding: unitary IDFT followed by cyclic-prefix insertion.
/// The first L_cp entries replicate the last L_cp entries of the IDFT output.
pub fn legacy_modulate(s: &[Complex64], cfg: FrameConfig) -> Vec<Complex64> {
    assert_eq!(s.len(), cfg.m, "symbol block must have M entries");
    let a = unitary_dft(s, true);
    let mut u = Vec::with_capacity(cfg.p());
    u.extend_from_slice(&a[cfg.m - cfg.l_cp..]);
    u.extend_from_slice(&a);
    u
}

/// Drops the cyclic prefix and applies the unitary DFT.
pub fn lrx_demodulate(r3_time: &[Complex64], cfg: FrameConfig) -> Vec<Complex64> {
    unitary_dft(&r3_time[cfg.l_cp..], false)
}

/// Drops the first L_cp samples (L_b = L_cp) and counter-rotates the carrier
/// frequency offset: entry i is multiplied by e^{−j2πν(nP + L_cp + i)/M}.
pub fn brx_reduce(r4_time: &[Complex64], cfg: FrameConfig, nu: f64, frame_index: i64) -> Vec<Complex64> {
    let rate = std::f64::consts::TAU * nu / cfg.m as f64;
    let base = frame_index as f64 * cfg.p() as f64 + cfg.l_cp as f64;
    r4_time[cfg.l_cp..]
        .iter()
        .enumerate()
        .map(|(i, &x)| x * Complex64::from_polar(1.0, -rate * (base + i as f64)))
        .collect()
}

/// Propagates one frame through the full time-domain model and returns every
/// intermediate block.
pub fn propagate_frame(input: &FrameInput) -> Result<FrameSignals, OracleError> {
    let cfg = input.frame;
    let p = cfg.p();
    validate_conditions(cfg, input.links)?;
    for (name, v) in [("noise3", input.noise3), ("noise4", input.noise4)] {
        if v.len() != p {
            return Err(OracleError::Length(format!("{name} must have P = {p} entries, got {}", v.len())));
        }
    }

    let (c12_0, c12_1) = shift_toeplitz_pair(&input.draw.c12, input.links.l12.time_offset, p)?;
    let (c13_0, c13_1) = shift_toeplitz_pair(&input.draw.c13, input.links.l13.time_offset, p)?;
    let (c23_0, c23_1) = shift_toeplitz_pair(&input.draw.c23, input.links.l23.time_offset, p)?;
    let (c14_0, c14_1) = shift_toeplitz_pair(&input.draw.c14, input.links.l14.time_offset, p)?;
    let (c24_0, c24_1) = shift_toeplitz_pair(&input.draw.c24, input.links.l24.time_offset, p)?;

    let u_curr = legacy_modulate(input.s_curr, cfg);
    let u_prev = legacy_modulate(input.s_prev, cfg);
    let uc = DVector::from_column_slice(&u_curr);
    let up = DVector::from_column_slice(&u_prev);

    let gamma_curr = input.alpha * input.b_curr;
    let gamma_prev = input.alpha * input.b_prev;

    // r̃₂(n) = C12⁰ u(n) + C12¹ u(n−1); x̃₂(n) = Γ(n)·r̃₂(n)
    let r2 = &c12_0 * &uc + &c12_1 * &up;
    let x2 = r2.map(|v| gamma_curr * v);
    // intra-frame part of x̃₂(n−1); its inter-frame part cannot reach frame n
    // because C23¹C12¹ = 0 under the composite-order condition
    let x2_prev_intra = (&c12_0 * &up).map(|v| gamma_prev * v);

    let r3 = &c13_0 * &uc
        + &c13_1 * &up
        + &c23_0 * &x2
        + &c23_1 * &x2_prev_intra
        + DVector::from_column_slice(input.noise3);

    // separated receiver: CFO ramp Σ_ν plus the per-frame phase e^{j2πνnP/M}
    let core = (&c24_0 * &x2 + &c24_1 * &x2_prev_intra) + (&c14_0 * &uc + &c14_1 * &up);
    let rate = std::f64::consts::TAU * input.nu / cfg.m as f64;
    let frame_phase = rate * input.frame_index as f64 * p as f64;
    let r4: Vec<Complex64> = core
        .iter()
        .enumerate()
        .map(|(i, &v)| v * Complex64::from_polar(1.0, frame_phase + rate * i as f64))
        .zip(input.noise4)
        .map(|(v, &w)| v + w)
        .collect();

    Ok(FrameSignals {
        u_curr,
        u_prev,
        r2: r2.as_slice().to_vec(),
        x2: x2.as_slice().to_vec(),
        r3_time: r3.as_slice().to_vec(),
        r4_time: r4,
    })
}

/// Frame inequalities required by the propagation algebra, reported with the
/// specific violated bound.
fn validate_conditions(frame: FrameConfig, links: &LinkTimings) -> Result<(), ScenarioError> {
    let (m, l_cp) = (frame.m, frame.l_cp);
    if l_cp == 0 || l_cp >= m {
        return Err(ScenarioError::CpLength { l_cp, m });
    }
    let limit = frame.p() - 1;
    for (name, t) in [
        ("12", links.l12),
        ("13", links.l13),
        ("23", links.l23),
        ("14", links.l14),
        ("24", links.l24),
    ] {
        if t.span() > limit {
            return Err(ScenarioError::Ibi { link: name, span: t.span(), limit });
        }
    }
    let direct = links.l13.span();
    if l_cp < direct {
        return Err(ScenarioError::CpDirect { l_cp, required: direct });
    }
    let composite_lrx = links.l12.span() + links.l23.span();
    if l_cp < composite_lrx {
        return Err(ScenarioError::CpComposite { l_cp, required: composite_lrx });
    }
    if composite_lrx > limit {
        return Err(ScenarioError::CompositeLrx { span: composite_lrx, limit });
    }
    let composite_brx = links.l12.span() + links.l24.span();
    if composite_brx > limit {
        return Err(ScenarioError::CompositeBrx { span: composite_brx, limit });
    }
    Ok(())
}
