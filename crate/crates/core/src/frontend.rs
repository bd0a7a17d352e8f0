//! Backscatter transmitter front-end algebra: symbol constellations, power
//! wave reflection coefficients, chip impedances, and harvested power.
//!
//! The transmitter encodes a symbol β_q by switching its chip impedance, which
//! sets the reflection coefficient Γ_q = α·β_q seen at the antenna port. The
//! scaling α ∈ [0, 1] trades backscattered signal strength against harvested
//! power; α = 0 is sleep mode (no reflection, maximum harvesting).

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FrontendError {
    #[error("symbol index {0} out of range for a {1}-point constellation")]
    SymbolIndex(usize, usize),
    #[error("degenerate circuit: reflection coefficient -1 has no finite chip impedance")]
    DegenerateReflection,
    #[error("degenerate circuit: antenna and chip impedances sum to zero")]
    DegenerateImpedancePair,
    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),
}

/// Complex impedance R + jX in ohms. Passive realizability requires R ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impedance {
    pub resistance: f64,
    pub reactance: f64,
}

impl Impedance {
    pub fn new(resistance: f64, reactance: f64) -> Self {
        Self { resistance, reactance }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.resistance, self.reactance)
    }
}

/// Power wave reflection coefficient, constrained to the closed unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionCoefficient(pub Complex64);

impl ReflectionCoefficient {
    pub fn magnitude_sq(&self) -> f64 {
        self.0.norm_sqr()
    }
}

/// Signaling kind for the stock constellations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstellationKind {
    Bpsk,
    Qpsk,
    Ask4,
}

/// How a non-constant-modulus constellation is scaled.
///
/// `MaxAmplitude` keeps every point inside the unit disk (the physical
/// amplitude constraint of load modulation) and lets the mean-square power
/// σ_b² fall below one. `UnitEnergy` forces σ_b² = 1 instead, which for 4-ASK
/// pushes the outer points to |β| = 3/√5 > 1; it exists so that results can be
/// compared against conventions that normalize symbol energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    MaxAmplitude,
    UnitEnergy,
}

/// A finite backscatter symbol set {β_q} with probabilities {p_q} and the
/// reflection scaling α.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<Complex64>,
    probs: Vec<f64>,
    alpha: f64,
}

impl Constellation {
    /// Builds a constellation, enforcing the amplitude constraint |β_q| ≤ 1.
    pub fn new(
        points: Vec<Complex64>,
        probs: Vec<f64>,
        alpha: f64,
    ) -> Result<Self, FrontendError> {
        let c = Self::new_relaxed(points, probs, alpha)?;
        if let Some(p) = c.points.iter().find(|p| p.norm() > 1.0 + 1e-12) {
            return Err(FrontendError::InvalidConstellation(format!(
                "amplitude constraint violated: |{p}| > 1"
            )));
        }
        Ok(c)
    }

    /// Like [`Constellation::new`] but without the unit-amplitude cap. Used by
    /// the unit-energy 4-ASK variant, whose outer points exceed the disk.
    pub fn new_relaxed(
        points: Vec<Complex64>,
        probs: Vec<f64>,
        alpha: f64,
    ) -> Result<Self, FrontendError> {
        if points.is_empty() || points.len() != probs.len() {
            return Err(FrontendError::InvalidConstellation(
                "points and probabilities must be nonempty and equal-length".into(),
            ));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(FrontendError::InvalidConstellation(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        if points.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(FrontendError::InvalidConstellation("non-finite point".into()));
        }
        if probs.iter().any(|&p| p.is_nan() || p < 0.0) {
            return Err(FrontendError::InvalidConstellation("negative probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(FrontendError::InvalidConstellation(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if (points[i] - points[j]).norm() == 0.0 {
                    return Err(FrontendError::InvalidConstellation(
                        "points must be pairwise distinct".into(),
                    ));
                }
            }
        }
        Ok(Self { points, probs, alpha })
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Mean-square symbol power σ_b² = Σ p_q |β_q|².
    pub fn sigma_b_sq(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.probs)
            .map(|(b, p)| p * b.norm_sqr())
            .sum()
    }

    /// Minimum distance δ_min between any two constellation points.
    pub fn delta_min(&self) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                d = d.min((self.points[i] - self.points[j]).norm());
            }
        }
        d
    }

    /// True when every point has the same magnitude (PSK-like sets).
    pub fn is_constant_modulus(&self) -> bool {
        let r0 = self.points[0].norm();
        self.points.iter().all(|p| (p.norm() - r0).abs() < 1e-12)
    }

    /// True when the multiset of distances to the other points does not
    /// depend on the reference point. PSK and orthogonal sets qualify; for
    /// such sets the equiprobable assignment maximizes the cut-off rate.
    pub fn is_distance_invariant(&self) -> bool {
        let dist_profile = |q: usize| {
            let mut d: Vec<f64> = (0..self.points.len())
                .filter(|&j| j != q)
                .map(|j| (self.points[q] - self.points[j]).norm())
                .collect();
            d.sort_by(|a, b| a.partial_cmp(b).unwrap());
            d
        };
        let reference = dist_profile(0);
        (1..self.points.len()).all(|q| {
            dist_profile(q)
                .iter()
                .zip(&reference)
                .all(|(a, b)| (a - b).abs() < 1e-12)
        })
    }

    /// Draws a symbol index according to the constellation probabilities.
    pub fn sample_index(&self, rng: &mut impl rand::Rng) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (q, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return q;
            }
        }
        self.probs.len() - 1
    }

    /// Draws a symbol value according to the constellation probabilities.
    pub fn sample(&self, rng: &mut impl rand::Rng) -> Complex64 {
        self.points[self.sample_index(rng)]
    }
}

/// Γ_q = α·β_q, the load-modulation map from symbol index to reflection
/// coefficient.
pub fn reflection_from_symbol(
    c: &Constellation,
    q: usize,
) -> Result<ReflectionCoefficient, FrontendError> {
    if q >= c.size() {
        return Err(FrontendError::SymbolIndex(q, c.size()));
    }
    Ok(ReflectionCoefficient(c.alpha() * c.points()[q]))
}

/// Chip impedance realizing a target reflection coefficient:
/// Z_q^c = ((Z^a)* − Z^a·Γ_q) / (1 + Γ_q).
pub fn chip_impedance(
    za: Impedance,
    gamma: ReflectionCoefficient,
) -> Result<Impedance, FrontendError> {
    let g = gamma.0;
    let denom = Complex64::new(1.0, 0.0) + g;
    if denom.norm() < 1e-300 {
        return Err(FrontendError::DegenerateReflection);
    }
    let z = (za.as_complex().conj() - za.as_complex() * g) / denom;
    Ok(Impedance::new(z.re, z.im))
}

/// Power wave reflection coefficient of an antenna/chip impedance pair:
/// Γ = ((Z^a)* − Z^c) / (Z^a + Z^c).
pub fn reflection_from_impedance(
    za: Impedance,
    zc: Impedance,
) -> Result<ReflectionCoefficient, FrontendError> {
    let denom = za.as_complex() + zc.as_complex();
    if denom.norm() < 1e-300 {
        return Err(FrontendError::DegenerateImpedancePair);
    }
    Ok(ReflectionCoefficient(
        (za.as_complex().conj() - zc.as_complex()) / denom,
    ))
}

/// Fraction 1 − |Γ|² of the maximum available power that is delivered to the
/// chip (harvested) rather than reflected.
pub fn harvested_fraction(gamma: ReflectionCoefficient) -> f64 {
    1.0 - gamma.magnitude_sq()
}

/// Stock equiprobable constellation with the default max-amplitude
/// normalization.
pub fn standard_constellation(kind: ConstellationKind, alpha: f64) -> Constellation {
    standard_constellation_with(kind, alpha, Normalization::MaxAmplitude)
}

/// Stock equiprobable constellation with an explicit normalization policy.
///
/// BPSK and QPSK are constant-modulus with |β_q| = 1 and σ_b² = 1 under
/// either policy. 4-ASK uses the symmetric levels {±λ, ±λ/3}: λ = 1 under
/// `MaxAmplitude` (σ_b² = 5/9), λ = 3/√5 under `UnitEnergy` (σ_b² = 1, outer
/// points outside the unit disk).
pub fn standard_constellation_with(
    kind: ConstellationKind,
    alpha: f64,
    normalization: Normalization,
) -> Constellation {
    let (points, relaxed): (Vec<Complex64>, bool) = match kind {
        ConstellationKind::Bpsk => (
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            false,
        ),
        ConstellationKind::Qpsk => (
            (0..4)
                .map(|k| {
                    Complex64::from_polar(
                        1.0,
                        std::f64::consts::FRAC_PI_4
                            + k as f64 * std::f64::consts::FRAC_PI_2,
                    )
                })
                .collect(),
            false,
        ),
        ConstellationKind::Ask4 => {
            let lambda = match normalization {
                Normalization::MaxAmplitude => 1.0,
                Normalization::UnitEnergy => 3.0 / 5f64.sqrt(),
            };
            (
                [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0]
                    .iter()
                    .map(|&l| Complex64::new(lambda * l, 0.0))
                    .collect(),
                normalization == Normalization::UnitEnergy,
            )
        }
    };
    let q = points.len();
    let probs = vec![1.0 / q as f64; q];
    if relaxed {
        Constellation::new_relaxed(points, probs, alpha)
    } else {
        Constellation::new(points, probs, alpha)
    }
    .expect("stock constellation parameters are valid")
}
