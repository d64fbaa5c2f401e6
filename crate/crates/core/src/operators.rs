//! Walk operators and states on the truncated phase-space realization.
//!
//! The walker lives on `d` cyclic sites. Two bases matter:
//!
//! - the *phase-site* basis, the positions of the walk, where the shift is a
//!   permutation and probability distributions are read off directly;
//! - the *number* (Fourier) basis, where the shift generator and the
//!   simultaneous coin-and-shift (SCS) generator are block-diagonal.
//!
//! [`StateVector`] stores phase-site amplitudes in walker-major layout
//! (flat index `2 n + s`). Constructors that are natural in the number basis
//! ([`coherent_state`], [`StateVector::number_state`]) apply the discrete
//! Fourier transform once, at construction, so every state composes directly
//! with the position-basis operators returned by the builders here.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qmath::{kron, pauli_rotation, BlochVector, C64, CMatrix, CVector};
use crate::tol;

/// One step of walk dynamics: a dense 2d x 2d unitary in the phase-site basis.
pub type WalkOperator = CMatrix;

/// Parameters of a discrete-time quantum walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    /// Number of cyclic sites.
    pub d: usize,
    /// Coin rotation angle in radians.
    pub theta: f64,
}

impl WalkConfig {
    /// Validated constructor: `d >= 1` and `theta` in `[0, pi/2]`.
    pub fn new(d: usize, theta: f64) -> Result<Self> {
        let cfg = Self { d, theta };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::InvalidConfig("site count d must be >= 1".into()));
        }
        if !self.theta.is_finite() || self.theta < 0.0 || self.theta > std::f64::consts::FRAC_PI_2
        {
            return Err(Error::InvalidConfig(format!(
                "coin angle theta = {} outside [0, pi/2]",
                self.theta
            )));
        }
        Ok(())
    }
}

/// Angle pair of the simultaneous coin-and-shift evolution:
/// `u1` is the spin-dependent rotation per site index, `u2` the coin angle.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScsParams {
    pub u1: f64,
    pub u2: f64,
}

impl ScsParams {
    pub fn new(u1: f64, u2: f64) -> Self {
        Self { u1, u2 }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.u1.is_finite() || !self.u2.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "SCS angles must be finite, got ({}, {})",
                self.u1, self.u2
            )));
        }
        Ok(())
    }
}

/// Coin basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinState {
    Zero,
    One,
}

impl CoinState {
    pub fn index(self) -> usize {
        match self {
            CoinState::Zero => 0,
            CoinState::One => 1,
        }
    }
}

/// Pure state of the composite walker-coin system.
///
/// Amplitudes are phase-site coefficients in walker-major layout: the entry
/// at flat index `2 n + s` is the amplitude on site `n` with coin state `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    d: usize,
    amplitudes: CVector,
}

impl StateVector {
    /// Wrap amplitudes, checking length and unit norm.
    pub fn new(d: usize, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != 2 * d {
            return Err(Error::DimensionMismatch {
                expected: 2 * d,
                got: amplitudes.len(),
            });
        }
        let deviation = (amplitudes.norm() - 1.0).abs();
        if deviation > tol::STATE_NORM {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { d, amplitudes })
    }

    pub(crate) fn from_unchecked(d: usize, amplitudes: CVector) -> Self {
        Self { d, amplitudes }
    }

    /// Basis state on phase site `n` with the given coin state.
    pub fn phase_site(d: usize, n: usize, coin: CoinState) -> Result<Self> {
        if n >= d {
            return Err(Error::DimensionMismatch { expected: d, got: n });
        }
        let mut amplitudes = CVector::zeros(2 * d);
        amplitudes[2 * n + coin.index()] = C64::ONE;
        Ok(Self { d, amplitudes })
    }

    /// Number state `|m> (x) |s>`, expressed in the phase-site basis.
    pub fn number_state(d: usize, m: usize, coin: CoinState) -> Result<Self> {
        if m >= d {
            return Err(Error::DimensionMismatch { expected: d, got: m });
        }
        let fourier = walk_fourier(d);
        let mut amplitudes = CVector::zeros(2 * d);
        for n in 0..d {
            amplitudes[2 * n + coin.index()] = fourier[(n, m)];
        }
        Ok(Self { d, amplitudes })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        2 * self.d
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Amplitude on site `n` with coin state `s` (`s` in `{0, 1}`).
    pub fn amplitude(&self, n: usize, s: usize) -> C64 {
        self.amplitudes[2 * n + s]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// The same physical state with a global phase attached.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let factor = (C64::I * phase).exp();
        Self {
            d: self.d,
            amplitudes: self.amplitudes.map(|z| z * factor),
        }
    }
}

/// Coin rotation `[[cos t, -i sin t], [-i sin t, cos t]]`.
pub fn build_coin(theta: f64) -> CMatrix {
    pauli_rotation(theta, BlochVector::new(1.0, 0.0, 0.0))
}

/// Spin-conditioned cyclic shift: `|n>|0> -> |n+1>|0>`, `|n>|1> -> |n-1>|1>`
/// (indices mod `d`).
pub fn build_shift(d: usize) -> WalkOperator {
    let mut s = CMatrix::zeros(2 * d, 2 * d);
    for n in 0..d {
        s[(2 * ((n + 1) % d), 2 * n)] = C64::ONE;
        s[(2 * ((n + d - 1) % d) + 1, 2 * n + 1)] = C64::ONE;
    }
    s
}

/// One walk step: shift after coin.
pub fn build_dtqw(cfg: &WalkConfig) -> WalkOperator {
    build_shift(cfg.d) * kron(&CMatrix::identity(cfg.d, cfg.d), &build_coin(cfg.theta))
}

/// Phase-site basis as a matrix: entry `(m, n)` is `exp(i 2 pi m n / d) / sqrt(d)`,
/// so column `n` is the phase state at angle `2 pi n / d` in the number basis.
pub fn phase_distribution_basis(d: usize) -> CMatrix {
    let step = std::f64::consts::TAU / d as f64;
    let scale = 1.0 / (d as f64).sqrt();
    CMatrix::from_fn(d, d, |m, n| {
        Complex::from_polar(scale, step * (m * n % d) as f64)
    })
}

/// Fourier transform of the walk: column `k` is the quasi-momentum state at
/// `2 pi k / d` in the phase-site basis (entries `exp(-i 2 pi n k / d) / sqrt(d)`).
///
/// Conjugating a phase-site operator with this matrix block-diagonalizes
/// everything built from the shift and coin generators. It is the entrywise
/// conjugate of [`phase_distribution_basis`].
pub fn walk_fourier(d: usize) -> CMatrix {
    phase_distribution_basis(d).conjugate()
}

/// The 2x2 quasi-momentum block `exp(i a sigma_z - i u2 sigma_x)` of the SCS
/// evolution, with `a = u1 m`.
fn scs_block(u1: f64, u2: f64, m: usize) -> CMatrix {
    let a = u1 * m as f64;
    let eps = a.hypot(u2);
    if eps == 0.0 {
        return CMatrix::identity(2, 2);
    }
    pauli_rotation(eps, BlochVector::new(u2 / eps, 0.0, -a / eps))
}

/// Simultaneous coin-and-shift step in the phase-site basis.
///
/// Block-diagonal in the number basis with blocks
/// `exp(i u1 m sigma_z - i u2 sigma_x)`, brought to the phase-site basis by
/// Fourier conjugation so it composes with [`StateVector`] amplitudes.
/// Angles are used as given; the coupled exponent is not 2 pi periodic in
/// `u2`, so no reduction is applied.
pub fn build_scs(d: usize, params: &ScsParams) -> WalkOperator {
    let mut blocks = CMatrix::zeros(2 * d, 2 * d);
    for m in 0..d {
        blocks
            .view_mut((2 * m, 2 * m), (2, 2))
            .copy_from(&scs_block(params.u1, params.u2, m));
    }
    let fourier = kron(&walk_fourier(d), &CMatrix::identity(2, 2));
    &fourier * blocks * fourier.adjoint()
}

/// A coherent state truncated to the first `d` number states.
#[derive(Debug, Clone)]
pub struct CoherentState {
    /// Renormalized truncated state, coin factor in the requested basis state.
    pub state: StateVector,
    /// Fraction of the untruncated norm retained by the first `d` number
    /// states. Below [`tol::COHERENT_RETAINED_MIN`] the truncation distorts
    /// the state badly; callers should surface that.
    pub retained_fraction: f64,
}

impl CoherentState {
    pub fn is_heavily_truncated(&self) -> bool {
        self.retained_fraction < tol::COHERENT_RETAINED_MIN
    }
}

/// Coherent state of amplitude `alpha`, truncated to `d` number states,
/// renormalized, and expressed in the phase-site basis.
///
/// The number-basis profile is proportional to `alpha^m / sqrt(m!)`.
pub fn coherent_state(alpha: C64, d: usize, coin: CoinState) -> Result<CoherentState> {
    if d < 1 {
        return Err(Error::InvalidConfig("site count d must be >= 1".into()));
    }
    let mut number = CVector::zeros(d);
    number[0] = C64::ONE;
    for m in 1..d {
        let prev = number[m - 1];
        number[m] = prev * alpha / (m as f64).sqrt();
    }
    let truncated_weight: f64 = number.iter().map(|z| z.norm_sqr()).sum();
    let retained_fraction = truncated_weight * (-alpha.norm_sqr()).exp();
    let number = number.unscale(truncated_weight.sqrt());

    let walker = walk_fourier(d) * number;
    let mut amplitudes = CVector::zeros(2 * d);
    for n in 0..d {
        amplitudes[2 * n + coin.index()] = walker[n];
    }
    Ok(CoherentState {
        state: StateVector::from_unchecked(d, amplitudes),
        retained_fraction,
    })
}

/// Fractional shift `exp(-i H_S / n)`: quasi-momentum blocks
/// `exp(i ktilde sigma_z / n)` brought to the phase-site basis.
fn fractional_shift(d: usize, n: u32) -> CMatrix {
    let step = std::f64::consts::TAU / d as f64;
    let blocks = CMatrix::from_fn(2 * d, 2 * d, |i, j| {
        if i != j {
            C64::ZERO
        } else {
            let ktilde = step * (i / 2) as f64;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            Complex::from_polar(1.0, sign * ktilde / n as f64)
        }
    });
    let fourier = kron(&walk_fourier(d), &CMatrix::identity(2, 2));
    &fourier * blocks * fourier.adjoint()
}

/// Max-entry distance between the `n`-fold split product
/// `[exp(-i H_S / n) exp(-i (1 (x) H_C) / n)]^n` and the simultaneous
/// evolution `exp(-i H_S - i (1 (x) H_C))`.
pub fn trotter_defect(cfg: &WalkConfig, n: u32) -> f64 {
    assert!(n >= 1, "trotter_defect needs n >= 1");
    let d = cfg.d;
    let step = fractional_shift(d, n)
        * kron(&CMatrix::identity(d, d), &build_coin(cfg.theta / n as f64));
    let mut product = CMatrix::identity(2 * d, 2 * d);
    for _ in 0..n {
        product = &step * product;
    }
    let simultaneous = build_scs(
        d,
        &ScsParams::new(std::f64::consts::TAU / d as f64, cfg.theta),
    );
    crate::qmath::max_abs_entry(&(product - simultaneous))
}
