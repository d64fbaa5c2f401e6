//! Quasi-energy bands, Bloch vectors and winding numbers.
//!
//! Both one-step evolutions are block-diagonal in quasi-momentum, each block
//! a rotation `exp(-i eps d.sigma)` of the coin. The closed forms below give
//! the rotation angle (quasi-energy) and axis (Bloch vector) per momentum;
//! the loop the axis traces as `k` spans the zone carries the winding number
//! that separates the two dynamics topologically.

use crate::error::{Error, Result};
use crate::qmath::BlochVector;
use crate::tol;

/// Which one-step evolution a band structure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    Dtqw,
    Scs,
}

/// Positive-branch quasi-energy of the walk step: `arccos(cos theta cos ktilde)`.
pub fn dtqw_dispersion(theta: f64, ktilde: f64) -> f64 {
    (theta.cos() * ktilde.cos()).clamp(-1.0, 1.0).acos()
}

/// Bloch vector of the walk step at quasi-momentum `ktilde`.
///
/// Undefined where the dispersion is degenerate (`sin eps` below
/// [`tol::DEGENERATE_BLOCH`]); such points are reported as errors rather than
/// interpolated, so a genuine gap closure cannot slip through.
pub fn dtqw_bloch(theta: f64, ktilde: f64) -> Result<BlochVector> {
    let eps = dtqw_dispersion(theta, ktilde);
    let sin_eps = eps.sin();
    if sin_eps.abs() < tol::DEGENERATE_BLOCH {
        return Err(Error::DegenerateBloch { k: 0, sin_epsilon: sin_eps });
    }
    Ok(BlochVector::new(
        theta.sin() * ktilde.cos() / sin_eps,
        -theta.sin() * ktilde.sin() / sin_eps,
        -theta.cos() * ktilde.sin() / sin_eps,
    ))
}

/// Positive-branch quasi-energy of the simultaneous evolution:
/// `sqrt(ktilde^2 + theta^2)`.
pub fn scs_dispersion(theta: f64, ktilde: f64) -> f64 {
    ktilde.hypot(theta)
}

/// Bloch vector of the simultaneous evolution; lies in the xz-plane.
pub fn scs_bloch(theta: f64, ktilde: f64) -> Result<BlochVector> {
    let eps = scs_dispersion(theta, ktilde);
    if eps < tol::DEGENERATE_BLOCH {
        return Err(Error::DegenerateBloch { k: 0, sin_epsilon: 0.0 });
    }
    Ok(BlochVector::new(theta / eps, 0.0, -ktilde / eps))
}

/// Band structure over the quasi-momentum grid `ktilde = 2 pi k / d`.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub d: usize,
    /// Coin angle: `theta` for the walk, `u2` for the simultaneous evolution.
    pub theta: f64,
    pub kind: WalkKind,
    /// Positive-branch quasi-energy per grid point.
    pub epsilon: Vec<f64>,
    /// Bloch vector per grid point (positive branch).
    pub bloch: Vec<BlochVector>,
}

impl SpectralData {
    /// Bands of the walk step at coin angle `theta`.
    pub fn dtqw(d: usize, theta: f64) -> Result<Self> {
        let mut epsilon = Vec::with_capacity(d);
        let mut bloch = Vec::with_capacity(d);
        for k in 0..d {
            let ktilde = std::f64::consts::TAU * k as f64 / d as f64;
            epsilon.push(dtqw_dispersion(theta, ktilde));
            bloch.push(dtqw_bloch(theta, ktilde).map_err(|e| match e {
                Error::DegenerateBloch { sin_epsilon, .. } => {
                    Error::DegenerateBloch { k, sin_epsilon }
                }
                other => other,
            })?);
        }
        Ok(Self { d, theta, kind: WalkKind::Dtqw, epsilon, bloch })
    }

    /// Bands of the simultaneous evolution with angles `(u1, u2)`; the block
    /// at grid index `m` rotates by `sqrt((u1 m)^2 + u2^2)` about
    /// `(u2, 0, -u1 m) / eps`.
    pub fn scs(d: usize, u1: f64, u2: f64) -> Result<Self> {
        let mut epsilon = Vec::with_capacity(d);
        let mut bloch = Vec::with_capacity(d);
        for m in 0..d {
            let ktilde = u1 * m as f64;
            epsilon.push(scs_dispersion(u2, ktilde));
            bloch.push(scs_bloch(u2, ktilde).map_err(|e| match e {
                Error::DegenerateBloch { sin_epsilon, .. } => {
                    Error::DegenerateBloch { k: m, sin_epsilon }
                }
                other => other,
            })?);
        }
        Ok(Self { d, theta: u2, kind: WalkKind::Scs, epsilon, bloch })
    }

    /// Unit normal of the great-circle plane containing the Bloch loop.
    pub fn plane_normal(&self) -> BlochVector {
        match self.kind {
            WalkKind::Dtqw => BlochVector::new(0.0, self.theta.cos(), -self.theta.sin()),
            WalkKind::Scs => BlochVector::new(0.0, 1.0, 0.0),
        }
    }
}

/// Winding number of the Bloch loop around the origin of its plane.
///
/// The branch is fixed deterministically: the `k = 0` vector is flipped to
/// `dx >= 0` if needed, then each successive vector is flipped to keep a
/// positive overlap with its predecessor. Planar angles are accumulated as
/// wrapped successive differences around the closed loop; a step close to pi
/// (within [`tol::WINDING_STEP_MARGIN`]) means the grid cannot resolve the
/// loop and is rejected.
pub fn winding_number(data: &SpectralData) -> Result<i64> {
    let normal = data.plane_normal();
    let e1 = BlochVector::new(1.0, 0.0, 0.0);
    let e2 = normal.cross(&e1);

    let mut oriented = Vec::with_capacity(data.bloch.len());
    for (k, vector) in data.bloch.iter().enumerate() {
        let mut v = *vector;
        if k == 0 {
            if v.x < 0.0 {
                v = v.negated();
            }
        } else if v.dot(oriented.last().expect("nonempty")) < 0.0 {
            v = v.negated();
        }
        oriented.push(v);
    }

    let angles: Vec<f64> = oriented
        .iter()
        .map(|v| v.dot(&e2).atan2(v.dot(&e1)))
        .collect();
    let n = angles.len();
    let mut total = 0.0;
    for k in 0..n {
        let mut step = angles[(k + 1) % n] - angles[k];
        while step > std::f64::consts::PI {
            step -= std::f64::consts::TAU;
        }
        while step < -std::f64::consts::PI {
            step += std::f64::consts::TAU;
        }
        if step.abs() > std::f64::consts::PI - tol::WINDING_STEP_MARGIN {
            return Err(Error::WindingAmbiguous { k, step });
        }
        total += step;
    }
    Ok((total / std::f64::consts::TAU).round() as i64)
}
