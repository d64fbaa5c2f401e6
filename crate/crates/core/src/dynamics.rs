//! State and density-operator evolution, phase-space observables, and the
//! coin dephasing channel.

use crate::error::{Error, Result};
use crate::operators::{StateVector, WalkOperator};
use crate::qmath::{
    hermitian_eig, kron, max_abs_entry, partial_transpose_walker, trace_norm, C64, CMatrix,
};
use crate::tol;

/// Probability distribution over the phase sites `phi_n = 2 pi n / d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    d: usize,
    p: Vec<f64>,
}

impl PhaseDistribution {
    /// Wrap raw probabilities: round-off below [`tol::PROBABILITY_CLIP`] is
    /// clipped to zero, anything more negative or a mass away from 1 is an
    /// error.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        let mut clipped = p;
        for value in &mut clipped {
            if *value < 0.0 {
                if *value < -tol::PROBABILITY_CLIP {
                    return Err(Error::InvalidConfig(format!(
                        "negative probability {value} beyond round-off"
                    )));
                }
                *value = 0.0;
            }
        }
        let mass: f64 = clipped.iter().sum();
        if (mass - 1.0).abs() > tol::DISTRIBUTION_SUM {
            return Err(Error::InvalidConfig(format!(
                "distribution mass {mass} deviates from 1"
            )));
        }
        Ok(Self { d: clipped.len(), p: clipped })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    /// Site angle `phi_n = 2 pi n / d`.
    pub fn phi(&self, n: usize) -> f64 {
        std::f64::consts::TAU * n as f64 / self.d as f64
    }

    pub fn uniform(d: usize) -> Self {
        Self { d, p: vec![1.0 / d as f64; d] }
    }

    /// Largest deviation from the uniform distribution.
    pub fn max_deviation_from_uniform(&self) -> f64 {
        let u = 1.0 / self.d as f64;
        self.p.iter().map(|&x| (x - u).abs()).fold(0.0, f64::max)
    }
}

/// Mixed state of the composite system, walker-major layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    d: usize,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Wrap a matrix after checking hermiticity, unit trace and positivity.
    pub fn new(d: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != 2 * d || matrix.ncols() != 2 * d {
            return Err(Error::DimensionMismatch {
                expected: 2 * d,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        let rho = Self { d, matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// Projector onto a pure state.
    pub fn from_pure(psi: &StateVector) -> Self {
        let v = psi.amplitudes();
        Self { d: psi.d(), matrix: v * v.adjoint() }
    }

    pub(crate) fn from_unchecked(d: usize, matrix: CMatrix) -> Self {
        Self { d, matrix }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diagonal().sum()
    }

    /// Check the density-operator invariants: Hermitian within
    /// [`tol::DENSITY_HERMITICITY`], unit trace within [`tol::DENSITY_TRACE`],
    /// minimum eigenvalue above [`tol::DENSITY_MIN_EIGENVALUE`].
    pub fn validate(&self) -> Result<()> {
        let herm = crate::qmath::hermiticity_defect(&self.matrix);
        if herm > tol::DENSITY_HERMITICITY {
            return Err(Error::InvalidDensity {
                reason: format!("hermiticity defect {herm:.3e}"),
            });
        }
        let trace = self.trace();
        if (trace.re - 1.0).abs() > tol::DENSITY_TRACE || trace.im.abs() > tol::DENSITY_TRACE {
            return Err(Error::InvalidDensity { reason: format!("trace {trace} != 1") });
        }
        let (values, _) = hermitian_eig(&self.matrix)?;
        let min = values.first().copied().unwrap_or(0.0);
        if min < tol::DENSITY_MIN_EIGENVALUE {
            return Err(Error::InvalidDensity {
                reason: format!("minimum eigenvalue {min:.3e}"),
            });
        }
        Ok(())
    }

    /// Phase distribution of the mixed state: the per-site diagonal mass.
    pub fn phase_distribution(&self) -> Result<PhaseDistribution> {
        let p = (0..self.d)
            .map(|n| self.matrix[(2 * n, 2 * n)].re + self.matrix[(2 * n + 1, 2 * n + 1)].re)
            .collect();
        PhaseDistribution::new(p)
    }
}

/// Coin dephasing characterized by the dephasing time in units of the
/// step time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingSpec {
    /// Dephasing time `T_d / tau`; infinity means no dephasing.
    pub t_dephase: f64,
    /// Constant strength applied each step: `1 - exp(-tau / T_d)`.
    pub per_step_lambda: f64,
}

impl DephasingSpec {
    /// From the dephasing time in units of the step time. Positive or
    /// infinite only.
    pub fn from_dephasing_time(t_dephase: f64) -> Result<Self> {
        if t_dephase.is_nan() || t_dephase <= 0.0 {
            return Err(Error::InvalidDephasingTime { t_dephase });
        }
        let per_step_lambda = if t_dephase.is_infinite() {
            0.0
        } else {
            1.0 - (-1.0 / t_dephase).exp()
        };
        Ok(Self { t_dephase, per_step_lambda })
    }

    /// The coherent (no-dephasing) limit.
    pub fn coherent() -> Self {
        Self { t_dephase: f64::INFINITY, per_step_lambda: 0.0 }
    }

    /// Strength applied at step `l` (1-based) under the given schedule.
    pub fn lambda_at(&self, schedule: LambdaSchedule, l: usize) -> f64 {
        match schedule {
            LambdaSchedule::PerStep => self.per_step_lambda,
            LambdaSchedule::Cumulative => {
                if self.t_dephase.is_infinite() {
                    0.0
                } else {
                    1.0 - (-(l as f64) / self.t_dephase).exp()
                }
            }
        }
    }
}

/// How the dephasing strength evolves over the run.
///
/// `PerStep` applies the constant `1 - exp(-tau/T_d)` every step, which
/// composes to exponential off-diagonal decay; `Cumulative` applies the
/// literal `1 - exp(-l tau/T_d)` at step `l` for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaSchedule {
    PerStep,
    Cumulative,
}

/// Apply `u` repeatedly: `trajectory[l] = u^l psi0`, including step 0.
pub fn evolve_pure(
    u: &WalkOperator,
    psi0: &StateVector,
    steps: usize,
) -> Result<Vec<StateVector>> {
    if u.nrows() != psi0.dim() || u.ncols() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi0.dim(),
            got: u.nrows().max(u.ncols()),
        });
    }
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(psi0.clone());
    let mut current = psi0.amplitudes().clone();
    for _ in 0..steps {
        current = u * current;
        trajectory.push(StateVector::from_unchecked(psi0.d(), current.clone()));
    }
    Ok(trajectory)
}

/// Phase distribution of a pure state: per-site mass summed over the coin.
pub fn phase_distribution(psi: &StateVector) -> PhaseDistribution {
    let p = (0..psi.d())
        .map(|n| psi.amplitude(n, 0).norm_sqr() + psi.amplitude(n, 1).norm_sqr())
        .collect();
    PhaseDistribution::new(p).expect("unit state yields a normalized distribution")
}

/// Standard deviation of the phase coordinate, with `phi_n` in `[0, 2 pi)`
/// treated as a linear coordinate (not circular).
pub fn distribution_std(dist: &PhaseDistribution) -> f64 {
    let mut mean = 0.0;
    let mut second = 0.0;
    for (n, &p) in dist.probabilities().iter().enumerate() {
        let phi = dist.phi(n);
        mean += p * phi;
        second += p * phi * phi;
    }
    (second - mean * mean).max(0.0).sqrt()
}

/// Coin-walker entanglement negativity `(|rho^T_W|_1 - 1) / 2`.
pub fn negativity(rho: &DensityOperator) -> Result<f64> {
    rho.validate()?;
    let pt = partial_transpose_walker(rho.matrix(), rho.d())?;
    Ok((trace_norm(&pt)? - 1.0) / 2.0)
}

/// Kraus pair of the coin phase-damping channel:
/// `E0 = diag(1, sqrt(1 - lambda))`, `E1 = diag(0, sqrt(lambda))`.
pub fn dephasing_kraus(lambda: f64) -> Result<(CMatrix, CMatrix)> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange { lambda });
    }
    let e0 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        C64::ONE,
        C64::new((1.0 - lambda).sqrt(), 0.0),
    ]));
    let e1 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        C64::ZERO,
        C64::new(lambda.sqrt(), 0.0),
    ]));
    Ok((e0, e1))
}

/// Non-unitary walk: each step conjugates by `u`, then applies the coin
/// dephasing Kraus pair extended over the walker,
/// `rho_l = sum_j K_j U rho_{l-1} U^dag K_j^dag`.
///
/// Returns the trajectory including step 0.
pub fn evolve_channel(
    u: &WalkOperator,
    rho0: &DensityOperator,
    spec: &DephasingSpec,
    schedule: LambdaSchedule,
    steps: usize,
) -> Result<Vec<DensityOperator>> {
    let dim = 2 * rho0.d();
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: u.nrows().max(u.ncols()) });
    }
    let d = rho0.d();
    let identity = CMatrix::identity(d, d);
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(rho0.clone());
    let mut rho = rho0.matrix().clone();
    for l in 1..=steps {
        let lambda = spec.lambda_at(schedule, l);
        let (e0, e1) = dephasing_kraus(lambda)?;
        let k0 = kron(&identity, &e0);
        let k1 = kron(&identity, &e1);
        let advanced = u * rho * u.adjoint();
        rho = &k0 * &advanced * k0.adjoint() + &k1 * &advanced * k1.adjoint();
        trajectory.push(DensityOperator::from_unchecked(d, rho.clone()));
    }
    Ok(trajectory)
}

/// Max-entry magnitude of `E0^dag E0 + E1^dag E1 - 1`.
pub fn kraus_completeness_defect(e0: &CMatrix, e1: &CMatrix) -> f64 {
    let sum = e0.adjoint() * e0 + e1.adjoint() * e1;
    max_abs_entry(&(sum - CMatrix::identity(e0.nrows(), e0.ncols())))
}
