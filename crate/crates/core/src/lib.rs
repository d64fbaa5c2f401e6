//! Simulation and optimization toolkit for the discrete-time quantum walk
//! on a cycle and its time-independent counterpart, the simultaneous
//! coin-and-shift (SCS) evolution.
//!
//! The walk alternates a coin rotation with a spin-conditioned shift; the SCS
//! evolution applies both generators at once through a single constant
//! Hamiltonian. The crate builds both one-step operators on a truncated
//! phase-space realization (walker encoded in a resonator coherent state,
//! coin in a qubit), compares their band structures and winding numbers,
//! evolves pure states and dephased density operators, and searches for the
//! SCS angle pair whose dynamics best tracks a target walk under the
//! trajectory-averaged Hellinger distance.
//!
//! Modules:
//!
//! - [`qmath`]: dense complex linear algebra (Kronecker products, Hermitian
//!   eigendecomposition, trace norm, walker partial transpose, axis-angle
//!   rotations).
//! - [`operators`]: coin, shift, walk and SCS operators; coherent and basis
//!   states; the Trotter splitting defect.
//! - [`spectral`]: quasi-energy bands, Bloch vectors, winding numbers.
//! - [`dynamics`]: pure and dephased trajectories, phase distributions,
//!   standard deviation, coin-walker negativity.
//! - [`hellinger_opt`]: Hellinger distance, the trajectory-averaged
//!   objective, multistart Nelder-Mead search, and the coin-angle sweep.

pub mod dynamics;
pub mod error;
pub mod hellinger_opt;
pub mod operators;
pub mod qmath;
pub mod spectral;
pub mod tol;

pub use dynamics::{
    dephasing_kraus, distribution_std, evolve_channel, evolve_pure, negativity,
    phase_distribution, DensityOperator, DephasingSpec, LambdaSchedule, PhaseDistribution,
};
pub use error::{Error, Result};
pub use hellinger_opt::{
    default_theta_grid, hellinger, objective, optimize, theta_sweep, OptimizationResult,
    OptimizerConfig, SweepPoint,
};
pub use operators::{
    build_coin, build_dtqw, build_scs, build_shift, coherent_state, phase_distribution_basis,
    trotter_defect, walk_fourier, CoherentState, CoinState, ScsParams, StateVector, WalkConfig,
    WalkOperator,
};
pub use qmath::{
    hermitian_eig, kron, partial_transpose_walker, pauli_rotation, trace_norm, BlochVector, C64,
    CMatrix, CVector,
};
pub use spectral::{
    dtqw_bloch, dtqw_dispersion, scs_bloch, scs_dispersion, winding_number, SpectralData,
    WalkKind,
};

/// Reference parameter set of the d = 31 Hadamard-coin comparison: the
/// defaults every experiment starts from.
pub mod reference {
    /// Number of phase-space sites.
    pub const SITES: usize = 31;
    /// Coin angle of the target walk.
    pub const THETA: f64 = std::f64::consts::FRAC_PI_4;
    /// Steps averaged by the optimization objective.
    pub const HORIZON: usize = 50;
    /// Magnitude of the initial coherent amplitude.
    pub const ALPHA_MAG: f64 = 5.0;
    /// Phase of the initial coherent amplitude.
    pub const ALPHA_PHASE: f64 = std::f64::consts::PI;
    /// Optimized per-site rotation angle for the reference problem
    /// (d = 31, theta = pi/4, l0 = 50).
    pub const OPT_U1: f64 = 1.3650 * std::f64::consts::TAU / 31.0;
    /// Optimized coin angle for the reference problem.
    pub const OPT_U2: f64 = 15.9462 * std::f64::consts::FRAC_PI_4;
}
