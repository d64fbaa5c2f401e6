use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A matrix handed to a Hermitian-only routine fails the symmetry check.
    #[error("matrix is not Hermitian: max |H - H^dag| entry {deviation:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    /// A state vector is not normalized.
    #[error("state vector norm deviates from 1 by {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    /// A density operator violates one of its invariants.
    #[error("invalid density operator: {reason}")]
    InvalidDensity { reason: String },

    /// Channel strength outside the admissible interval.
    #[error("dephasing strength {lambda} outside [0, 1]")]
    LambdaOutOfRange { lambda: f64 },

    /// Dephasing time must be positive (or infinite for the coherent limit).
    #[error("dephasing time {t_dephase} must be positive or infinite")]
    InvalidDephasingTime { t_dephase: f64 },

    /// Dispersion is degenerate at this quasi-momentum; the Bloch vector is
    /// undefined there.
    #[error("degenerate Bloch point at grid index {k}: |sin eps| = {sin_epsilon:.3e}")]
    DegenerateBloch { k: usize, sin_epsilon: f64 },

    /// Successive Bloch angles differ by almost pi; the winding sum is
    /// ambiguous on this grid.
    #[error("winding ambiguous: angle step {step:.4} rad at grid index {k}; grid too coarse")]
    WindingAmbiguous { k: usize, step: f64 },

    /// A configuration value is out of range or inconsistent.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
