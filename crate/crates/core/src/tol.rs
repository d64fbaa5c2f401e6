//! Central numerical tolerances.
//!
//! Every validation threshold used by the library lives here, so a tolerance
//! can be traced to the invariant it guards instead of appearing as an inline
//! magic number.

/// Max-entry deviation allowed in `|U^dag U - 1|` for a matrix to count as
/// unitary. Walk operators are products of exactly unitary factors, so only
/// rounding noise accumulates.
pub const UNITARITY: f64 = 1e-10;

/// Max-entry deviation allowed in `|H - H^dag|` for a freshly constructed
/// Hermitian matrix.
pub const HERMITICITY: f64 = 1e-12;

/// Hermiticity acceptance for eigendecomposition inputs. Laxer than
/// [`HERMITICITY`] because density operators carry rounding from hundreds of
/// conjugations by the time they are diagonalized.
pub const EIG_HERMITICITY: f64 = 1e-8;

/// Residual allowed in `H v - lambda v` and in eigenvector orthonormality.
pub const EIG_RESIDUAL: f64 = 1e-9;

/// Norm deviation allowed for a state vector.
pub const STATE_NORM: f64 = 1e-10;

/// Deviation from 1 allowed for the total mass of a phase distribution.
pub const DISTRIBUTION_SUM: f64 = 1e-10;

/// Negative probability mass below this magnitude is round-off and is
/// clipped to zero; anything larger is a genuine error.
pub const PROBABILITY_CLIP: f64 = 1e-14;

/// Norm deviation allowed for a Bloch vector.
pub const BLOCH_UNIT: f64 = 1e-10;

/// `|sin eps|` below this marks a degenerate dispersion point, where the
/// Bloch vector is undefined.
pub const DEGENERATE_BLOCH: f64 = 1e-9;

/// A wrapped Bloch-angle step above `pi - WINDING_STEP_MARGIN` makes the
/// winding sum ambiguous and is rejected.
pub const WINDING_STEP_MARGIN: f64 = 0.1;

/// Hermiticity deviation allowed for a density operator.
pub const DENSITY_HERMITICITY: f64 = 1e-10;

/// Trace deviation allowed for a density operator.
pub const DENSITY_TRACE: f64 = 1e-10;

/// Most negative eigenvalue tolerated in a density operator.
pub const DENSITY_MIN_EIGENVALUE: f64 = -1e-8;

/// Coherent-state truncation below this retained fraction of the
/// untruncated norm is flagged to the caller.
pub const COHERENT_RETAINED_MIN: f64 = 0.5;

/// Multistart minima closer than this are tied and resolved by smallest
/// `(u2, u1)` lexicographically.
pub const OPTIMIZER_TIE: f64 = 1e-9;
