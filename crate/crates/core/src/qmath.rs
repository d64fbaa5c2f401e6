//! Dense complex linear algebra substrate.
//!
//! Everything here operates on small dense matrices (at most a few hundred
//! rows), so robustness is preferred over scale: the Hermitian eigensolver is
//! nalgebra's dense `SymmetricEigen` with an explicit symmetry check and
//! ascending reordering on top.
//!
//! Composite walker-coin indices are walker-major throughout the crate: the
//! flat index of walker site `n` with coin state `s` is `2 n + s`. That makes
//! the shift operator a 2x2-block permutation and the walker partial
//! transpose a block-index swap.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::tol;

/// Complex scalar used throughout.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = DMatrix<C64>;
/// Dense complex vector.
pub type CVector = DVector<C64>;

/// 2x2 identity.
pub fn identity2() -> CMatrix {
    CMatrix::identity(2, 2)
}

/// Pauli x.
pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ONE, C64::ONE, C64::ZERO])
}

/// Pauli y.
pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C64::ZERO, -C64::I, C64::I, C64::ZERO])
}

/// Pauli z.
pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C64::ONE, C64::ZERO, C64::ZERO, -C64::ONE])
}

/// Largest entry magnitude of a matrix.
pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-entry magnitude of `U^dag U - 1`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs_entry(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

/// Max-entry magnitude of `H - H^dag`.
pub fn hermiticity_defect(h: &CMatrix) -> f64 {
    max_abs_entry(&(h - h.adjoint()))
}

/// Kronecker product, first factor outer (walker-major layout).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as columns. Inputs whose hermiticity defect exceeds
/// [`tol::EIG_HERMITICITY`] are rejected; accepted inputs are symmetrized
/// before decomposition so the result is exactly that of `(H + H^dag) / 2`.
pub fn hermitian_eig(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let deviation = hermiticity_defect(h);
    if deviation > tol::EIG_HERMITICITY {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: tol::EIG_HERMITICITY,
        });
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Trace norm `sum |lambda_i|` of a Hermitian matrix.
pub fn trace_norm(h: &CMatrix) -> Result<f64> {
    let (values, _) = hermitian_eig(h)?;
    Ok(values.iter().map(|v| v.abs()).sum())
}

/// Unitary `exp(-i H)` of a Hermitian matrix, via eigendecomposition.
pub fn unitary_from_hermitian(h: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eig(h)?;
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| (-C64::I * v).exp()),
    ));
    Ok(&vectors * phases * vectors.adjoint())
}

/// Partial transpose with respect to the walker factor.
///
/// `rho` is 2d x 2d in walker-major layout; the output entry at
/// `((n, s), (n', s'))` is the input entry at `((n', s), (n, s'))`.
pub fn partial_transpose_walker(rho: &CMatrix, d: usize) -> Result<CMatrix> {
    if rho.nrows() != 2 * d || rho.ncols() != 2 * d {
        return Err(Error::DimensionMismatch {
            expected: 2 * d,
            got: rho.nrows().max(rho.ncols()),
        });
    }
    let mut out = CMatrix::zeros(2 * d, 2 * d);
    for n in 0..d {
        for np in 0..d {
            for s in 0..2 {
                for sp in 0..2 {
                    out[(2 * n + s, 2 * np + sp)] = rho[(2 * np + s, 2 * n + sp)];
                }
            }
        }
    }
    Ok(out)
}

/// Unit vector on the Bloch sphere; the rotation axis of a 2x2 unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// True when the norm is 1 within [`tol::BLOCH_UNIT`].
    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= tol::BLOCH_UNIT
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    /// Flip the vector to the antipodal point.
    pub fn negated(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// Axis-angle rotation `exp(-i epsilon n.sigma)` in closed form:
/// `cos(epsilon) 1 - i sin(epsilon) (n.sigma)`.
///
/// `axis` must be a unit vector; callers own that precondition.
pub fn pauli_rotation(epsilon: f64, axis: BlochVector) -> CMatrix {
    debug_assert!(axis.is_unit(), "rotation axis must be unit");
    let c = C64::new(epsilon.cos(), 0.0);
    let ms = -C64::I * epsilon.sin();
    CMatrix::from_row_slice(
        2,
        2,
        &[
            c + ms * axis.z,
            ms * C64::new(axis.x, -axis.y),
            ms * C64::new(axis.x, axis.y),
            c - ms * axis.z,
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_identity_case() {
        let i2 = identity2();
        assert_abs_diff_eq!(
            max_abs_entry(&(kron(&i2, &i2) - CMatrix::identity(4, 4))),
            0.0
        );
    }

    #[test]
    fn kron_sigma_z_with_identity() {
        let expect = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::ONE,
            C64::ONE,
            -C64::ONE,
            -C64::ONE,
        ]));
        assert_abs_diff_eq!(max_abs_entry(&(kron(&pauli_z(), &identity2()) - expect)), 0.0);
    }

    /// Brute-force double-loop Kronecker product, independent of the
    /// implementation path.
    fn kron_oracle(a: &CMatrix, b: &CMatrix) -> CMatrix {
        let (ar, ac) = a.shape();
        let (br, bc) = b.shape();
        let mut out = CMatrix::zeros(ar * br, ac * bc);
        for i in 0..ar {
            for j in 0..ac {
                for k in 0..br {
                    for l in 0..bc {
                        out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn kron_matches_double_loop_oracle() {
        let coin = crate::operators::build_coin(FRAC_PI_4);
        let got = kron(&coin, &coin);
        let want = kron_oracle(&coin, &coin);
        assert!(max_abs_entry(&(got - want)) <= 1e-14);
    }

    #[test]
    fn hermitian_eig_sigma_z() {
        let (values, _) = hermitian_eig(&pauli_z()).unwrap();
        assert_abs_diff_eq!(values[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(values[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_eig_sigma_x_eigenvectors() {
        let (values, vectors) = hermitian_eig(&pauli_x()).unwrap();
        assert_abs_diff_eq!(values[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(values[1], 1.0, epsilon = 1e-12);
        // (|0> - |1>)/sqrt(2) and (|0> + |1>)/sqrt(2), up to phase.
        let minus = CVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]).scale(0.5f64.sqrt());
        let plus = CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]).scale(0.5f64.sqrt());
        let overlap0 = minus.dotc(&vectors.column(0).clone_owned()).norm();
        let overlap1 = plus.dotc(&vectors.column(1).clone_owned()).norm();
        assert_abs_diff_eq!(overlap0, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(overlap1, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn hermitian_eig_reconstructs_random_matrix() {
        // Fixed pseudo-random Hermitian 6x6: H = A + A^dag.
        let n = 6;
        let mut a = CMatrix::zeros(n, n);
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = c(next(), next());
            }
        }
        let h = &a + a.adjoint();
        let (values, vectors) = hermitian_eig(&h).unwrap();
        // Reconstruction oracle: sum lambda_i v_i v_i^dag == H.
        let mut rec = CMatrix::zeros(n, n);
        for i in 0..n {
            let v = vectors.column(i).clone_owned();
            rec += (&v * v.adjoint()).scale(values[i]);
        }
        assert!(max_abs_entry(&(rec - &h)) <= 1e-9);
        // Residual and orthonormality.
        for i in 0..n {
            let v = vectors.column(i).clone_owned();
            let res = &h * &v - v.scale(values[i]);
            assert!(res.iter().map(|z| z.norm()).fold(0.0, f64::max) <= 1e-9);
        }
        assert!(unitarity_defect(&vectors) <= 1e-9);
    }

    #[test]
    fn hermitian_eig_rejects_non_hermitian() {
        let mut m = pauli_z();
        m[(0, 1)] = c(0.5, 0.0);
        match hermitian_eig(&m) {
            Err(Error::NotHermitian { deviation, .. }) => assert!(deviation > 0.4),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn trace_norm_identity_and_sigma_z() {
        assert_abs_diff_eq!(trace_norm(&CMatrix::identity(4, 4)).unwrap(), 4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(trace_norm(&pauli_z()).unwrap(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn trace_norm_of_partially_transposed_bell_state() {
        // Maximally entangled pure state on a 2-site walker with a coin:
        // (|0>|0> + |1>|1>)/sqrt(2). Partial transpose has analytic
        // eigenvalues (-1/2, 1/2, 1/2, 1/2), so the trace norm is 2.
        let s = c(0.5f64.sqrt(), 0.0);
        let psi = CVector::from_vec(vec![s, C64::ZERO, C64::ZERO, s]);
        let rho = &psi * psi.adjoint();
        let pt = partial_transpose_walker(&rho, 2).unwrap();
        let (values, _) = hermitian_eig(&pt).unwrap();
        assert_abs_diff_eq!(values[0], -0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(trace_norm(&pt).unwrap(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn partial_transpose_factorizes_on_product_states() {
        // rho_W (x) rho_C -> rho_W^T (x) rho_C.
        let w = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
        );
        let coin = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.6, 0.0), c(0.0, -0.3), c(0.0, 0.3), c(0.4, 0.0)],
        );
        let rho = kron(&w, &coin);
        let got = partial_transpose_walker(&rho, 2).unwrap();
        let want = kron(&w.transpose(), &coin);
        assert!(max_abs_entry(&(got - want)) <= 1e-14);
    }

    #[test]
    fn partial_transpose_is_involutive() {
        let s = c(0.5f64.sqrt(), 0.0);
        let psi = CVector::from_vec(vec![s, C64::ZERO, C64::ZERO, s]);
        let rho = &psi * psi.adjoint();
        let twice =
            partial_transpose_walker(&partial_transpose_walker(&rho, 2).unwrap(), 2).unwrap();
        assert!(max_abs_entry(&(twice - rho)) <= 1e-15);
    }

    #[test]
    fn partial_transpose_rejects_wrong_dimension() {
        let rho = CMatrix::identity(4, 4);
        assert!(matches!(
            partial_transpose_walker(&rho, 3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pauli_rotation_zero_angle_is_identity() {
        let r = pauli_rotation(0.0, BlochVector::new(0.6, 0.0, 0.8));
        assert!(max_abs_entry(&(r - identity2())) <= 1e-15);
    }

    #[test]
    fn pauli_rotation_x_axis_is_coin() {
        let r = pauli_rotation(FRAC_PI_4, BlochVector::new(1.0, 0.0, 0.0));
        let coin = crate::operators::build_coin(FRAC_PI_4);
        assert!(max_abs_entry(&(r - coin)) <= 1e-15);
    }

    #[test]
    fn pauli_rotation_z_half_turn() {
        let r = pauli_rotation(FRAC_PI_2, BlochVector::new(0.0, 0.0, 1.0));
        let want = pauli_z().map(|z| -C64::I * z);
        assert!(max_abs_entry(&(r - want)) <= 1e-15);
    }

    #[test]
    fn pauli_rotation_trace_and_unitarity() {
        let axis = BlochVector::new(2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0);
        for &eps in &[0.1, 0.9, 2.2, PI] {
            let r = pauli_rotation(eps, axis);
            assert!(unitarity_defect(&r) <= 1e-12);
            let trace = r[(0, 0)] + r[(1, 1)];
            assert_abs_diff_eq!(trace.re, 2.0 * eps.cos(), epsilon = 1e-12);
            assert_abs_diff_eq!(trace.im, 0.0, epsilon = 1e-12);
        }
    }

    /// 12-term truncated Taylor series of exp(-i eps n.sigma) with standard
    /// scaling and squaring, independent of the closed form.
    fn rotation_taylor_oracle(eps: f64, axis: BlochVector) -> CMatrix {
        let squarings = if eps > 0.5 { (eps / 0.5).log2().ceil() as u32 } else { 0 };
        let scaled = eps / (1u64 << squarings) as f64;
        let gen = (pauli_x().scale(axis.x) + pauli_y().scale(axis.y) + pauli_z().scale(axis.z))
            .map(|z| -C64::I * scaled * z);
        let mut sum = identity2();
        let mut term = identity2();
        for k in 1..=12 {
            term = (&term * &gen).unscale(k as f64);
            sum += &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn pauli_rotation_matches_taylor_oracle() {
        let axis = BlochVector::new(0.48, 0.6, 0.64);
        for i in 0..=8 {
            let eps = PI * i as f64 / 8.0;
            let defect = max_abs_entry(&(pauli_rotation(eps, axis) - rotation_taylor_oracle(eps, axis)));
            assert!(defect <= 1e-8, "eps = {eps}: defect {defect:.2e}");
        }
    }

    #[test]
    fn unitary_from_hermitian_round_trip() {
        let h = pauli_x().scale(0.7) + pauli_z().scale(-1.3);
        let u = unitary_from_hermitian(&h).unwrap();
        assert!(unitarity_defect(&u) <= 1e-10);
        // exp(-i h) for h = eps n.sigma must agree with the closed form.
        let eps = (0.7f64 * 0.7 + 1.3 * 1.3).sqrt();
        let axis = BlochVector::new(0.7 / eps, 0.0, -1.3 / eps);
        assert!(max_abs_entry(&(u - pauli_rotation(eps, axis))) <= 1e-12);
    }
}
