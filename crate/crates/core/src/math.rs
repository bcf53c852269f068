//! Sign-power operators and the small dense linear-algebra kernel used by the
//! controllers.

use nalgebra::{DMatrix, SVector};

use crate::error::{Error, Result};

/// Norm below which a vector is treated as zero by [`msign`].
pub const ZERO_TOL: f64 = 1e-12;

/// Multivariable sign: `x / ‖x‖`, and the zero vector when `‖x‖ ≤ ZERO_TOL`.
pub fn msign<const N: usize>(x: &SVector<f64, N>) -> SVector<f64, N> {
    let n = x.norm();
    if n > ZERO_TOL {
        x / n
    } else {
        SVector::zeros()
    }
}

/// `⌈x⌋^ρ = ‖x‖^ρ · msign(x)`.
pub fn pow_sign<const N: usize>(x: &SVector<f64, N>, rho: f64) -> SVector<f64, N> {
    debug_assert!(rho >= 0.0);
    let n = x.norm();
    if n > ZERO_TOL {
        x * (n.powf(rho) / n)
    } else {
        SVector::zeros()
    }
}

/// Scalar sign with the same dead-zone as [`msign`].
pub fn sign(x: f64) -> f64 {
    if x.abs() > ZERO_TOL {
        x.signum()
    } else {
        0.0
    }
}

/// Scalar `⌈x⌋^ρ = |x|^ρ sign(x)`.
pub fn sig(x: f64, rho: f64) -> f64 {
    debug_assert!(rho >= 0.0);
    if x.abs() > ZERO_TOL {
        x.abs().powf(rho) * x.signum()
    } else {
        0.0
    }
}

/// `⌈s⌋^{1/2} + s`, the generalized super-twisting correction term.
pub fn gst_phi1<const N: usize>(s: &SVector<f64, N>) -> SVector<f64, N> {
    pow_sign(s, 0.5) + s
}

/// `½⌈s⌋⁰ + (3/2)⌈s⌋^{1/2} + s`, the closed form of `Φ₁'Φ₁`.
pub fn gst_phi2<const N: usize>(s: &SVector<f64, N>) -> SVector<f64, N> {
    msign(s) * 0.5 + pow_sign(s, 0.5) * 1.5 + s
}

/// Scalar `⌈s⌋^{1/2} + s`.
pub fn gst_phi1_scalar(s: f64) -> f64 {
    sig(s, 0.5) + s
}

/// Scalar `½⌈s⌋⁰ + (3/2)⌈s⌋^{1/2} + s`.
pub fn gst_phi2_scalar(s: f64) -> f64 {
    0.5 * sign(s) + 1.5 * sig(s, 0.5) + s
}

/// Derivative of [`gst_phi1_scalar`]: `½|s|^{-1/2} + 1`. Infinite at zero.
pub fn gst_phi1_prime_scalar(s: f64) -> f64 {
    0.5 / s.abs().sqrt() + 1.0
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == 0.0 {
                continue;
            }
            out.view_mut((i * br, j * bc), (br, bc)).copy_from(&(b * aij));
        }
    }
    out
}

/// Smallest eigenvalue of a symmetric matrix.
///
/// Symmetry is checked to a relative tolerance of `1e-12`; the eigenvalues
/// come from nalgebra's implicit-shift symmetric QR iteration.
pub fn min_eigenvalue_spd(a: &DMatrix<f64>) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotSymmetric);
    }
    let scale = a.amax().max(1.0);
    let asym = (a - a.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric);
    }
    let eig = a.clone().symmetric_eigen();
    Ok(eig.eigenvalues.min())
}

/// Cross-check helper: every entry finite.
pub fn all_finite<R: nalgebra::Dim, C: nalgebra::Dim, S>(m: &nalgebra::Matrix<f64, R, C, S>) -> bool
where
    S: nalgebra::RawStorage<f64, R, C>,
{
    m.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{dmatrix, vector, Vector3, Vector4};

    #[test]
    fn msign_examples() {
        assert_eq!(msign(&vector![3.0, 0.0, 0.0]), vector![1.0, 0.0, 0.0]);
        assert_eq!(msign(&Vector3::zeros()), Vector3::zeros());
        let m = msign(&Vector4::new(1.0, 1.0, 1.0, 1.0));
        for c in m.iter() {
            assert_relative_eq!(*c, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn pow_sign_examples() {
        assert_relative_eq!(sig(4.0, 0.5), 2.0);
        assert_relative_eq!(sig(-9.0, 0.5), -3.0);
        let p = pow_sign(&vector![3.0, 4.0, 0.0], 0.5);
        let want = vector![0.6, 0.8, 0.0] * 5f64.sqrt();
        assert_relative_eq!(p, want, epsilon = 1e-14);
        // ρ = 0 reduces to msign, including the zero convention
        assert_eq!(pow_sign(&Vector3::zeros(), 0.0), Vector3::zeros());
        assert_eq!(sig(0.0, 0.0), 0.0);
    }

    #[test]
    fn phi_examples() {
        let s = vector![1.0, 0.0, 0.0];
        assert_relative_eq!(gst_phi1(&s), vector![2.0, 0.0, 0.0]);
        assert_relative_eq!(gst_phi2(&s), vector![3.0, 0.0, 0.0]);
        assert_relative_eq!(gst_phi1(&vector![4.0, 0.0, 0.0]), vector![6.0, 0.0, 0.0]);
        assert_eq!(gst_phi1(&Vector3::zeros()), Vector3::zeros());
        assert_eq!(gst_phi2(&Vector3::zeros()), Vector3::zeros());
    }

    #[test]
    fn kron_examples() {
        let i2 = DMatrix::<f64>::identity(2, 2);
        let i3 = DMatrix::<f64>::identity(3, 3);
        assert_eq!(kron(&i2, &i3), DMatrix::identity(6, 6));
        assert_eq!(kron(&dmatrix![2.0], &i3), i3 * 2.0);
        let a = dmatrix![1.0, 2.0; 3.0, 4.0];
        let b = dmatrix![0.0, 5.0; 6.0, 7.0];
        let k = kron(&a, &b);
        assert_eq!(k[(0, 1)], 5.0);
        assert_eq!(k[(3, 3)], 28.0);
        assert_eq!(k[(2, 1)], 15.0);
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert_relative_eq!(
            min_eigenvalue_spd(&DMatrix::identity(3, 3)).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            min_eigenvalue_spd(&dmatrix![2.0, 0.0; 0.0, 5.0]).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        assert!(matches!(
            min_eigenvalue_spd(&dmatrix![1.0, 2.0; 0.0, 1.0]),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn phi1_prime_blows_up_at_zero() {
        assert!(gst_phi1_prime_scalar(0.0).is_infinite());
        assert_relative_eq!(gst_phi1_prime_scalar(1.0), 1.5);
    }
}
