//! Spectral radius of dense square matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 2_000;

/// `ρ(W)`, the largest eigenvalue magnitude.
///
/// Runs power iteration first and accepts the estimate only once the
/// eigen-residual `min(‖Wx − λx‖, ‖Wx + λx‖)` falls below a relative `1e-10`.
/// Matrices whose dominant eigenvalues form a complex pair (or are too close
/// in magnitude to separate) fall back to a dense Schur decomposition.
pub fn spectral_radius(w: &DMatrix<f64>) -> Result<f64> {
    if !w.is_square() {
        return Err(Error::DimensionMismatch {
            what: "spectral radius of non-square matrix",
            expected: w.nrows(),
            actual: w.ncols(),
        });
    }
    let n = w.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    if let Some(rho) = power_iteration(w) {
        return Ok(rho);
    }
    dense_spectral_radius(w)
}

fn power_iteration(w: &DMatrix<f64>) -> Option<f64> {
    let n = w.nrows();
    // Irregular start vector; a constant vector is orthogonal to the dominant
    // eigenvector of too many structured matrices.
    let mut x = nalgebra::DVector::from_fn(n, |i, _| 1.0 + ((i as f64 + 1.0) * 0.618_033_988_75).fract());
    x /= x.norm();
    let mut y = nalgebra::DVector::zeros(n);
    for _ in 0..POWER_MAX_ITER {
        y.gemv(1.0, w, &x, 0.0);
        let lambda = y.norm();
        if lambda == 0.0 {
            return Some(0.0);
        }
        let plus = (&y - lambda * &x).norm();
        let minus = (&y + lambda * &x).norm();
        if plus.min(minus) <= POWER_TOL * lambda {
            return Some(lambda);
        }
        x.copy_from(&y);
        x /= lambda;
    }
    None
}

fn dense_spectral_radius(w: &DMatrix<f64>) -> Result<f64> {
    let schur = nalgebra::Schur::try_new(w.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    Ok(schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal() {
        let w = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.3, -0.7, 0.5]));
        assert!((spectral_radius(&w).unwrap() - 0.7).abs() < 1e-9);
    }

    #[test]
    fn rotation_uses_fallback() {
        // eigenvalues ±0.5i, power iteration cannot converge
        let w = DMatrix::from_row_slice(2, 2, &[0.0, -0.5, 0.5, 0.0]);
        assert!(power_iteration(&w).is_none());
        assert!((spectral_radius(&w).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_and_nilpotent() {
        assert_eq!(spectral_radius(&DMatrix::zeros(4, 4)).unwrap(), 0.0);
        let w = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0]);
        assert_eq!(spectral_radius(&w).unwrap(), 0.0);
    }

    #[test]
    fn one_by_one() {
        let w = DMatrix::from_element(1, 1, -0.25);
        assert_eq!(spectral_radius(&w).unwrap(), 0.25);
    }

    #[test]
    fn rejects_non_square() {
        assert!(spectral_radius(&DMatrix::zeros(2, 3)).is_err());
    }
}
