//! Velocity of an eigenvalue branch along `η`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dot_u, vec_norm};
use crate::pencil::PencilSpec;

/// `dλ/dη = λ yᵀGy / (2λ yᵀMy − η yᵀGy)` for an eigenpair `(λ, y)` of
/// `L(·, η)`. The forms are unconjugated, which is the left eigenvector of a
/// complex symmetric matrix, so the formula also holds off the real axis.
pub fn branch_derivative(spec: &PencilSpec, lambda: Complex64, y: &[Complex64], eta: f64) -> Result<Complex64> {
    if y.len() != spec.n() {
        return Err(Error::DimensionMismatch(format!("eigenvector of length {} for n = {}", y.len(), spec.n())));
    }
    let ny = vec_norm(y);
    if ny == 0.0 {
        return Err(Error::InvalidInput("zero eigenvector".into()));
    }
    let res = vec_norm(&spec.apply(lambda, eta, y));
    let scale = spec.scale_at(lambda, eta).max(f64::MIN_POSITIVE);
    if res > 1e-7 * scale * ny {
        return Err(Error::NotAnEigenvalue(format!("residual {:.3e} at λ = {lambda}", res / (scale * ny))));
    }
    let p = spec.pencil();
    let cy: Vec<Complex64> = y.to_vec();
    let my = dot_u(&cy, &p.m.to_complex().mul_vec(&cy));
    let gy = dot_u(&cy, &p.g.to_complex().mul_vec(&cy));
    let den = 2.0 * lambda * my - eta * gy;
    let size = (2.0 * lambda.norm() * spec.m_norm + eta * spec.g_norm).max(1e-300) * ny * ny;
    if den.norm() <= 1e-10 * size {
        return Err(Error::DenominatorVanishes(den.norm()));
    }
    Ok(lambda * gy / den)
}

/// Real form: `λ(Gy,y) / (2λ(My,y) − η(Gy,y))`.
pub fn lambda_derivative(spec: &PencilSpec, lambda: f64, y: &[f64], eta: f64) -> Result<f64> {
    let cy: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(branch_derivative(spec, Complex64::new(lambda, 0.0), &cy, eta)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;
    use crate::pencil::Pencil;

    fn w1() -> PencilSpec {
        PencilSpec::new(
            Pencil::new(
                RealMatrix::from_diag(&[1.0, 0.0]),
                RealMatrix::from_diag(&[0.0, 1.0]),
                RealMatrix::identity(2),
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn w1_branch_velocity() {
        let s = w1();
        assert!((lambda_derivative(&s, -1.0, &[0.0, 1.0], 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((lambda_derivative(&s, -2.0, &[0.0, 1.0], 0.5).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn annihilated_vector_is_stationary() {
        assert_eq!(lambda_derivative(&w1(), 1.0, &[1.0, 0.0], 1.0).unwrap(), 0.0);
    }

    #[test]
    fn vanishing_denominator() {
        // λ² − ηλ + 0.09 at η = 0.6 has the double root 0.3.
        let s = PencilSpec::new(
            Pencil::with_rank_one(RealMatrix::identity(1), 1.0, 0, RealMatrix::from_diag(&[-0.09])).unwrap(),
        )
        .unwrap();
        assert!(matches!(lambda_derivative(&s, 0.3, &[1.0], 0.6), Err(Error::DenominatorVanishes(_))));
    }

    #[test]
    fn rejects_non_eigenpair() {
        assert!(matches!(lambda_derivative(&w1(), 0.5, &[0.0, 1.0], 1.0), Err(Error::NotAnEigenvalue(_))));
    }
}
