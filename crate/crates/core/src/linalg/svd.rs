//! Singular values via Householder bidiagonalization and the Golub–Kahan
//! tridiagonal embedding.

use super::matrix::Matrix;
use super::scalar::Scalar;
use super::symeig::tridiag_eigenvalues;

/// Householder vector for `x`: returns `(v, beta)` with
/// `(I - beta v vᴴ) x = alpha e₁`.
pub(crate) fn householder<T: Scalar>(x: &[T]) -> (Vec<T>, f64) {
    let norm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut v = x.to_vec();
    if norm == 0.0 {
        return (v, 0.0);
    }
    let x0 = x[0];
    let m0 = x0.modulus();
    let phase = if m0 == 0.0 { T::one() } else { x0.scale(1.0 / m0) };
    let alpha = -phase.scale(norm);
    v[0] = x0 - alpha;
    let beta = 1.0 / (norm * (norm + m0));
    (v, beta)
}

/// Singular values in descending order.
pub fn singular_values<T: Scalar>(x: &Matrix<T>) -> Vec<f64> {
    let a = if x.rows() >= x.cols() { x.clone() } else { x.adjoint() };
    let (m, n) = (a.rows(), a.cols());
    if n == 0 {
        return Vec::new();
    }
    let mut a = a;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut col = vec![T::zero(); m];
    for k in 0..n {
        // Left reflector on column k.
        for i in k..m {
            col[i] = a[(i, k)];
        }
        let (v, beta) = householder(&col[k..m]);
        if beta != 0.0 {
            for j in k..n {
                let mut w = T::zero();
                for i in k..m {
                    w += v[i - k].conj() * a[(i, j)];
                }
                let w = w.scale(beta);
                for i in k..m {
                    let vi = v[i - k];
                    a[(i, j)] -= vi * w;
                }
            }
        }
        d[k] = a[(k, k)].modulus();
        if k + 1 < n {
            // Right reflector on row k, columns k+1..n.
            let row: Vec<T> = (k + 1..n).map(|j| a[(k, j)].conj()).collect();
            let (v, beta) = householder(&row);
            if beta != 0.0 {
                for i in k..m {
                    let r = a.row_mut(i);
                    let mut w = T::zero();
                    for j in (k + 1)..n {
                        w += r[j] * v[j - k - 1];
                    }
                    let w = w.scale(beta);
                    for j in (k + 1)..n {
                        r[j] -= w * v[j - k - 1].conj();
                    }
                }
            }
            e[k] = a[(k, k + 1)].modulus();
        }
    }
    // Zero-diagonal tridiagonal of order 2n with off-diagonal d0,e0,d1,e1,...
    let mut off = Vec::with_capacity(2 * n - 1);
    for k in 0..n {
        off.push(d[k]);
        if k + 1 < n {
            off.push(e[k]);
        }
    }
    let vals = tridiag_eigenvalues(&vec![0.0; 2 * n], &off).unwrap_or_else(|_| {
        // Convergence failure is practically impossible on this embedding; fall
        // back to the bidiagonal moduli as crude estimates.
        let mut v: Vec<f64> = d.iter().copied().chain(d.iter().map(|x| -x)).collect();
        v.sort_by(f64::total_cmp);
        v
    });
    let mut sv: Vec<f64> = vals[n..].iter().map(|x| x.abs()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `tol`; `tol = 0` selects
/// `max(rows, cols) * eps * σ_max`.
pub fn rank_with_tol<T: Scalar>(x: &Matrix<T>, tol: f64) -> usize {
    let sv = singular_values(x);
    let tol =
        if tol > 0.0 { tol } else { x.rows().max(x.cols()) as f64 * f64::EPSILON * sv.first().copied().unwrap_or(0.0) };
    sv.iter().filter(|&&s| s > tol).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{DenseMatrix, RealMatrix};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_rank() {
        assert_eq!(rank_with_tol(&RealMatrix::identity(3), 0.0), 3);
    }

    #[test]
    fn zero_rank() {
        assert_eq!(rank_with_tol(&RealMatrix::zeros(4, 4), 0.0), 0);
    }

    #[test]
    fn outer_product_rank() {
        let u = [1.0, -2.0, 0.5, 3.0];
        let x = RealMatrix::from_fn(4, 4, |i, j| u[i] * u[j]);
        assert_eq!(rank_with_tol(&x, 0.0), 1);
    }

    #[test]
    fn complex_values_match_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = DenseMatrix::from_fn(5, 3, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let sv = singular_values(&x);
        // Compare against eigenvalues of the Hermitian Gram matrix embedded as a real 2n x 2n.
        let g = x.adjoint().matmul(&x);
        let emb = RealMatrix::from_fn(6, 6, |i, j| {
            let z = g[(i % 3, j % 3)];
            match (i < 3, j < 3) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let ev = crate::linalg::symeig::sym_eigenvalues(&emb).unwrap();
        let mut gram: Vec<f64> = ev.iter().step_by(2).map(|v| v.max(0.0).sqrt()).collect();
        gram.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in sv.iter().zip(&gram) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn wide_matrix() {
        let x = RealMatrix::from_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 4.0, 0.0]]);
        let sv = singular_values(&x);
        assert!((sv[0] - 4.0).abs() < 1e-14 && (sv[1] - 3.0).abs() < 1e-14);
    }
}
