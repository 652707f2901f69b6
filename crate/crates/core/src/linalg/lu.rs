//! Pivoted LU factorizations, dense and banded.

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense LU with partial pivoting, `P A = L U` stored in place.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    /// Factors `a`; fails when a pivot falls below `n * eps * ‖a‖_max`.
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", a.rows(), a.cols())));
        }
        let threshold = n as f64 * f64::EPSILON * a.norm_max();
        let lu = Self::factor(a.clone(), Some(threshold))?;
        Ok(lu)
    }

    /// Factors `a`, replacing tiny pivots by `floor` instead of failing.
    /// Used for inverse iteration at (nearly) exact eigenvalues.
    pub fn new_regularized(a: &Matrix<T>, floor: f64) -> Self {
        let mut lu = Self::factor(a.clone(), None).expect("regularized factorization is total");
        let n = a.rows();
        for i in 0..n {
            if lu.lu[(i, i)].modulus() < floor {
                lu.lu[(i, i)] = T::from_real(floor);
            }
        }
        lu
    }

    fn factor(mut a: Matrix<T>, threshold: Option<f64>) -> Result<Self> {
        let n = a.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = a[(k, k)].abs1();
            for i in (k + 1)..n {
                let v = a[(i, k)].abs1();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if let Some(t) = threshold {
                let piv = a[(p, k)].modulus();
                if piv <= t {
                    return Err(Error::SingularMatrix { pivot: piv, threshold: t });
                }
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
            }
            let pivot = a[(k, k)];
            if pivot == T::zero() {
                continue;
            }
            for i in (k + 1)..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                if f == T::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = a[(k, j)];
                    a[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu: a, perm })
    }

    pub fn solve_vec(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.rows();
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &Matrix<T>) -> Matrix<T> {
        let mut out = Matrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            out.set_col(j, &self.solve_vec(&b.col(j)));
        }
        out
    }
}

/// Solves `A X = B` by pivoted elimination.
pub fn solve_linear<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!("rhs has {} rows, expected {}", b.rows(), a.rows())));
    }
    Ok(Lu::new(a)?.solve(b))
}

/// Banded LU with partial pivoting for matrices with half-bandwidths `(kl, ku)`.
///
/// Row `i` of the work array holds columns `i - kl ..= i + ku + kl`.
#[derive(Clone, Debug)]
pub struct BandLu<T> {
    n: usize,
    kl: usize,
    width: usize,
    band: Vec<T>,
    lower: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> BandLu<T> {
    /// Factors a banded matrix given by an entry accessor. Pivots below `floor`
    /// in modulus are replaced by `floor`.
    pub fn new(n: usize, kl: usize, ku: usize, entry: impl Fn(usize, usize) -> T, floor: f64) -> Self {
        let width = kl + ku + kl + 1;
        // band[i*width + (j + kl - i)] = a[i][j]
        let mut band = vec![T::zero(); n * width];
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + ku).min(n - 1);
            for j in lo..=hi {
                band[i * width + (j + kl - i)] = entry(i, j);
            }
        }
        let mut lower = vec![T::zero(); n * kl.max(1)];
        let mut perm = vec![0usize; n];
        let at = |i: usize, j: usize| i * width + (j + kl - i);
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = band[at(k, k)].abs1();
            for i in (k + 1)..=last {
                let v = band[at(i, k)].abs1();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            perm[k] = p;
            let jmax = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (a, b) = (at(k, j), at(p, j));
                    band.swap(a, b);
                }
            }
            if band[at(k, k)].modulus() < floor {
                band[at(k, k)] = T::from_real(floor);
            }
            let pivot = band[at(k, k)];
            for i in (k + 1)..=last {
                let f = band[at(i, k)] / pivot;
                lower[k * kl.max(1) + (i - k - 1)] = f;
                band[at(i, k)] = T::zero();
                if f == T::zero() {
                    continue;
                }
                for j in (k + 1)..=jmax {
                    let u = band[at(k, j)];
                    band[at(i, j)] -= f * u;
                }
            }
        }
        Self { n, kl, width, band, lower, perm }
    }

    pub fn solve_vec(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let kl = self.kl;
        let w = self.width;
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.perm[k];
            if p != k {
                x.swap(p, k);
            }
            let last = (k + kl).min(n - 1);
            let xk = x[k];
            for i in (k + 1)..=last {
                x[i] -= self.lower[k * kl.max(1) + (i - k - 1)] * xk;
            }
        }
        let reach = w - kl - 1;
        for i in (0..n).rev() {
            let mut s = x[i];
            let hi = (i + reach).min(n - 1);
            for j in (i + 1)..=hi {
                s -= self.band[i * w + (j + kl - i)] * x[j];
            }
            x[i] = s / self.band[i * w + kl];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::RealMatrix;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_solve() {
        let b = RealMatrix::from_row_major(3, 1, vec![1.0, 2.0, 3.0]);
        let x = solve_linear(&RealMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_solve() {
        let a = RealMatrix::from_diag(&[2.0, 4.0]);
        let b = RealMatrix::from_row_major(2, 1, vec![2.0, 8.0]);
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 2.0]);
    }

    #[test]
    fn random_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = RealMatrix::from_fn(5, 5, |i, j| rng.gen_range(-1.0..1.0) + if i == j { 4.0 } else { 0.0 });
        let b = RealMatrix::from_fn(5, 1, |_, _| rng.gen_range(-1.0..1.0));
        let x = solve_linear(&a, &b).unwrap();
        let r = a.matmul(&x).sub(&b).norm_fro();
        assert!(r <= 1e-10 * b.norm_fro());
    }

    #[test]
    fn singular_detected() {
        let a = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        let b = RealMatrix::identity(2);
        assert!(matches!(solve_linear(&a, &b), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn band_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 9;
        let a = Matrix::<Complex64>::from_fn(n, n, |i, j| {
            if i.abs_diff(j) <= 1 || (j > i && j - i == 2) {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let b: Vec<Complex64> = (0..n).map(|k| Complex64::new(k as f64, 1.0)).collect();
        let (kl, ku) = a.bandwidth();
        let band = BandLu::new(n, kl, ku, |i, j| a[(i, j)], 0.0);
        let xb = band.solve_vec(&b);
        let xd = Lu::new(&a).unwrap().solve_vec(&b);
        for (p, q) in xb.iter().zip(&xd) {
            assert!((p - q).norm() < 1e-10 * (1.0 + q.norm()));
        }
    }
}
