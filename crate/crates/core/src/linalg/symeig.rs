//! Real symmetric eigensolver: Householder tridiagonalization followed by
//! implicit QL with Wilkinson shifts.

use super::matrix::RealMatrix;
use crate::error::{Error, Result};

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: RealMatrix,
}

fn check_symmetric(s: &RealMatrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", s.rows(), s.cols())));
    }
    let dev = s.asymmetry();
    if dev > 1e-12 * s.norm_max().max(1.0) {
        return Err(Error::NotSymmetric(dev));
    }
    Ok(())
}

/// Full decomposition `S = V Λ Vᵀ`.
pub fn sym_eigen(s: &RealMatrix) -> Result<SymEigen> {
    check_symmetric(s)?;
    let n = s.rows();
    let mut z: Vec<Vec<f64>> = (0..n).map(|i| s.row(i).to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, &mut d, &mut e, true);
    // Work on eigenvectors as rows for contiguous rotation updates.
    let mut zt: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|k| z[k][i]).collect()).collect();
    tqli(&mut d, &mut e, Some(&mut zt))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = RealMatrix::from_fn(n, n, |r, c| zt[order[c]][r]);
    Ok(SymEigen { values, vectors })
}

/// Ascending eigenvalues only.
pub fn sym_eigenvalues(s: &RealMatrix) -> Result<Vec<f64>> {
    check_symmetric(s)?;
    let n = s.rows();
    let mut z: Vec<Vec<f64>> = (0..n).map(|i| s.row(i).to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, &mut d, &mut e, false);
    tqli(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off.len() == diag.len() - 1`), ascending.
pub fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    // tqli expects e[i] in slot i (i >= 1) as produced by tred2.
    for i in 1..n {
        e[i] = off[i - 1];
    }
    tqli(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn tred2(z: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64], vecs: bool) {
    let n = d.len();
    if n == 0 {
        return;
    }
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| z[i][k].abs()).sum();
            if scale == 0.0 {
                e[i] = z[i][l];
            } else {
                for k in 0..=l {
                    z[i][k] /= scale;
                    h += z[i][k] * z[i][k];
                }
                let mut f = z[i][l];
                let mut g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i][l] = f - g;
                f = 0.0;
                for j in 0..=l {
                    if vecs {
                        z[j][i] = z[i][j] / h;
                    }
                    g = 0.0;
                    for k in 0..=j {
                        g += z[j][k] * z[i][k];
                    }
                    for k in (j + 1)..=l {
                        g += z[k][j] * z[i][k];
                    }
                    e[j] = g / h;
                    f += e[j] * z[i][j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = z[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[j][k] -= f * e[k] + g * z[i][k];
                    }
                }
            }
        } else {
            e[i] = z[i][l];
        }
        d[i] = h;
    }
    if vecs {
        d[0] = 0.0;
    }
    e[0] = 0.0;
    for i in 0..n {
        if vecs {
            if d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += z[i][k] * z[k][j];
                    }
                    for k in 0..i {
                        z[k][j] -= g * z[k][i];
                    }
                }
            }
            d[i] = z[i][i];
            z[i][i] = 1.0;
            for j in 0..i {
                z[j][i] = 0.0;
                z[i][j] = 0.0;
            }
        } else {
            d[i] = z[i][i];
        }
    }
}

/// Implicit QL on a tridiagonal matrix. `zt` holds eigenvectors as rows.
fn tqli(d: &mut [f64], e: &mut [f64], mut zt: Option<&mut Vec<Vec<f64>>>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let cap = 60;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > cap {
                return Err(Error::NoConvergence(cap));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = zt.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut(i + 1);
                    let zi = &mut lo[i];
                    let zi1 = &mut hi[0];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let f = *b;
                        *b = s * *a + c * f;
                        *a = c * *a - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_sorted() {
        let r = sym_eigen(&RealMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(r.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn swap_matrix() {
        let r = sym_eigen(&RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])).unwrap();
        assert!((r.values[0] + 1.0).abs() < 1e-14 && (r.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = RealMatrix::from_fn(6, 6, |_, _| rng.gen_range(-1.0..1.0));
        let s = x.add(&x.transpose());
        let r = sym_eigen(&s).unwrap();
        let lam = RealMatrix::from_diag(&r.values);
        let rec = r.vectors.matmul(&lam).matmul(&r.vectors.transpose());
        assert!(rec.sub(&s).norm_fro() <= 1e-9 * s.norm_fro());
        let defect = r.vectors.transpose().matmul(&r.vectors).sub(&RealMatrix::identity(6)).norm_max();
        assert!(defect <= 1e-10);
        let v = sym_eigenvalues(&s).unwrap();
        for (a, b) in v.iter().zip(&r.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let s = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(sym_eigen(&s), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn tridiagonal_values() {
        // tridiag(-1,2,-1) of size 4: 2 - 2cos(kπ/5)
        let v = tridiag_eigenvalues(&[2.0; 4], &[-1.0; 3]).unwrap();
        for (k, x) in v.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 5.0).cos();
            assert!((x - exact).abs() < 1e-13);
        }
    }
}
