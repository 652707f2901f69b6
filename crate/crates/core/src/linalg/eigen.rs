//! General eigensolver: balancing, Householder Hessenberg reduction and
//! shifted QR (Francis double shift for real input, single Wilkinson shift
//! for complex input). Eigenvectors come from inverse iteration.

use num_complex::Complex64;

use super::lu::Lu;
use super::matrix::{vec_norm, DenseMatrix, Matrix, RealMatrix};
use super::scalar::Scalar;
use super::svd::householder;
use crate::error::{Error, Result};

/// Eigenvalues with optional right eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    /// Unit-norm eigenvectors as columns, matching `values`.
    pub vectors: Option<DenseMatrix>,
    /// max ‖Cv − λv‖ / ‖C‖_F over computed pairs (0 when vectors are absent).
    pub residual_max: f64,
}

/// Radix-2 balancing by diagonal similarity, in place.
pub fn balance<T: Scalar>(a: &mut Matrix<T>) {
    let n = a.rows();
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs1();
                    r += a[(i, j)].abs1();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for x in a.row_mut(i) {
                        *x = x.scale(g);
                    }
                    for j in 0..n {
                        a[(j, i)] = a[(j, i)].scale(f);
                    }
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form, in place.
pub fn hessenberg<T: Scalar>(a: &mut Matrix<T>) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    let mut w = vec![T::zero(); n];
    for k in 0..n - 2 {
        let x: Vec<T> = ((k + 1)..n).map(|i| a[(i, k)]).collect();
        if x[1..].iter().all(|z| *z == T::zero()) {
            continue;
        }
        let (v, beta) = householder(&x);
        if beta == 0.0 {
            continue;
        }
        // Left: rows k+1.., columns k..
        for z in w.iter_mut() {
            *z = T::zero();
        }
        for (idx, i) in ((k + 1)..n).enumerate() {
            let vc = v[idx].conj();
            let row = a.row(i);
            for j in k..n {
                w[j] += vc * row[j];
            }
        }
        for (idx, i) in ((k + 1)..n).enumerate() {
            let f = v[idx].scale(beta);
            let row = a.row_mut(i);
            for j in k..n {
                row[j] -= f * w[j];
            }
        }
        // Right: all rows, columns k+1..
        for i in 0..n {
            let row = a.row_mut(i);
            let mut s = T::zero();
            for (idx, j) in ((k + 1)..n).enumerate() {
                s += row[j] * v[idx];
            }
            let s = s.scale(beta);
            for (idx, j) in ((k + 1)..n).enumerate() {
                row[j] -= s * v[idx].conj();
            }
        }
        for i in (k + 2)..n {
            a[(i, k)] = T::zero();
        }
    }
}

/// Eigenvalues of a real upper Hessenberg matrix (Francis double-shift QR,
/// values only). `cap` bounds the total number of sweeps.
fn hqr(a: &mut RealMatrix, cap: usize) -> Result<Vec<Complex64>> {
    let n = a.rows();
    let mut wr = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(wr);
    }
    let eps = f64::EPSILON;
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let mut sweeps = 0usize;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l > 0 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= eps * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nu, nu)];
            if l == nu {
                wr[nu] = Complex64::new(x + t, 0.0);
                nn -= 1;
                break;
            }
            let mut y = a[(nu - 1, nu - 1)];
            let mut w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[nu - 1] = Complex64::new(x + z, 0.0);
                    wr[nu] = wr[nu - 1];
                    if z != 0.0 {
                        wr[nu] = Complex64::new(x - w / z, 0.0);
                    }
                } else {
                    wr[nu] = Complex64::new(x + p, -z);
                    wr[nu - 1] = wr[nu].conj();
                }
                nn -= 2;
                break;
            }
            sweeps += 1;
            if sweeps > cap {
                return Err(Error::NoConvergence(cap));
            }
            if its > 0 && its % 10 == 0 {
                t += x;
                for i in 0..=nu {
                    a[(i, i)] -= x;
                }
                let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let (mut p, mut q, mut r, mut z);
            let mut m = nu - 2;
            loop {
                z = a[(m, m)];
                r = x - z;
                let s0 = y - z;
                p = (r * s0 - w) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - r - s0;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m..nu - 1 {
                a[(i + 2, i)] = 0.0;
                if i != m {
                    a[(i + 2, i - 1)] = 0.0;
                }
            }
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = 0.0;
                    if k + 1 != nu {
                        r = a[(k + 2, k - 1)];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[(k, k - 1)] = -a[(k, k - 1)];
                        }
                    } else {
                        a[(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                        if k + 1 != nu {
                            pp += r * a[(k + 2, j)];
                            a[(k + 2, j)] -= pp * z;
                        }
                        a[(k + 1, j)] -= pp * y;
                        a[(k, j)] -= pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                        if k + 1 != nu {
                            pp += z * a[(i, k + 2)];
                            a[(i, k + 2)] -= pp * r;
                        }
                        a[(i, k + 1)] -= pp * q;
                        a[(i, k)] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr)
}

/// Eigenvalues of a complex upper Hessenberg matrix by single-shift QR with
/// Wilkinson shifts and Givens rotations, restricted to the active window.
fn complex_qr(h: &mut DenseMatrix, cap: usize) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; n];
    if n == 0 {
        return Ok(out);
    }
    let eps = f64::EPSILON;
    let anorm = h.norm_max().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut sweeps = 0usize;
    let mut rot: Vec<(Complex64, Complex64)> = Vec::with_capacity(n);
    loop {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].abs1() + h[(l, l)].abs1();
            if s == 0.0 {
                s = anorm;
            }
            if h[(l, l - 1)].abs1() <= eps * s {
                h[(l, l - 1)] = zero;
                break;
            }
            l -= 1;
        }
        if l == hi {
            out[hi] = h[(hi, hi)];
            its = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        sweeps += 1;
        if sweeps > cap {
            return Err(Error::NoConvergence(cap));
        }
        its += 1;
        let mu = if its % 10 == 0 {
            let extra = if hi >= 2 { h[(hi - 1, hi - 2)].abs1() } else { 0.0 };
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].abs1() + extra, 0.0)
        } else {
            let a = h[(hi - 1, hi - 1)];
            let b = h[(hi - 1, hi)];
            let c = h[(hi, hi - 1)];
            let d = h[(hi, hi)];
            let tr = 0.5 * (a - d);
            let disc = (tr * tr + b * c).sqrt();
            let m1 = 0.5 * (a + d) + disc;
            let m2 = 0.5 * (a + d) - disc;
            if (m1 - d).norm() <= (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        rot.clear();
        for k in l..hi {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 { (Complex64::new(1.0, 0.0), zero) } else { (a / r, b / r) };
            rot.push((c, s));
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c.conj() * x + s.conj() * y;
                h[(k + 1, j)] = -s * x + c * y;
            }
        }
        for (idx, k) in (l..hi).enumerate() {
            let (c, s) = rot[idx];
            let top = (k + 1).min(hi);
            for i in l..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s;
                h[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
    Ok(out)
}

fn sort_values(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Eigenvalues of a real square matrix, sorted by (Re, Im).
pub fn eigenvalues_real(c: &RealMatrix) -> Result<Vec<Complex64>> {
    if !c.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", c.rows(), c.cols())));
    }
    if !c.is_finite() {
        return Err(Error::InvalidInput("non-finite matrix entry".into()));
    }
    let n = c.rows();
    let mut a = c.clone();
    balance(&mut a);
    hessenberg(&mut a);
    let mut v = hqr(&mut a, 30 * n.max(1))?;
    sort_values(&mut v);
    Ok(v)
}

/// Eigenvalues of a complex square matrix, sorted by (Re, Im). Real input is
/// routed through the real double-shift path.
pub fn eigenvalues(c: &DenseMatrix) -> Result<Vec<Complex64>> {
    if !c.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", c.rows(), c.cols())));
    }
    if !c.is_finite() {
        return Err(Error::InvalidInput("non-finite matrix entry".into()));
    }
    if c.as_slice().iter().all(|z| z.im == 0.0) {
        return eigenvalues_real(&c.map(|z| z.re));
    }
    let n = c.rows();
    let mut a = c.clone();
    balance(&mut a);
    hessenberg(&mut a);
    let mut v = complex_qr(&mut a, 30 * n.max(1))?;
    sort_values(&mut v);
    Ok(v)
}

/// Unit vector approximately spanning `ker(C - λI)` by inverse iteration,
/// orthogonalized against `previous` (vectors of nearby eigenvalues).
fn inverse_iteration(c: &DenseMatrix, lambda: Complex64, previous: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = c.rows();
    let scale = c.norm_max().max(1.0);
    let shifted = DenseMatrix::from_fn(n, n, |i, j| if i == j { c[(i, j)] - lambda } else { c[(i, j)] });
    let lu = Lu::new_regularized(&shifted, f64::EPSILON * scale);
    let mut x: Vec<Complex64> = (0..n).map(|k| Complex64::new(1.0 + 0.37 * (k as f64 * 0.71).sin(), 0.0)).collect();
    for _ in 0..4 {
        for p in previous {
            let d = super::matrix::dot_c(p, &x);
            for (xi, pi) in x.iter_mut().zip(p) {
                *xi -= d * pi;
            }
        }
        let nx = vec_norm(&x);
        if nx == 0.0 || !nx.is_finite() {
            break;
        }
        for xi in x.iter_mut() {
            *xi /= nx;
        }
        x = lu.solve_vec(&x);
    }
    let nx = vec_norm(&x);
    x.iter().map(|z| z / nx).collect()
}

/// Eigenvalues and unit right eigenvectors of a square matrix.
pub fn eigen_standard(c: &DenseMatrix) -> Result<EigenDecomposition> {
    let values = eigenvalues(c)?;
    let n = c.rows();
    let fro = c.norm_fro().max(f64::MIN_POSITIVE);
    let mut vectors = DenseMatrix::zeros(n, n);
    let mut residual_max: f64 = 0.0;
    let mut done: Vec<(Complex64, Vec<Complex64>)> = Vec::with_capacity(n);
    for (k, &lam) in values.iter().enumerate() {
        let tol = 1e-6 * lam.norm().max(1.0);
        let near: Vec<Vec<Complex64>> =
            done.iter().filter(|(m, _)| (m - lam).norm() <= tol).map(|(_, v)| v.clone()).collect();
        let v = inverse_iteration(c, lam, &near);
        let cv = c.mul_vec(&v);
        let res = cv.iter().zip(&v).map(|(a, b)| (a - lam * b).norm_sqr()).sum::<f64>().sqrt();
        residual_max = residual_max.max(res / fro);
        vectors.set_col(k, &v);
        done.push((lam, v));
    }
    Ok(EigenDecomposition { values, vectors: Some(vectors), residual_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn diagonal_values() {
        let d = DenseMatrix::from_diag(&[3.0, 1.0, 2.0].map(|x| Complex64::new(x, 0.0)));
        let r = eigen_standard(&d).unwrap();
        for (k, v) in r.values.iter().enumerate() {
            assert!(close(*v, Complex64::new(k as f64 + 1.0, 0.0), 1e-12));
        }
        assert!(r.residual_max <= 1e-8);
    }

    #[test]
    fn rotation_values() {
        let c = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).to_complex();
        let r = eigen_standard(&c).unwrap();
        assert!(close(r.values[0], Complex64::new(0.0, -1.0), 1e-12));
        assert!(close(r.values[1], Complex64::new(0.0, 1.0), 1e-12));
    }

    #[test]
    fn cubic_companion() {
        let c = RealMatrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![6.0, -11.0, 6.0]]);
        let v = eigenvalues_real(&c).unwrap();
        for (k, z) in v.iter().enumerate() {
            assert!(close(*z, Complex64::new(k as f64 + 1.0, 0.0), 1e-10));
        }
    }

    #[test]
    fn triangular_exact() {
        let c = RealMatrix::from_rows(&[vec![4.0, 1.0, 7.0], vec![0.0, -2.0, 3.0], vec![0.0, 0.0, 0.5]]);
        let v = eigenvalues_real(&c).unwrap();
        let want = [-2.0, 0.5, 4.0];
        for (z, w) in v.iter().zip(want) {
            assert!(close(*z, Complex64::new(w, 0.0), 1e-12));
        }
    }

    #[test]
    fn complex_input_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let c = DenseMatrix::from_fn(12, 12, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let r = eigen_standard(&c).unwrap();
        assert_eq!(r.values.len(), 12);
        assert!(r.residual_max <= 1e-8, "{}", r.residual_max);
        let tr: Complex64 = c.diag().iter().sum();
        let sum: Complex64 = r.values.iter().sum();
        assert!((tr - sum).norm() < 1e-9);
    }

    #[test]
    fn real_random_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let c = RealMatrix::from_fn(40, 40, |_, _| rng.gen_range(-1.0..1.0)).to_complex();
        let r = eigen_standard(&c).unwrap();
        assert!(r.residual_max <= 1e-8, "{}", r.residual_max);
    }
}
