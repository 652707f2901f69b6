//! Finite eigenvalues of real matrix polynomials `Σ λ^k C_k` (degree 1 or 2)
//! via a real shift and reversal: `λ = σ + 1/μ`, followed by a companion
//! eigenproblem in `μ`. Eigenvalues at infinity (`μ = 0`) are counted from
//! kernel dimensions of block Toeplitz matrices, which is robust against the
//! `√eps` scatter of Jordan chains at `μ = 0`.

use num_complex::Complex64;

use super::eigen::eigenvalues_real;
use super::lu::Lu;
use super::matrix::RealMatrix;
use super::svd::{rank_with_tol, singular_values};
use super::symeig::sym_eigenvalues;
use crate::error::{Error, Result};

/// Deterministic shift candidates, tried in order.
pub const SHIFT_CANDIDATES: [f64; 5] = [0.0, 0.123456789, -0.987654321, std::f64::consts::SQRT_2, -std::f64::consts::E];

/// Finite spectrum of a matrix polynomial.
#[derive(Clone, Debug)]
pub struct PolyEigen {
    /// Finite eigenvalues with multiplicity, sorted by (Re, Im).
    pub finite: Vec<Complex64>,
    /// Number of eigenvalues at infinity.
    pub infinite: usize,
    /// The shift that was used.
    pub shift: f64,
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Evaluates `Σ x^k C_k` at a real point.
pub fn poly_at(coeffs: &[RealMatrix], x: f64) -> RealMatrix {
    let mut out = RealMatrix::zeros(coeffs[0].rows(), coeffs[0].cols());
    let mut p = 1.0;
    for c in coeffs {
        out = out.add_scaled(p, c);
        p *= x;
    }
    out
}

/// Smallest singular value of a square real matrix, using the symmetric
/// eigensolver when the matrix is symmetric.
pub fn smallest_singular_value(x: &RealMatrix) -> f64 {
    if x.is_symmetric() {
        if let Ok(v) = sym_eigenvalues(x) {
            return v.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
        }
    }
    singular_values(x).last().copied().unwrap_or(0.0)
}

/// First shift from [`SHIFT_CANDIDATES`] whose smallest singular value
/// exceeds `1e-8 * norm`.
pub fn choose_shift(coeffs: &[RealMatrix], norm: f64) -> Option<f64> {
    SHIFT_CANDIDATES.iter().copied().find(|&s| smallest_singular_value(&poly_at(coeffs, s)) > 1e-8 * norm)
}

/// Counts eigenvalues at `μ = 0` of `Σ μ^i R_i`.
fn zero_multiplicity(rev: &[RealMatrix]) -> usize {
    let n = rev[0].rows();
    let d = rev.len() - 1;
    let scale = rev.iter().map(|r| r.norm_max()).fold(1.0, f64::max);
    let mut prev = 0;
    for k in 1..=(d * n + 1) {
        let size = k * n;
        let mut t = RealMatrix::zeros(size, size);
        for r in 0..k {
            for c in 0..=r {
                let idx = r - c;
                if idx > d {
                    continue;
                }
                let blk = &rev[idx];
                for i in 0..n {
                    for j in 0..n {
                        t[(r * n + i, c * n + j)] = blk[(i, j)];
                    }
                }
            }
        }
        let tol = 1e-10 * scale * k as f64;
        let ker = size - rank_with_tol(&t, tol);
        if ker == prev {
            return ker;
        }
        prev = ker;
    }
    prev
}

/// Finite eigenvalues of `Σ λ^k C_k` (`coeffs[k] = C_k`, degree 1 or 2).
/// `norm` scales the shift acceptance test.
pub fn poly_eigen(coeffs: &[RealMatrix], norm: f64) -> Result<PolyEigen> {
    let d = coeffs.len() - 1;
    if !(1..=2).contains(&d) {
        return Err(Error::InvalidInput(format!("unsupported polynomial degree {d}")));
    }
    let n = coeffs[0].rows();
    let sigma = choose_shift(coeffs, norm).ok_or(Error::ShiftExhausted)?;
    // D_k: coefficients of ν^k after substituting λ = σ + ν.
    let shifted: Vec<RealMatrix> = (0..=d)
        .map(|k| {
            let mut acc = RealMatrix::zeros(n, n);
            for (j, c) in coeffs.iter().enumerate().skip(k) {
                acc = acc.add_scaled(binom(j, k) * sigma.powi((j - k) as i32), c);
            }
            acc
        })
        .collect();
    // Reversed: R_i = D_{d-i}; R_d = D_0 = P(σ) is invertible.
    let rev: Vec<RealMatrix> = (0..=d).map(|i| shifted[d - i].clone()).collect();
    let lu = Lu::new(&rev[d]).map_err(|_| Error::ShiftExhausted)?;
    let dn = d * n;
    let mut comp = RealMatrix::zeros(dn, dn);
    for blk in 0..d.saturating_sub(1) {
        for i in 0..n {
            comp[(blk * n + i, (blk + 1) * n + i)] = 1.0;
        }
    }
    for i in 0..d {
        let k = lu.solve(&rev[i]);
        for r in 0..n {
            for c in 0..n {
                comp[((d - 1) * n + r, i * n + c)] = -k[(r, c)];
            }
        }
    }
    let mut mus = eigenvalues_real(&comp)?;
    let infinite = if is_nonsingular(&coeffs[d]) { 0 } else { zero_multiplicity(&rev) }.min(dn);
    mus.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let mut finite: Vec<Complex64> = mus[infinite..].iter().map(|&mu| Complex64::new(sigma, 0.0) + mu.inv()).collect();
    finite.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(PolyEigen { finite, infinite, shift: sigma })
}

fn is_nonsingular(lead: &RealMatrix) -> bool {
    let scale = lead.norm_max();
    if scale == 0.0 {
        return false;
    }
    smallest_singular_value(lead) > 1e-10 * scale * lead.rows() as f64
}

/// Cholesky factor `L` with `M = L Lᵀ`, or `None` if a pivot is not positive.
fn cholesky(m: &RealMatrix) -> Option<RealMatrix> {
    let n = m.rows();
    let mut l = RealMatrix::zeros(n, n);
    for j in 0..n {
        let mut s = m[(j, j)];
        for k in 0..j {
            s -= l[(j, k)] * l[(j, k)];
        }
        if s <= 0.0 {
            return None;
        }
        let d = s.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Number of finite real eigenvalues `λ < 0` of `λM − A`.
pub fn count_negative_eigs_pencil(a: &RealMatrix, m: &RealMatrix) -> Result<usize> {
    let scale = a.norm_max().max(m.norm_max()).max(1.0);
    count_negative_eigs_pencil_below(a, m, 1e-10 * scale)
}

/// Number of finite real eigenvalues `λ < −threshold` of `λM − A`.
pub fn count_negative_eigs_pencil_below(a: &RealMatrix, m: &RealMatrix, threshold: f64) -> Result<usize> {
    if !a.is_square() || !m.is_square() || a.rows() != m.rows() {
        return Err(Error::DimensionMismatch("A and M must be square of equal size".into()));
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric(a.asymmetry()));
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric(m.asymmetry()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(0);
    }
    let mnorm = m.norm_max();
    let min_m = sym_eigenvalues(m)?[0];
    if min_m > 1e-8 * mnorm.max(1.0) {
        if let Some(l) = cholesky(m) {
            // L⁻¹ A L⁻ᵀ via two triangular solves.
            let y = forward_sub_cols(&l, a);
            let z = forward_sub_cols(&l, &y.transpose());
            let vals = sym_eigenvalues(&z.symmetrized())?;
            return Ok(vals.iter().filter(|&&v| v < -threshold).count());
        }
    }
    let norm = a.norm_max().max(mnorm).max(1.0);
    let coeffs = [a.scaled(-1.0), m.clone()];
    let res = poly_eigen(&coeffs, norm).map_err(|e| match e {
        Error::ShiftExhausted => Error::DegeneratePencil,
        other => other,
    })?;
    Ok(res.finite.iter().filter(|z| z.im.abs() <= 1e-8 * (1.0 + z.norm()) && z.re < -threshold).count())
}

/// Solves `L X = B` for lower-triangular `L`, column by column.
fn forward_sub_cols(l: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    let n = l.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_mass_counts() {
        let m = RealMatrix::identity(2);
        assert_eq!(count_negative_eigs_pencil(&RealMatrix::from_diag(&[-1.0, 2.0]), &m).unwrap(), 1);
        let m4 = RealMatrix::identity(4);
        let a = RealMatrix::from_diag(&[-1.0, -2.0, 0.0, 5.0]);
        assert_eq!(count_negative_eigs_pencil(&a, &m4).unwrap(), 2);
    }

    #[test]
    fn singular_mass_without_finite_values() {
        let a = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let m = RealMatrix::from_diag(&[1.0, 0.0]);
        assert_eq!(count_negative_eigs_pencil(&a, &m).unwrap(), 0);
    }

    #[test]
    fn singular_mass_with_negative_value() {
        // λ diag(1,0) − diag(−3, 2): finite eigenvalue −3 only.
        let a = RealMatrix::from_diag(&[-3.0, 2.0]);
        let m = RealMatrix::from_diag(&[1.0, 0.0]);
        assert_eq!(count_negative_eigs_pencil(&a, &m).unwrap(), 1);
    }

    #[test]
    fn degenerate_pencil() {
        let a = RealMatrix::from_diag(&[1.0, 0.0]);
        let m = RealMatrix::from_diag(&[1.0, 0.0]);
        assert_eq!(count_negative_eigs_pencil(&a, &m), Err(Error::DegeneratePencil));
    }

    #[test]
    fn quadratic_with_infinite_chain() {
        // λ² diag(1,0) − λ diag(0,1) − [[0,1],[1,0]]: det = −λ³ − 1.
        let m = RealMatrix::from_diag(&[1.0, 0.0]);
        let g = RealMatrix::from_diag(&[0.0, 1.0]);
        let a = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let r = poly_eigen(&[a.scaled(-1.0), g.scaled(-1.0), m], 1.0).unwrap();
        assert_eq!(r.infinite, 1);
        assert_eq!(r.finite.len(), 3);
        for z in &r.finite {
            assert!((z.powi(3) + 1.0).norm() < 1e-10);
        }
    }
}
