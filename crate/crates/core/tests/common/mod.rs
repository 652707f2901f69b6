//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64;
use qpencil::linalg::RealMatrix;
use qpencil::pencil::{Pencil, PencilSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PencilSpec {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    PencilSpec::new(qpencil::io::parse_pencil(&text).unwrap()).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    random_matrix(rng, n, n).symmetrized()
}

/// `BᵀB` with `B` of `rank` rows, plus `shift · I`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize, rank: usize, shift: f64) -> RealMatrix {
    let b = random_matrix(rng, rank, n);
    let mut m = b.transpose().matmul(&b).symmetrized();
    for i in 0..n {
        m[(i, i)] += shift;
    }
    m
}

/// Condition-I pencil with rank-one `G`. `M` is singular in roughly half the
/// draws, with exact zero rows so infinite eigenvalues are exact.
pub fn random_condition_i(rng: &mut ChaCha8Rng, n: usize) -> Pencil {
    let singular = n > 1 && rng.gen_bool(0.5);
    let m = if singular {
        let k = rng.gen_range(1..n);
        let mut d: Vec<f64> = (0..n).map(|i| if i < k { rng.gen_range(0.5..2.0) } else { 0.0 }).collect();
        d.rotate_left(rng.gen_range(0..n));
        RealMatrix::from_diag(&d)
    } else {
        random_psd(rng, n, n, 0.2)
    };
    let b = rng.gen_range(0.2..2.0);
    let e = rng.gen_range(0..n);
    let a = random_symmetric(rng, n).scaled(2.0);
    Pencil::with_rank_one(m, b, e, a).unwrap()
}

/// `M ≫ 0`, `G ≫ 0`, `A` symmetric indefinite.
pub fn random_definite(rng: &mut ChaCha8Rng, n: usize) -> Pencil {
    let m = random_psd(rng, n, n, 0.3);
    let g = random_psd(rng, n, n, 0.3);
    let a = random_symmetric(rng, n).scaled(3.0);
    Pencil::new(m, g, a).unwrap()
}

/// Orthonormal columns by modified Gram–Schmidt.
fn orthonormalize(vs: &mut [Vec<f64>]) {
    for i in 0..vs.len() {
        for j in 0..i {
            let d: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
            let vj = vs[j].clone();
            vs[i].iter_mut().zip(vj).for_each(|(a, b)| *a -= d * b);
        }
        let nrm = vs[i].iter().map(|a| a * a).sum::<f64>().sqrt();
        vs[i].iter_mut().for_each(|a| *a /= nrm);
    }
}

/// Pencil with `M ≫ 0`, `G = b e eᵀ` and a prescribed kernel of `A`, together
/// with the zero multiplicity `dim(ker A ∩ ker G) + dim ker A` known by
/// construction.
pub fn kernel_engineered(rng: &mut ChaCha8Rng) -> (Pencil, usize) {
    let n = rng.gen_range(3..=8);
    let k = rng.gen_range(1..=(n - 1).min(3));
    let e = rng.gen_range(0..n);
    let inside_ker_g = rng.gen_bool(0.5);
    let mut basis: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    if inside_ker_g {
        basis.iter_mut().for_each(|v| v[e] = 0.0);
    }
    orthonormalize(&mut basis);
    let mut proj = RealMatrix::identity(n);
    for v in &basis {
        for i in 0..n {
            for j in 0..n {
                proj[(i, j)] -= v[i] * v[j];
            }
        }
    }
    let s = random_symmetric(rng, n).scaled(2.0);
    let a = proj.matmul(&s).matmul(&proj).symmetrized();
    let m = random_psd(rng, n, n, 0.5);
    let p = Pencil::with_rank_one(m, rng.gen_range(0.5..2.0), e, a).unwrap();
    let joint = if inside_ker_g { k } else { k - 1 };
    (p, joint + k)
}

// ---------------------------------------------------------------------------
// Determinant polynomial oracle
// ---------------------------------------------------------------------------

type Poly = Vec<Complex64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &mut Poly, b: &Poly, sign: f64) {
    if a.len() < b.len() {
        a.resize(b.len(), Complex64::new(0.0, 0.0));
    }
    a.iter_mut().zip(b).for_each(|(x, y)| *x += sign * y);
}

fn cofactor_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = vec![Complex64::new(0.0, 0.0)];
    for j in 0..n {
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = poly_mul(&m[0][j], &cofactor_det(&minor));
        poly_add(&mut det, &term, if j % 2 == 0 { 1.0 } else { -1.0 });
    }
    det
}

/// Coefficients (ascending) of `det(λ²M − ληG − A)` by cofactor expansion.
pub fn det_polynomial(p: &Pencil, eta: f64) -> Vec<Complex64> {
    let n = p.n();
    let entries: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    vec![
                        Complex64::new(-p.a[(i, j)], 0.0),
                        Complex64::new(-eta * p.g[(i, j)], 0.0),
                        Complex64::new(p.m[(i, j)], 0.0),
                    ]
                })
                .collect()
        })
        .collect();
    cofactor_det(&entries)
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        d = d * z + p;
        p = p * z + a;
    }
    (p, d)
}

/// Roots by Aberth–Ehrlich after dropping leading coefficients below
/// `1e-10 · max|c|`. Exact trailing zeros are returned as exact roots.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() <= 1e-10 * scale {
        c.pop();
    }
    let mut roots = Vec::new();
    while c.len() > 1 && c[0].norm() == 0.0 {
        c.remove(0);
        roots.push(Complex64::new(0.0, 0.0));
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return roots;
    }
    let lead = c[deg];
    let radius = 1.0 + c[..deg].iter().map(|x| (x / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, d) = horner(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / d;
            let repulsion: Complex64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * repulsion);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    roots.extend(z);
    roots
}

/// Minimum total distance over all bijections `a → b` (bitmask DP).
pub fn optimal_pairing(a: &[Complex64], b: &[Complex64]) -> Option<Vec<(Complex64, Complex64)>> {
    let n = a.len();
    if n != b.len() || n > 16 {
        return None;
    }
    let full = 1usize << n;
    let mut best = vec![f64::INFINITY; full];
    let mut choice = vec![usize::MAX; full];
    best[0] = 0.0;
    for mask in 0..full {
        if !best[mask].is_finite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        for j in (0..n).filter(|&j| mask & (1 << j) == 0) {
            let cost = best[mask] + (a[i] - b[j]).norm();
            let next = mask | (1 << j);
            if cost < best[next] {
                best[next] = cost;
                choice[next] = j;
            }
        }
    }
    let mut out = vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); n];
    let mut mask = full - 1;
    for i in (0..n).rev() {
        let j = choice[mask];
        out[i] = (a[i], b[j]);
        mask &= !(1 << j);
    }
    Some(out)
}

/// Smooth random potential sampled at the `n + 1` grid nodes of `(0, a]`.
pub fn random_potential(rng: &mut ChaCha8Rng, a: f64, n: usize) -> Vec<f64> {
    let c: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let h = a / (n + 1) as f64;
    (1..=n + 1)
        .map(|i| {
            let x = i as f64 * h / a;
            c[0] + c[1] * (std::f64::consts::PI * x).sin()
                + c[2] * (2.0 * std::f64::consts::PI * x).cos()
                + c[3] * x * x
        })
        .collect()
}
