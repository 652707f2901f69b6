//! Full spectra with algebraic, geometric and type multiplicities.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::spec::PencilSpec;
use crate::error::{Error, Result};
use crate::linalg::{dot_c, poly_eigen, rank_with_tol, singular_values, vec_norm, BandLu, DenseMatrix};

/// Largest dimension for which ranks of `L(λ, η)` are taken by a dense SVD.
const DENSE_RANK_LIMIT: usize = 64;

/// How the type multiplicities of a record should be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeStatus {
    /// `type1 = dim(ker L ∩ ker G)` is the persistent part.
    Classified,
    /// Zero eigenvalue: counts are reported but carry no type assertion.
    ZeroEigenvalue,
    /// `ker M ∩ ker A ≠ {0}`: classification not available.
    KerMAPrecondition,
}

/// One eigenvalue cluster.
#[derive(Clone, Debug)]
pub struct EigenRecord {
    pub lambda: Complex64,
    pub alg_mult: usize,
    pub geo_mult: usize,
    pub type1_mult: usize,
    pub type2_mult: usize,
    /// Orthonormal basis of `ker L(λ, η)` (length `geo_mult`).
    pub vectors: Vec<Vec<Complex64>>,
    pub residual: f64,
    pub status: TypeStatus,
    /// Raw linearization eigenvalues merged into this record.
    pub members: Vec<Complex64>,
}

impl EigenRecord {
    pub fn is_real(&self, tol: f64) -> bool {
        self.lambda.im.abs() <= tol
    }
}

/// Spectrum of `L(·, η)`.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub eta: f64,
    /// Records sorted by (Re, Im).
    pub records: Vec<EigenRecord>,
    pub n_finite: usize,
    pub discarded_infinite: usize,
    pub shift: f64,
}

impl SpectrumResult {
    /// All eigenvalues repeated by algebraic multiplicity.
    pub fn values_with_multiplicity(&self) -> Vec<Complex64> {
        self.records.iter().flat_map(|r| std::iter::repeat(r.lambda).take(r.alg_mult)).collect()
    }

    /// Record matching `lambda` within the cluster tolerance.
    pub fn find(&self, lambda: Complex64, opts: &SpectrumOptions) -> Option<&EigenRecord> {
        self.records
            .iter()
            .filter(|r| {
                let d = (r.lambda - lambda).norm();
                d <= opts.cluster_rel * lambda.norm().max(1.0)
                    || (r.status == TypeStatus::ZeroEigenvalue && lambda.norm() <= opts.zero_tol)
            })
            .min_by(|a, b| (a.lambda - lambda).norm().total_cmp(&(b.lambda - lambda).norm()))
    }

    /// The record flagged as the zero eigenvalue, if present.
    pub fn zero_record(&self) -> Option<&EigenRecord> {
        self.records.iter().find(|r| r.status == TypeStatus::ZeroEigenvalue)
    }
}

/// Numerical resolution of [`spectrum_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumOptions {
    /// Linearization eigenvalues with `|λ| ≤ zero_tol` form the zero cluster.
    pub zero_tol: f64,
    /// Single-linkage merge gap relative to `max(1, |λ|)`.
    pub cluster_rel: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { zero_tol: 1e-6, cluster_rel: 1e-6 }
    }
}

impl SpectrumOptions {
    /// Options with a coarser zero resolution, for discretized problems whose
    /// multiple zero splits at the discretization scale.
    pub fn with_zero_tol(zero_tol: f64) -> Self {
        Self { zero_tol, ..Self::default() }
    }
}

/// Spectrum with default options.
pub fn spectrum(spec: &PencilSpec, eta: f64) -> Result<SpectrumResult> {
    spectrum_with(spec, eta, &SpectrumOptions::default())
}

/// Finite eigenvalues of `L(·, η)` by shifted-reversal linearization, merged
/// into clusters and classified.
pub fn spectrum_with(spec: &PencilSpec, eta: f64, opts: &SpectrumOptions) -> Result<SpectrumResult> {
    if !eta.is_finite() || !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidInput(format!("eta = {eta} outside [0, 1]")));
    }
    let coeffs = [spec.a().scaled(-1.0), spec.g().scaled(-eta), spec.m().clone()];
    let pe = poly_eigen(&coeffs, spec.spec_norm)?;
    let clusters = cluster(&pe.finite, opts);
    let mut records: Vec<EigenRecord> =
        clusters.into_iter().map(|members| build_record(spec, eta, members, opts)).collect();
    records.sort_by(|a, b| a.lambda.re.total_cmp(&b.lambda.re).then(a.lambda.im.total_cmp(&b.lambda.im)));
    Ok(SpectrumResult { eta, n_finite: pe.finite.len(), discarded_infinite: pe.infinite, shift: pe.shift, records })
}

/// Single-linkage clusters of `values`; everything within `zero_tol` of the
/// origin joins one cluster.
fn cluster(values: &[Complex64], opts: &SpectrumOptions) -> Vec<Vec<Complex64>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut first_zero: Option<usize> = None;
    for i in 0..n {
        if values[i].norm() <= opts.zero_tol {
            match first_zero {
                None => first_zero = Some(i),
                Some(z) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, z));
                    parent[a] = b;
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = values[i].norm().max(values[j].norm()).max(1.0);
            if (values[i] - values[j]).norm() <= opts.cluster_rel * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(v),
            None => groups.push((r, vec![v])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

fn mean(values: &[Complex64]) -> Complex64 {
    values.iter().sum::<Complex64>() / values.len() as f64
}

/// Rank tolerance for `L(λ, η)`.
fn kernel_tol(spec: &PencilSpec, lambda: Complex64, eta: f64) -> f64 {
    1e-8 * spec.scale_at(lambda, eta).max(f64::MIN_POSITIVE)
}

/// Orthonormal `p`-dimensional approximation of the smallest right singular
/// subspace of `L(λ, η)` by inverse subspace iteration on `LᴴL`, columns
/// ordered from the smallest singular direction. Returns the basis and the
/// ascending singular values of `L V`.
pub fn kernel_probe(spec: &PencilSpec, lambda: Complex64, eta: f64, p: usize) -> (Vec<Vec<Complex64>>, Vec<f64>) {
    let n = spec.n();
    let p = p.clamp(1, n);
    let floor = f64::EPSILON * spec.scale_at(lambda, eta).max(1.0);
    let w = spec.band;
    let lu = BandLu::new(n, w, w, |i, j| spec.entry(lambda, eta, i, j), floor);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b65726e);
    let mut v: Vec<Vec<Complex64>> = (0..p)
        .map(|_| (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect();
    orthonormalize(&mut v, &mut rng);
    for _ in 0..4 {
        for col in v.iter_mut() {
            // L is complex symmetric, so Lᴴ y = x  ⇔  L conj(y) = conj(x).
            let xc: Vec<Complex64> = col.iter().map(|z| z.conj()).collect();
            let mut y: Vec<Complex64> = lu.solve_vec(&xc).iter().map(|z| z.conj()).collect();
            let ny = vec_norm(&y);
            if ny > 0.0 && ny.is_finite() {
                y.iter_mut().for_each(|z| *z /= ny);
            }
            *col = lu.solve_vec(&y);
        }
        orthonormalize(&mut v, &mut rng);
    }
    let lv: Vec<Vec<Complex64>> = v.iter().map(|c| spec.apply(lambda, eta, c)).collect();
    let wmat = DenseMatrix::from_fn(n, p, |i, j| lv[j][i]);
    let mut sv = singular_values(&wmat);
    sv.reverse();
    (v, sv)
}

/// Modified Gram–Schmidt, twice, replacing collapsed columns by fresh random
/// directions.
fn orthonormalize(v: &mut [Vec<Complex64>], rng: &mut ChaCha8Rng) {
    for k in 0..v.len() {
        for _attempt in 0..3 {
            for _pass in 0..2 {
                for j in 0..k {
                    let d = dot_c(&v[j], &v[k]);
                    let (head, tail) = v.split_at_mut(k);
                    for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                        *x -= d * y;
                    }
                }
            }
            let nv = vec_norm(&v[k]);
            if nv > 1e-300 && nv.is_finite() {
                v[k].iter_mut().for_each(|z| *z /= nv);
                break;
            }
            v[k] = (0..v[k].len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        }
    }
}

/// Orthonormal basis of the span of `vs`, dropping directions below `tol`.
fn span_basis(vs: &[Vec<Complex64>], tol: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vs {
        let mut x = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let d = dot_c(b, &x);
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= d * bi;
                }
            }
        }
        let nx = vec_norm(&x);
        if nx > tol * vec_norm(v).max(f64::MIN_POSITIVE) {
            basis.push(x.iter().map(|z| z / nx).collect());
        }
    }
    basis
}

fn g_apply(spec: &PencilSpec, v: &[Complex64]) -> Vec<Complex64> {
    let n = spec.n();
    if let Some(r1) = spec.rank_one() {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[r1.e_index] = v[r1.e_index] * r1.b;
        return out;
    }
    let g = spec.g();
    let w = spec.band;
    (0..n)
        .map(|i| {
            let mut s = Complex64::new(0.0, 0.0);
            for j in i.saturating_sub(w)..=(i + w).min(n - 1) {
                s += v[j] * g[(i, j)];
            }
            s
        })
        .collect()
}

/// Number of basis vectors annihilated by `G`: `dim(ker L ∩ ker G)` given an
/// orthonormal basis of `ker L`.
fn g_kernel_dim(spec: &PencilSpec, basis: &[Vec<Complex64>]) -> usize {
    if basis.is_empty() {
        return 0;
    }
    if spec.g_norm == 0.0 {
        return basis.len();
    }
    let n = spec.n();
    let gv: Vec<Vec<Complex64>> = basis.iter().map(|b| g_apply(spec, b)).collect();
    let mat = DenseMatrix::from_fn(n, basis.len(), |i, j| gv[j][i]);
    basis.len() - rank_with_tol(&mat, 1e-6 * spec.g_norm)
}

fn build_record(spec: &PencilSpec, eta: f64, members: Vec<Complex64>, opts: &SpectrumOptions) -> EigenRecord {
    let alg = members.len();
    let mut lambda = mean(&members);
    if lambda.im.abs() <= 1e-14 * lambda.norm().max(1.0) {
        lambda.im = 0.0;
    }
    let is_zero = members.iter().any(|m| m.norm() <= opts.zero_tol);
    let spread = members.iter().map(|m| (m - lambda).norm()).fold(0.0, f64::max);
    let (basis, residual) = if spread > opts.cluster_rel * lambda.norm().max(1.0) {
        // Coarse cluster: span of per-member eigenvectors.
        let mut distinct: Vec<Complex64> = Vec::new();
        for &m in &members {
            if !distinct.iter().any(|d| (d - m).norm() <= opts.cluster_rel * m.norm().max(1.0)) {
                distinct.push(m);
            }
        }
        let mut vs = Vec::new();
        let mut res: f64 = 0.0;
        for &m in &distinct {
            let (v, _) = kernel_probe(spec, m, eta, 1);
            let r = vec_norm(&spec.apply(m, eta, &v[0]));
            res = res.max(r);
            vs.push(v[0].clone());
        }
        let mut basis = span_basis(&vs, 1e-6);
        basis.truncate(alg);
        (basis, res)
    } else {
        let (v, sv) = kernel_probe(spec, lambda, eta, alg);
        let tol = kernel_tol(spec, lambda, eta);
        let geo = if spec.n() <= DENSE_RANK_LIMIT {
            spec.n() - rank_with_tol(&spec.evaluate(lambda, eta), tol)
        } else {
            sv.iter().filter(|&&s| s <= tol).count()
        };
        let geo = geo.clamp(1, alg);
        let basis: Vec<Vec<Complex64>> = v.into_iter().take(geo).collect();
        let res = basis.iter().map(|b| vec_norm(&spec.apply(lambda, eta, b))).fold(0.0, f64::max);
        (basis, res)
    };
    let geo = basis.len().max(1);
    let (type1, status) = match (is_zero, spec.ker_ma_trivial) {
        (true, true) => (g_kernel_dim(spec, &basis).min(alg), TypeStatus::ZeroEigenvalue),
        (true, false) => (0, TypeStatus::ZeroEigenvalue),
        (false, true) => (g_kernel_dim(spec, &basis).min(alg), TypeStatus::Classified),
        (false, false) => (0, TypeStatus::KerMAPrecondition),
    };
    EigenRecord {
        lambda,
        alg_mult: alg,
        geo_mult: geo,
        type1_mult: type1,
        type2_mult: alg - type1,
        vectors: basis,
        residual,
        status,
        members,
    }
}

/// `n − rank L(λ, η)` with the tolerance `1e-8 · (|λ|²‖M‖ + η|λ|‖G‖ + ‖A‖)`.
pub fn geometric_multiplicity(spec: &PencilSpec, lambda: Complex64, eta: f64) -> usize {
    let tol = kernel_tol(spec, lambda, eta);
    if spec.n() <= DENSE_RANK_LIMIT {
        spec.n() - rank_with_tol(&spec.evaluate(lambda, eta), tol)
    } else {
        let (_, sv) = kernel_probe(spec, lambda, eta, spec.n().min(8));
        sv.iter().filter(|&&s| s <= tol).count()
    }
}

/// Whether the eigenvalue `λ` of `L(·, η)` is semisimple.
pub fn is_semisimple(spec: &PencilSpec, lambda: Complex64, eta: f64) -> Result<bool> {
    is_semisimple_with(spec, lambda, eta, &SpectrumOptions::default())
}

pub fn is_semisimple_with(spec: &PencilSpec, lambda: Complex64, eta: f64, opts: &SpectrumOptions) -> Result<bool> {
    let s = spectrum_with(spec, eta, opts)?;
    let r = s.find(lambda, opts).ok_or_else(|| Error::NotAnEigenvalue(format!("{lambda}")))?;
    Ok(r.alg_mult == r.geo_mult)
}

/// `(type1, type2)` multiplicities of a record: `type1 = dim(ker L ∩ ker G)`.
pub fn classify_type(spec: &PencilSpec, record: &EigenRecord) -> Result<(usize, usize)> {
    if !spec.ker_ma_trivial {
        return Err(Error::PreconditionKerMA);
    }
    let t1 = g_kernel_dim(spec, &record.vectors).min(record.alg_mult);
    Ok((t1, record.alg_mult - t1))
}
