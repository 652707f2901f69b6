//! Location and multiplicity checks on a single spectrum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{rank_with_tol, sym_eigenvalues, RealMatrix};
use crate::pencil::{nonreal_region, nonsimple_real_interval, PencilSpec, SpectrumResult, TypeStatus};
use crate::report::Check;

/// Relative tolerance for conjugate pairing.
pub const PAIR_TOL: f64 = 1e-7;
/// Relative tolerance below which an imaginary or real part counts as zero.
pub const AXIS_TOL: f64 = 1e-8;

pub(crate) fn rel(z: Complex64) -> f64 {
    z.norm().max(1.0)
}

pub(crate) fn is_real(z: Complex64) -> bool {
    z.im.abs() <= AXIS_TOL * rel(z)
}

pub(crate) fn is_imaginary(z: Complex64) -> bool {
    !is_real(z) && z.re.abs() <= AXIS_TOL * rel(z)
}

/// Multiset `{(λ, mult)}` closed under conjugation, multiplicities matching.
pub fn conjugation_witnesses(items: &[(Complex64, usize)], tol: f64) -> Vec<Complex64> {
    let mut out = Vec::new();
    for &(z, m) in items {
        if z.im == 0.0 {
            continue;
        }
        let partner =
            items.iter().filter(|(w, _)| (*w - z.conj()).norm() <= tol * rel(z)).map(|&(_, k)| k).sum::<usize>();
        if partner != m {
            out.push(z);
        }
    }
    out
}

/// Spectrum closed under complex conjugation.
pub fn check_symmetry(result: &SpectrumResult) -> Check {
    let items: Vec<(Complex64, usize)> = result.records.iter().map(|r| (r.lambda, r.alg_mult)).collect();
    let w = conjugation_witnesses(&items, PAIR_TOL);
    Check::from_witnesses("symmetry", format!("{} records, {} unmatched", items.len(), w.len()), w)
}

/// Nonreal eigenvalues in the closed right half-plane; strictly inside when `G ≻ 0`.
pub fn check_halfplane(spec: &PencilSpec, result: &SpectrumResult) -> Check {
    let strict = spec.g_min > 1e-10 * spec.g_norm.max(1.0) && result.eta > 0.0;
    let w: Vec<Complex64> = result
        .records
        .iter()
        .map(|r| r.lambda)
        .filter(|&z| !is_real(z))
        .filter(|&z| if strict { z.re <= 0.0 } else { z.re < -AXIS_TOL * rel(z) })
        .collect();
    let mode = if strict { "open" } else { "closed" };
    Check::from_witnesses("halfplane", format!("{mode} right half-plane, {} violations", w.len()), w)
}

/// Real spectrum when `A ⪰ 0`, and 0 excluded when `A ≻ 0`.
pub fn check_real_when_a_psd(spec: &PencilSpec, result: &SpectrumResult) -> Check {
    const NAME: &str = "real_when_a_psd";
    let eps = 1e-10 * spec.a_norm.max(1.0);
    if spec.a_min < -eps {
        return Check::not_applicable(NAME, format!("λ_min(A) = {:.3e} < 0", spec.a_min));
    }
    let mut w: Vec<Complex64> = result.records.iter().map(|r| r.lambda).filter(|&z| !is_real(z)).collect();
    let definite = spec.a_min > eps;
    if definite {
        w.extend(result.zero_record().map(|r| r.lambda));
    }
    let detail = if definite { "A positive definite: real and nonzero" } else { "A semidefinite: real" };
    Check::from_witnesses(NAME, detail, w)
}

/// Negative real eigenvalues are semisimple.
pub fn check_negative_semisimple(result: &SpectrumResult) -> Check {
    let w: Vec<Complex64> = result
        .records
        .iter()
        .filter(|r| is_real(r.lambda) && r.lambda.re < -AXIS_TOL && r.alg_mult != r.geo_mult)
        .map(|r| r.lambda)
        .collect();
    Check::from_witnesses("negative_semisimple", format!("{} negative records with a chain", w.len()), w)
}

/// Expected algebraic multiplicity of 0: `dim(ker A ∩ ker G) + dim ker A`.
/// Kernels are taken at the zero resolution of the spectrum: singular values
/// below `max(1e-9·max(‖A‖, ‖G‖, 1), zero_tol²·‖M‖)` count as zero.
pub fn expected_zero_multiplicity(spec: &PencilSpec, zero_tol: f64) -> Result<usize> {
    let p = spec.pencil();
    let mg = p.m.add(&p.g);
    let min = sym_eigenvalues(&mg)?[0];
    if min < 1e-8 {
        return Err(Error::HypothesisViolated(format!("λ_min(M+G) = {min:.3e} < 1e-8")));
    }
    let n = spec.n();
    let tol = (1e-9 * spec.a_norm.max(spec.g_norm).max(1.0)).max(zero_tol * zero_tol * spec.m_norm);
    let n_ker = n - rank_with_tol(&p.a, tol);
    let joint = n - rank_with_tol(&RealMatrix::vstack(&[&p.a, &p.g]), tol);
    Ok(joint + n_ker)
}

/// Algebraic multiplicity of 0 equals `dim(ker A ∩ ker G) + dim ker A`.
pub fn check_zero_multiplicity(spec: &PencilSpec, result: &SpectrumResult, zero_tol: f64) -> Result<Check> {
    let expect = expected_zero_multiplicity(spec, zero_tol)?;
    let found = result.zero_record().map_or(0, |r| r.alg_mult);
    Ok(Check::from_bool(
        "zero_multiplicity",
        found == expect,
        format!("expected {expect}, found {found}"),
        vec![Complex64::new(0.0, 0.0)],
    ))
}

/// Type-I eigenvalues lie on the axes and come in `±` pairs of equal multiplicity.
pub fn check_type1_axes(spec: &PencilSpec, spectra: &[SpectrumResult]) -> Result<Check> {
    if !spec.ker_ma_trivial {
        return Err(Error::PreconditionKerMA);
    }
    if !spec.g_is_rank_one() {
        return Err(Error::HypothesisViolated("G is not rank one".into()));
    }
    const TOL: f64 = 1e-6;
    let mut w = Vec::new();
    let mut total = 0;
    for s in spectra {
        let items: Vec<(Complex64, usize)> = s
            .records
            .iter()
            .filter(|r| r.status == TypeStatus::Classified && r.type1_mult > 0)
            .map(|r| (r.lambda, r.type1_mult))
            .collect();
        total += items.len();
        for &(z, m) in &items {
            let on_axis = z.im.abs() <= TOL * rel(z) || z.re.abs() <= TOL * rel(z);
            let mirror: usize = items.iter().filter(|(v, _)| (*v + z).norm() <= TOL * rel(z)).map(|&(_, k)| k).sum();
            if !on_axis || mirror != m {
                w.push(z);
            }
        }
    }
    Ok(Check::from_witnesses("type1_axes", format!("{total} type-I records over {} values of eta", spectra.len()), w))
}

/// Nonreal eigenvalues inside the rectangle bounded by `η‖G‖/(2m)` and `(β/m)^{1/2}`.
pub fn check_nonreal_region(spec: &PencilSpec, result: &SpectrumResult) -> Result<Check> {
    let rect = nonreal_region(spec, result.eta)?;
    let w: Vec<Complex64> =
        result.records.iter().map(|r| r.lambda).filter(|&z| !is_real(z) && !rect.contains(z, 1e-8 * rel(z))).collect();
    Ok(Check::from_witnesses(
        "nonreal_region",
        format!("Re in [0, {:.6e}], |Im| <= {:.6e}", rect.re_max, rect.im_max),
        w,
    ))
}

/// Real eigenvalues carrying associated vectors lie in `[0, ‖G‖/(2m)]`.
pub fn check_nonsimple_real(spec: &PencilSpec, result: &SpectrumResult) -> Result<Check> {
    let (lo, hi) = nonsimple_real_interval(spec)?;
    let w: Vec<Complex64> = result
        .records
        .iter()
        .filter(|r| r.alg_mult > r.geo_mult && is_real(r.lambda))
        .map(|r| r.lambda)
        .filter(|z| {
            let s = 1e-8 * rel(*z);
            z.re < lo - s || z.re > hi + s
        })
        .collect();
    Ok(Check::from_witnesses("nonsimple_real_interval", format!("interval [{lo}, {hi:.6e}]"), w))
}

/// Record-level bookkeeping: finite plus infinite count, multiplicity order, residuals.
pub fn check_bookkeeping(spec: &PencilSpec, result: &SpectrumResult) -> Vec<Check> {
    let n = spec.n();
    let finite: usize = result.records.iter().map(|r| r.alg_mult).sum();
    let count = Check::from_bool(
        "eigenvalue_count",
        finite + result.discarded_infinite == 2 * n,
        format!("{finite} finite + {} infinite, 2n = {}", result.discarded_infinite, 2 * n),
        result.records.iter().map(|r| r.lambda).collect(),
    );
    let bad: Vec<Complex64> = result
        .records
        .iter()
        .filter(|r| {
            r.geo_mult == 0
                || r.geo_mult > r.alg_mult
                || r.type1_mult + r.type2_mult != r.alg_mult
                || r.type1_mult > r.geo_mult
        })
        .map(|r| r.lambda)
        .collect();
    let mult =
        Check::from_witnesses("multiplicity_bookkeeping", "1 <= geo <= alg, type1 <= geo, type1 + type2 = alg", bad);
    let bound = |z: Complex64| 1e-7 * (1.0 + z.norm_sqr()) * spec.spec_norm.max(f64::MIN_POSITIVE);
    let worst = result.records.iter().map(|r| r.residual / bound(r.lambda)).fold(0.0, f64::max);
    let res: Vec<Complex64> =
        result.records.iter().filter(|r| !(r.residual <= bound(r.lambda))).map(|r| r.lambda).collect();
    let residual = Check::from_witnesses("residuals", format!("worst residual {worst:.3e} of the allowed bound"), res);
    vec![count, mult, residual]
}

/// No nonzero `λ` carries type-II multiplicity together with `−λ`.
pub fn check_type2_not_mirrored(result: &SpectrumResult) -> Check {
    let t2: Vec<Complex64> = result
        .records
        .iter()
        .filter(|r| r.status == TypeStatus::Classified && r.type2_mult > 0)
        .map(|r| r.lambda)
        .collect();
    let w: Vec<Complex64> =
        t2.iter().copied().filter(|&z| z.re < 0.0 && t2.iter().any(|&v| (v + z).norm() <= PAIR_TOL * rel(z))).collect();
    Check::from_witnesses("type2_not_mirrored", format!("{} type-II records", t2.len()), w)
}
