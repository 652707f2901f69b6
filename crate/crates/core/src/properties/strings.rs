//! Check bundles for the discretized string problems.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::counting::{check_type2_counts, CountOptions, TypeTwoCounts};
use super::lemmas::{check_halfplane, check_symmetry, is_imaginary, is_real};
use crate::error::{Error, Result};
use crate::pencil::{spectrum_with, PencilSpec, SpectrumOptions, SpectrumResult, TypeStatus};
use crate::report::{Check, VerificationReport};
use crate::sturm::{discretize, type1_lambdas, Potential, SlProblem, Variant};

/// Absolute tolerance when comparing discrete eigenvalues with closed forms.
pub const CLOSED_FORM_TOL: f64 = 2e-2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StringOptions {
    /// Interval parity is asserted on this many intervals.
    pub max_intervals: Option<usize>,
    /// Closed-form comparisons cover `|λ| ≤ window`.
    pub window: f64,
}

impl Default for StringOptions {
    fn default() -> Self {
        Self { max_intervals: Some(5), window: 10.0 }
    }
}

/// Whether `λ = 0` is an eigenvalue of the continuous problem, decided in
/// closed form for constant potentials.
pub fn continuum_zero(p: &SlProblem) -> bool {
    let Some(q) = closed_form_potential(p) else { return false };
    match p.variant {
        Variant::Double => integer_mode_count(q, p.a).is_ok(),
        Variant::Single => {
            let x = if q > 0.0 { q.sqrt() * p.a / PI - 0.5 } else { -1.0 };
            x >= 0.0 && (x - x.round()).abs() <= 1e-9
        }
    }
}

/// Zero resolution for a discretized string. A zero of the continuous problem
/// splits by `O(h)` and is resolved at `2h`; otherwise the default applies.
pub fn string_zero_tol(p: &SlProblem) -> f64 {
    if continuum_zero(p) {
        2.0 * p.h()
    } else {
        SpectrumOptions::default().zero_tol
    }
}

pub fn string_spectrum_options(p: &SlProblem) -> SpectrumOptions {
    SpectrumOptions::with_zero_tol(string_zero_tol(p))
}

/// Discretization, spectrum at `η = 1` and string-specific checks.
#[derive(Clone, Debug)]
pub struct StringVerification {
    pub spec: PencilSpec,
    pub spectrum: SpectrumResult,
    pub counts: Option<TypeTwoCounts>,
    pub report: VerificationReport,
}

/// Potential in the `√(λ² + q)` convention when it is constant.
pub fn closed_form_potential(p: &SlProblem) -> Option<f64> {
    match p.q {
        Potential::Const { value } => Some(if p.paper_sign_convention { value } else { -value }),
        Potential::Sampled { .. } => None,
    }
}

/// `N = √q·a/π` when it is a positive integer within `1e-9`.
pub fn integer_mode_count(q: f64, a: f64) -> Result<usize> {
    let x = if q > 0.0 { q.sqrt() * a / PI } else { 0.0 };
    let k = x.round();
    if q > 0.0 && k >= 1.0 && (x - k).abs() <= 1e-9 {
        Ok(k as usize)
    } else {
        Err(Error::PreconditionInteger(x))
    }
}

pub fn verify_string(p: &SlProblem, opts: &StringOptions) -> Result<StringVerification> {
    let spec = discretize(p)?;
    let sopts = string_spectrum_options(p);
    let result = spectrum_with(&spec, 1.0, &sopts)?;
    let copts = CountOptions { max_intervals: opts.max_intervals, zero_tol: sopts.zero_tol };
    let mut report = VerificationReport::default();
    report.push(check_symmetry(&result));
    report.push(check_halfplane(&spec, &result));
    let (bundle, counts) = check_type2_counts(&spec, &result, &copts);
    report.extend(bundle);
    match p.variant {
        Variant::Single => report.push(check_single_type2_only(&result)),
        Variant::Double => report.extend(double_closed_form_checks(p, &result, counts.as_ref(), opts)),
    }
    Ok(StringVerification { spec, spectrum: result, counts, report })
}

/// Every nonzero eigenvalue of the single string is of type II.
pub fn check_single_type2_only(result: &SpectrumResult) -> Check {
    let w: Vec<Complex64> = result
        .records
        .iter()
        .filter(|r| r.status == TypeStatus::Classified && r.type1_mult > 0)
        .map(|r| r.lambda)
        .collect();
    Check::from_witnesses("single_string_type2_only", format!("{} records", result.records.len()), w)
}

pub const DOUBLE_CHECKS: [&str; 4] =
    ["double_string_family_type1", "double_string_zero_jordan", "double_string_offaxis_count", "double_string_counts"];

fn double_closed_form_checks(
    p: &SlProblem,
    result: &SpectrumResult,
    counts: Option<&TypeTwoCounts>,
    opts: &StringOptions,
) -> Vec<Check> {
    let Some(q) = closed_form_potential(p) else {
        return DOUBLE_CHECKS.iter().map(|n| Check::not_applicable(n, "sampled potential")).collect();
    };
    let a = p.a;
    let mut out = vec![check_family(result, q, a, opts.window)];
    let big_n = match integer_mode_count(q, a) {
        Ok(k) => k,
        Err(e) => {
            out.extend(DOUBLE_CHECKS[1..].iter().map(|n| Check::not_applicable(n, e.to_string())));
            return out;
        }
    };
    let zero = result.zero_record();
    let (alg, geo) = zero.map_or((0, 0), |r| (r.alg_mult, r.geo_mult));
    out.push(Check::from_bool(
        DOUBLE_CHECKS[1],
        alg == 2 && geo == 1,
        format!("zero: alg {alg}, geo {geo}; expected alg 2, geo 1"),
        vec![Complex64::new(0.0, 0.0)],
    ));
    let off: Vec<Complex64> = result
        .records
        .iter()
        .filter(|r| !is_real(r.lambda) && !is_imaginary(r.lambda) && r.status != TypeStatus::ZeroEigenvalue)
        .flat_map(|r| std::iter::repeat(r.lambda).take(r.alg_mult))
        .collect();
    out.push(Check::from_bool(
        DOUBLE_CHECKS[2],
        off.len() == 2 * big_n && off.iter().all(|z| z.re > 0.0),
        format!("{} off-axis nonreal eigenvalues, expected {} in Re > 0", off.len(), 2 * big_n),
        off.clone(),
    ));
    let expect = (big_n - 1, big_n, 0i64, 2 * big_n - 1);
    match counts {
        Some(c) => {
            let got = (
                c.imag_type1_pairs,
                c.nonreal_type2_pairs,
                c.interval_excess().unwrap_or(i64::MIN),
                c.negative_linear_count,
            );
            let mut w: Vec<Complex64> = c.negative_moduli.iter().map(|&r| Complex64::new(-r, 0.0)).collect();
            w.extend(off);
            out.push(Check::from_bool(
                DOUBLE_CHECKS[3],
                got == expect && c.balance_holds(),
                format!(
                    "imaginary type-I pairs {}, nonreal type-II pairs {}, interval excess {}, negative linear count {}; expected {:?}",
                    got.0, got.1, got.2, got.3, expect
                ),
                w,
            ));
        }
        None => out.push(Check::not_applicable(DOUBLE_CHECKS[3], "counting gates not met")),
    }
    out
}

/// The persistent family `±√((πj/a)² − q)` inside `|λ| ≤ window` is found and
/// marked type I; every other eigenvalue there is type II.
fn check_family(result: &SpectrumResult, q: f64, a: f64, window: f64) -> Check {
    let j_max = ((a / PI) * (window * window + q.max(0.0)).sqrt()).ceil() as usize + 1;
    let family: Vec<Complex64> = type1_lambdas(q, a, j_max)
        .into_iter()
        .filter(|e| !e.collapsed_zero && e.lambda.norm() <= window)
        .map(|e| e.lambda)
        .collect();
    let near = |z: Complex64, w: Complex64| (z - w).norm() <= CLOSED_FORM_TOL;
    let classified: Vec<_> = result
        .records
        .iter()
        .filter(|r| r.status == TypeStatus::Classified && r.lambda.norm() <= window + CLOSED_FORM_TOL)
        .collect();
    let mut w: Vec<Complex64> = family
        .iter()
        .copied()
        .filter(|&f| !classified.iter().any(|r| near(r.lambda, f) && r.type1_mult >= 1))
        .collect();
    w.extend(
        classified.iter().filter(|r| r.type1_mult > 0 && !family.iter().any(|&f| near(r.lambda, f))).map(|r| r.lambda),
    );
    Check::from_witnesses(
        DOUBLE_CHECKS[0],
        format!("{} family members with |λ| <= {window}, {} classified records", family.len(), classified.len()),
        w,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_precondition() {
        assert_eq!(integer_mode_count(4.0, PI).unwrap(), 2);
        assert_eq!(integer_mode_count(1.0, PI).unwrap(), 1);
        assert!(matches!(integer_mode_count(2.0, PI), Err(Error::PreconditionInteger(_))));
        assert!(integer_mode_count(-4.0, PI).is_err());
    }

    #[test]
    fn continuum_zero_matches_shooting() {
        use crate::sturm::shoot_charfn;
        let zero = num_complex::Complex64::new(0.0, 0.0);
        for (q, expect) in [(0.25, true), (2.25, true), (1.0, false), (4.0, false)] {
            let p = SlProblem::new(Variant::Single, Potential::Const { value: q }, PI, 1.0, 200).with_paper_sign(true);
            assert_eq!(continuum_zero(&p), expect, "q = {q}");
            assert_eq!(shoot_charfn(zero, &p).norm() < 1e-6, expect, "q = {q}");
        }
        let d = SlProblem::new(Variant::Double, Potential::Const { value: 4.0 }, PI, 1.0, 50);
        assert!(continuum_zero(&d.clone().with_paper_sign(true)));
        assert!(!continuum_zero(&d));
        assert_eq!(string_zero_tol(&d), SpectrumOptions::default().zero_tol);
    }

    #[test]
    fn small_double_string_bundle() {
        let p = SlProblem::new(Variant::Double, Potential::Const { value: 4.0 }, PI, 1.0, 300).with_paper_sign(true);
        let v = verify_string(&p, &StringOptions::default()).unwrap();
        assert!(!v.report.has_failure(), "{:#?}", v.report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn single_string_constant_potential() {
        let p = SlProblem::new(Variant::Single, Potential::Const { value: 4.0 }, PI, 1.0, 100);
        let v = verify_string(&p, &StringOptions::default()).unwrap();
        assert!(!v.report.has_failure(), "{:#?}", v.report.failures().collect::<Vec<_>>());
        let c = v.counts.unwrap();
        assert_eq!((c.negative_linear_count, c.nonreal_type2_pairs, c.imag_type1_pairs), (0, 0, 0));
        assert_eq!(c.interval_excess(), Some(0));
    }
}
