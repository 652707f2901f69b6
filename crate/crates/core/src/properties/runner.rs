//! Runs every applicable check on a pencil or a string problem.

use num_complex::Complex64;

use super::counting::{check_type2_counts, CountOptions};
use super::lemmas::*;
use super::strings::{verify_string, StringOptions, StringVerification};
use crate::error::Error;
use crate::homotopy::{count_identity, pair_spectrum};
use crate::pencil::{spectrum_with, validate_condition_i, Pencil, PencilSpec, SpectrumOptions, SpectrumResult};
use crate::report::{Check, VerificationReport};
use crate::sturm::SlProblem;

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub eta: f64,
    pub spectrum: SpectrumOptions,
    /// Extra values of `η` at which type-I symmetry is checked.
    pub type1_etas: Vec<f64>,
    pub max_intervals: Option<usize>,
    /// Multiplicity-sensitive checks only see records with `|λ| ≤ band`.
    pub band: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { eta: 1.0, spectrum: SpectrumOptions::default(), type1_etas: vec![0.5], max_intervals: None, band: None }
    }
}

fn gated(name: &str, r: crate::Result<Check>) -> Check {
    match r {
        Ok(c) => c,
        Err(e) => Check::not_applicable(name, e.to_string()),
    }
}

/// Condition-I validation, then every check on the spectrum at `opts.eta`.
/// A failed validation is reported and ends the run.
pub fn run_all(pencil: &Pencil, opts: &RunOptions) -> VerificationReport {
    let mut report = VerificationReport::default();
    let cond = match validate_condition_i(pencil) {
        Ok(c) => c,
        Err(e) => {
            report.push(Check::fail("condition_i", e.to_string(), Vec::new()));
            return report;
        }
    };
    if !cond.all_pass() {
        let msg: Vec<String> = cond.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        report.push(Check::fail("condition_i", msg.join("; "), Vec::new()));
        return report;
    }
    report.push(Check::pass("condition_i", format!("{} clauses", cond.clauses.len())));
    let spec = match PencilSpec::new(pencil.clone()) {
        Ok(s) => s,
        Err(e) => {
            report.push(Check::fail("condition_i", e.to_string(), Vec::new()));
            return report;
        }
    };
    match spectrum_with(&spec, opts.eta, &opts.spectrum) {
        Ok(result) => report.extend(spectrum_checks(&spec, &result, opts)),
        Err(e) => report.push(Check::fail("spectrum", e.to_string(), Vec::new())),
    }
    report
}

/// All single-spectrum checks for a validated `spec`.
pub fn spectrum_checks(spec: &PencilSpec, result: &SpectrumResult, opts: &RunOptions) -> Vec<Check> {
    let mut out = check_bookkeeping(spec, result);
    out.push(check_symmetry(result));
    out.push(check_halfplane(spec, result));
    out.push(check_real_when_a_psd(spec, result));
    let banded = opts.band.map(|b| within_band(result, b));
    let resolved = banded.as_ref().unwrap_or(result);
    let note = |c: Check| match opts.band {
        Some(b) => Check { details: format!("{} (|λ| <= {b:.6e})", c.details), ..c },
        None => c,
    };
    out.push(note(check_negative_semisimple(resolved)));
    out.push(gated("zero_multiplicity", check_zero_multiplicity(spec, result, opts.spectrum.zero_tol)));
    out.push(gated("nonreal_region", check_nonreal_region(spec, result)));
    out.push(note(gated("nonsimple_real_interval", check_nonsimple_real(spec, resolved))));

    let mut spectra = vec![result.clone()];
    for &eta in &opts.type1_etas {
        if (eta - result.eta).abs() > 0.0 && eta > 0.0 {
            match spectrum_with(spec, eta, &opts.spectrum) {
                Ok(s) => spectra.push(s),
                Err(e) => out.push(Check::fail("type1_axes", format!("spectrum at eta = {eta}: {e}"), Vec::new())),
            }
        }
    }
    out.push(gated("type1_axes", check_type1_axes(spec, &spectra)));
    out.push(if spec.ker_ma_trivial && spec.g_is_rank_one() {
        note(check_type2_not_mirrored(resolved))
    } else {
        Check::not_applicable("type2_not_mirrored", "needs ker M ∩ ker A = {0} and rank-one G")
    });

    out.extend(pairing_checks(spec, result));

    let copts = CountOptions { max_intervals: opts.max_intervals, zero_tol: opts.spectrum.zero_tol };
    out.extend(check_type2_counts(spec, result, &copts).0);
    out
}

fn within_band(result: &SpectrumResult, band: f64) -> SpectrumResult {
    SpectrumResult {
        records: result.records.iter().filter(|r| r.lambda.norm() <= band).cloned().collect(),
        ..result.clone()
    }
}

fn definite(spec: &PencilSpec) -> bool {
    spec.m_mass > 1e-10 * spec.m_norm.max(1.0) && spec.g_min > 1e-10 * spec.g_norm.max(1.0)
}

/// Pairing of negative with positive eigenvalues and the unpaired-count
/// identity, both for `M ≫ 0`, `G ≫ 0`.
pub fn pairing_checks(spec: &PencilSpec, result: &SpectrumResult) -> Vec<Check> {
    if !definite(spec) {
        let why = "needs M and G positive definite";
        return vec![Check::not_applicable("pairing", why), Check::not_applicable("unpaired_count_identity", why)];
    }
    let pr = pair_spectrum(result);
    let pairing = Check::from_witnesses(
        "pairing",
        format!("{} pairs, {} unpaired positives", pr.pairs.len(), pr.unpaired_positives.len()),
        pr.failures.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
    );
    let identity = match count_identity(spec) {
        Ok(ci) => Check::from_bool(
            "unpaired_count_identity",
            ci.identity_holds,
            format!(
                "unpaired {} vs 2·{} − {} (negative linear count, nonreal count)",
                ci.unpaired_positives, ci.kappa_a, ci.kappa_c
            ),
            ci.unpaired.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        ),
        Err(e @ Error::HypothesisViolated(_)) => Check::not_applicable("unpaired_count_identity", e.to_string()),
        Err(e) => Check::fail("unpaired_count_identity", e.to_string(), Vec::new()),
    };
    vec![pairing, identity]
}

/// Half the largest frequency `2/h` of the discrete string; eigenvalues crowd
/// near the cutoff closer than the cluster tolerance.
pub fn resolved_band(p: &SlProblem) -> f64 {
    1.0 / p.h()
}

/// Checks for a discretized string: the generic spectrum checks merged with
/// the string bundle. The verification carries the counts.
pub fn run_string(p: &SlProblem, opts: &StringOptions) -> crate::Result<(VerificationReport, StringVerification)> {
    let v = verify_string(p, opts)?;
    let mut report = VerificationReport::default();
    report.push(Check::pass("condition_i", format!("discretized {:?} string, dimension {}", p.variant, v.spec.n())));
    let ropts = RunOptions {
        eta: 1.0,
        spectrum: super::strings::string_spectrum_options(p),
        type1_etas: Vec::new(),
        max_intervals: opts.max_intervals,
        band: Some(resolved_band(p)),
    };
    for c in spectrum_checks(&v.spec, &v.spectrum, &ropts) {
        if v.report.get(&c.name).is_none() {
            report.push(c);
        }
    }
    report.extend(v.report.checks.iter().cloned());
    Ok((report, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;
    use crate::report::Status;

    #[test]
    fn fixtures_pass() {
        let w1 = Pencil::new(
            RealMatrix::from_diag(&[1.0, 0.0]),
            RealMatrix::from_diag(&[0.0, 1.0]),
            RealMatrix::identity(2),
        )
        .unwrap();
        let w2 = Pencil::new(
            RealMatrix::from_diag(&[1.0, 0.0]),
            RealMatrix::from_diag(&[0.0, 1.0]),
            RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
        )
        .unwrap();
        for p in [w1, w2] {
            let r = run_all(&p, &RunOptions::default());
            assert!(!r.has_failure(), "{:#?}", r.failures().collect::<Vec<_>>());
            let mut names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
            let len = names.len();
            names.sort();
            names.dedup();
            assert_eq!(names.len(), len, "duplicate check names");
        }
    }

    #[test]
    fn broken_g_stops_after_condition() {
        let p =
            Pencil::new(RealMatrix::identity(2), RealMatrix::from_diag(&[1.0, -1.0]), RealMatrix::identity(2)).unwrap();
        let r = run_all(&p, &RunOptions::default());
        assert_eq!(r.checks.len(), 1);
        assert_eq!(r.checks[0].status, Status::Fail);
        assert!(r.checks[0].details.contains("G positive semidefinite"));
    }
}
