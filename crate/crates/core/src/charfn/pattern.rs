//! Zero pattern of the double-string characteristic function when
//! `√q·a/π` is a positive integer.

use num_complex::Complex64;

use super::contour::{circle_winding, winding_count, RootWindow, MIN_SAMPLES};
use super::zeros::{search_zeros, ZeroSearch};
use crate::error::{Error, Result};
use crate::properties::{conjugation_witnesses, integer_mode_count};
use crate::report::{Check, VerificationReport};
use crate::sturm::{junction_charfn, type1_lambdas};

/// Location tolerance for the origin and the imaginary zeros.
pub const LOCATION_TOL: f64 = 1e-8;
/// Number of real intervals examined on each side.
pub const INTERVALS: usize = 10;

pub const PATTERN_CHECKS: [&str; 9] = [
    "winding_conservation",
    "zeros_conjugation_closed",
    "double_zero_at_origin",
    "imaginary_zeros",
    "offaxis_zeros_right_halfplane",
    "real_interval_counts",
    "initial_interval_free",
    "negative_moduli_not_zeros",
    "paired_interval_counts",
];

#[derive(Clone, Debug)]
pub struct ModePattern {
    /// `N = √q·a/π`.
    pub modes: usize,
    pub search: ZeroSearch,
    /// Moduli of the real negative zeros strictly between consecutive
    /// persistent values, in increasing order.
    pub negative_moduli: Vec<f64>,
    pub report: VerificationReport,
}

/// Default search window: everything nonreal lies within `|Im| < √q + 1`.
pub fn default_window(q: f64) -> Result<RootWindow> {
    let s = q.max(0.0).sqrt();
    RootWindow::new(-0.5, s + 4.0, -(s + 1.0), s + 1.0)
}

fn on_real_axis(z: Complex64) -> bool {
    z.im.abs() <= LOCATION_TOL * (1.0 + z.norm())
}

fn on_imaginary_axis(z: Complex64) -> bool {
    z.re.abs() <= LOCATION_TOL * (1.0 + z.norm())
}

fn strip(lo: f64, hi: f64, half_height: f64) -> Result<RootWindow> {
    let d = 1e-4 * (hi - lo);
    RootWindow::new(lo + d, hi - d, -half_height, half_height)
}

/// Checks the counts and locations prescribed for integer `N`: a double zero at
/// the origin, `2(N − 1)` imaginary zeros, `2N` nonreal zeros in the open right
/// half-plane, one zero between consecutive persistent values on either side,
/// a zero-free initial interval, and two zeros between consecutive negative
/// moduli. Count assertions are winding numbers.
pub fn verify_mode_pattern(q: f64, a: f64, alpha: f64) -> Result<ModePattern> {
    verify_mode_pattern_in(q, a, alpha, &default_window(q)?)
}

pub fn verify_mode_pattern_in(q: f64, a: f64, alpha: f64, window: &RootWindow) -> Result<ModePattern> {
    let modes = integer_mode_count(q, a)?;
    if !(alpha > 0.0) || !alpha.is_finite() || !(a > 0.0) {
        return Err(Error::InvalidInput(format!("need a > 0 and alpha > 0, got a = {a}, alpha = {alpha}")));
    }
    let f = |z: Complex64| junction_charfn(z, q, a, alpha);
    let search = search_zeros(&f, window)?;
    let mut report = VerificationReport::default();
    let zeros: Vec<(Complex64, usize)> = search.zeros.iter().map(|r| (r.z, r.multiplicity)).collect();

    report.push(Check::from_bool(
        PATTERN_CHECKS[0],
        search.total_multiplicity() == search.winding,
        format!("multiplicities sum to {}, outer winding {}", search.total_multiplicity(), search.winding),
        Vec::new(),
    ));
    let asym = conjugation_witnesses(&zeros, 1e-9);
    report.push(Check::from_witnesses(PATTERN_CHECKS[1], format!("{} zeros", zeros.len()), asym));

    // Origin.
    let nonzero: Vec<&(Complex64, usize)> = zeros.iter().filter(|(z, _)| z.norm() > LOCATION_TOL).collect();
    let gap = nonzero.iter().map(|(z, _)| z.norm()).fold(window.diameter(), f64::min);
    let origin = zeros.iter().find(|(z, _)| z.norm() <= LOCATION_TOL);
    let origin_winding = circle_winding(&f, Complex64::new(0.0, 0.0), 0.5 * gap, MIN_SAMPLES).ok().map(|w| w.count);
    report.push(Check::from_bool(
        PATTERN_CHECKS[2],
        origin.is_some_and(|&(_, m)| m == 2) && origin_winding == Some(2),
        format!("zero at origin: {:?}, winding on radius {:.3e}: {:?}", origin, 0.5 * gap, origin_winding),
        origin.map(|&(z, _)| vec![z]).unwrap_or_default(),
    ));

    // Imaginary axis.
    let expected: Vec<Complex64> = type1_lambdas(q, a, modes - 1).into_iter().map(|e| e.lambda).collect();
    let imaginary: Vec<&(Complex64, usize)> = nonzero.iter().copied().filter(|(z, _)| on_imaginary_axis(*z)).collect();
    let mut witnesses: Vec<Complex64> = expected
        .iter()
        .copied()
        .filter(|&e| !imaginary.iter().any(|&&(z, m)| m == 1 && (z - e).norm() <= LOCATION_TOL))
        .collect();
    witnesses.extend(
        imaginary
            .iter()
            .filter(|&&&(z, _)| !expected.iter().any(|&e| (z - e).norm() <= LOCATION_TOL))
            .map(|&&(z, _)| z),
    );
    let offaxis: Vec<&(Complex64, usize)> =
        nonzero.iter().copied().filter(|(z, _)| !on_real_axis(*z) && !on_imaginary_axis(*z)).collect();
    let re_gap = offaxis.iter().map(|(z, _)| z.re.abs()).fold(0.1, f64::min);
    let im_gap = offaxis.iter().map(|(z, _)| z.im.abs()).fold(0.1, f64::min);
    let axis_strip = |sign: f64| -> Result<i64> {
        let (lo, hi) = (0.5 * gap, window.im_max);
        let (lo, hi) = if sign > 0.0 { (lo, hi) } else { (-hi, -lo) };
        winding_count(&f, &RootWindow::new(-0.5 * re_gap, 0.5 * re_gap, lo, hi)?)
    };
    let axis_counts = (axis_strip(1.0)?, axis_strip(-1.0)?);
    let want = modes as i64 - 1;
    report.push(Check::from_bool(
        PATTERN_CHECKS[3],
        witnesses.is_empty() && axis_counts == (want, want),
        format!("{} imaginary zeros found, strip windings {:?}, expected {} each", imaginary.len(), axis_counts, want),
        witnesses,
    ));

    // Off the axes.
    let left: Vec<Complex64> = offaxis.iter().filter(|(z, _)| z.re < 0.0).map(|&&(z, _)| z).collect();
    let quadrant = |re: (f64, f64), upper: bool| -> Result<i64> {
        let (lo, hi) = (0.5 * im_gap, window.im_max);
        let (lo, hi) = if upper { (lo, hi) } else { (-hi, -lo) };
        winding_count(&f, &RootWindow::new(re.0, re.1, lo, hi)?)
    };
    let right_re = (0.5 * re_gap, window.re_max);
    let left_re = (window.re_min, -0.5 * re_gap);
    let counts =
        [quadrant(right_re, true)?, quadrant(right_re, false)?, quadrant(left_re, true)?, quadrant(left_re, false)?];
    let found: usize = offaxis.iter().map(|&&(_, m)| m).sum();
    report.push(Check::from_bool(
        PATTERN_CHECKS[4],
        left.is_empty() && found == 2 * modes && counts == [modes as i64, modes as i64, 0, 0],
        format!(
            "{found} off-axis zeros found; windings right {:?}, left {:?}; expected {modes} per right quadrant",
            &counts[..2],
            &counts[2..]
        ),
        left,
    ));

    // Real axis: consecutive persistent values bound one zero each.
    let half = 0.5 * im_gap.min(0.1);
    let persistent = |j: usize| -> f64 {
        let k = std::f64::consts::PI * j as f64 / a;
        (k * k - q).max(0.0).sqrt()
    };
    let mut bad = Vec::new();
    let mut g_counts = Vec::new();
    let mut negative_moduli = Vec::new();
    for j in modes..=modes + INTERVALS {
        let (lo, hi) = (persistent(j), persistent(j + 1));
        let neg = strip(-hi, -lo, half)?;
        let found_neg = search_zeros(&f, &neg)?;
        if let [z] = found_neg.zeros.as_slice() {
            negative_moduli.push(-z.z.re);
        }
        if j < modes + INTERVALS {
            let pos = winding_count(&f, &strip(lo, hi, half)?)?;
            g_counts.push((found_neg.winding, pos));
            if found_neg.winding != 1 || pos != 1 {
                bad.push(Complex64::new(0.5 * (lo + hi), 0.0));
            }
        }
    }
    report.push(Check::from_witnesses(
        PATTERN_CHECKS[5],
        format!("(negative, positive) windings on {INTERVALS} intervals: {g_counts:?}"),
        bad,
    ));

    if negative_moduli.len() != INTERVALS + 1 {
        for name in &PATTERN_CHECKS[6..] {
            report.push(Check::fail(
                name,
                format!("only {} negative zeros isolated", negative_moduli.len()),
                Vec::new(),
            ));
        }
        return Ok(ModePattern { modes, search, negative_moduli, report });
    }

    let r1 = negative_moduli[0];
    let initial = winding_count(&f, &strip(0.0, r1, half)?)?;
    report.push(Check::from_bool(
        PATTERN_CHECKS[6],
        initial == 0,
        format!("winding {initial} on (0, {r1:.6})"),
        Vec::new(),
    ));

    let mut hits = Vec::new();
    for &r in &negative_moduli[..INTERVALS] {
        let c = Complex64::new(r, 0.0);
        match circle_winding(&f, c, 1e-4 * (1.0 + r), MIN_SAMPLES) {
            Ok(w) if w.count == 0 => {}
            _ => hits.push(c),
        }
    }
    report.push(Check::from_witnesses(PATTERN_CHECKS[7], format!("{} moduli examined", INTERVALS), hits));

    let mut paired = Vec::new();
    let mut bad = Vec::new();
    for w in negative_moduli.windows(2) {
        let n = winding_count(&f, &strip(w[0], w[1], half)?)?;
        paired.push(n);
        if n != 2 {
            bad.push(Complex64::new(0.5 * (w[0] + w[1]), 0.0));
        }
    }
    report.push(Check::from_witnesses(PATTERN_CHECKS[8], format!("windings {paired:?}, expected 2"), bad));

    Ok(ModePattern { modes, search, negative_moduli, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn two_modes() {
        let p = verify_mode_pattern(4.0, PI, 1.0).unwrap();
        assert_eq!(p.modes, 2);
        assert!(!p.report.has_failure(), "{:#?}", p.report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn one_mode() {
        let p = verify_mode_pattern(1.0, PI, 1.0).unwrap();
        assert!(!p.report.has_failure(), "{:#?}", p.report.failures().collect::<Vec<_>>());
        let imaginary = p.search.zeros.iter().filter(|r| on_imaginary_axis(r.z) && r.z.norm() > LOCATION_TOL).count();
        assert_eq!(imaginary, 0);
    }

    #[test]
    fn counts_do_not_depend_on_alpha() {
        for alpha in [0.5, 2.0] {
            let p = verify_mode_pattern(4.0, PI, alpha).unwrap();
            assert!(!p.report.has_failure(), "alpha {alpha}: {:#?}", p.report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn non_integer_modes_rejected() {
        assert!(matches!(verify_mode_pattern(2.0, PI, 1.0), Err(Error::PreconditionInteger(_))));
        assert!(matches!(verify_mode_pattern(4.0, PI, 0.0), Err(Error::InvalidInput(_))));
    }
}
