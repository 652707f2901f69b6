//! Interval counts of type-II eigenvalues and the balance against the
//! negative eigenvalues of `λM − A`.

use num_complex::Complex64;

use super::lemmas::{conjugation_witnesses, is_imaginary, is_real, PAIR_TOL};
use crate::error::{Error, Result};
use crate::linalg::{count_negative_eigs_pencil_below, sym_eigenvalues};
use crate::pencil::{PencilSpec, SpectrumResult, TypeStatus};
use crate::report::Check;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountOptions {
    /// Parity of interval counts is asserted on at most this many intervals.
    pub max_intervals: Option<usize>,
    /// Zero resolution used for the spectrum; `λM − A` eigenvalues above
    /// `−zero_tol²` are not counted as negative.
    pub zero_tol: f64,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self { max_intervals: None, zero_tol: 1e-6 }
    }
}

/// Counting data read off one spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeTwoCounts {
    /// Half the number of pure imaginary type-I eigenvalues.
    pub imag_type1_pairs: usize,
    /// Half the number of nonreal type-II eigenvalues.
    pub nonreal_type2_pairs: usize,
    /// Negative eigenvalues of `λM − A`.
    pub negative_linear_count: usize,
    /// Ascending moduli of the negative type-II eigenvalues.
    pub negative_moduli: Vec<f64>,
    /// Type-II count in `(0, r_1)`, or on the whole positive axis when there
    /// are no negative type-II eigenvalues.
    pub initial_count: usize,
    /// Type-II counts in `(r_j, r_{j+1})`, the last interval unbounded.
    pub interval_counts: Vec<usize>,
    /// 0 is an eigenvalue with a kernel vector not annihilated by `G`.
    pub zero_is_type2: bool,
    /// Algebraic multiplicity of the eigenvalue 0.
    pub zero_alg: usize,
    /// `λ_min(M) > 0`.
    pub mass_definite: bool,
    /// Twice the interval excess: `initial_count (− 1) + Σ (n_j − 1)`.
    pub interval_excess_twice: i64,
    /// Positive type-II eigenvalues sitting on some `r_j`.
    pub endpoint_hits: Vec<Complex64>,
    /// Nonreal type-II eigenvalues, with multiplicity.
    pub nonreal_type2: Vec<(Complex64, usize)>,
}

impl TypeTwoCounts {
    /// `½ · interval_excess_twice` when it is even.
    pub fn interval_excess(&self) -> Option<i64> {
        (self.interval_excess_twice % 2 == 0).then_some(self.interval_excess_twice / 2)
    }

    /// Whether `interval_excess + nonreal_type2_pairs + imag_type1_pairs` equals
    /// `negative_linear_count`.
    pub fn balance_holds(&self) -> bool {
        self.interval_excess().is_some_and(|k| {
            k + self.nonreal_type2_pairs as i64 + self.imag_type1_pairs as i64 == self.negative_linear_count as i64
        })
    }
}

fn gate(spec: &PencilSpec) -> Result<()> {
    if !spec.ker_ma_trivial {
        return Err(Error::PreconditionKerMA);
    }
    if !spec.g_is_rank_one() {
        return Err(Error::HypothesisViolated("G is not rank one".into()));
    }
    let p = spec.pencil();
    let mg = p.m.add(&p.g);
    let min = sym_eigenvalues(&mg)?[0];
    if min <= 1e-8 * mg.norm_max().max(1.0) {
        return Err(Error::HypothesisViolated(format!("M + G not positive definite (λ_min = {min:.3e})")));
    }
    Ok(())
}

fn negative_type2_moduli(result: &SpectrumResult) -> Vec<f64> {
    let mut out: Vec<f64> = result
        .records
        .iter()
        .filter(|r| r.status == TypeStatus::Classified)
        .filter(|r| is_real(r.lambda) && r.lambda.re < 0.0 && r.type2_mult > 0)
        .flat_map(|r| std::iter::repeat(-r.lambda.re).take(r.type2_mult))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Two distinct records with moduli closer than `PAIR_TOL`. Copies of one
/// multiple record coincide exactly and bound empty intervals.
fn colliding_modulus(sorted: &[f64]) -> Option<f64> {
    sorted.windows(2).find(|w| w[1] != w[0] && w[1] - w[0] <= PAIR_TOL * w[1].max(1.0)).map(|w| w[0])
}

/// Counts from the spectrum of `spec` at `result.eta`.
pub fn type2_counts(spec: &PencilSpec, result: &SpectrumResult, opts: &CountOptions) -> Result<TypeTwoCounts> {
    gate(spec)?;
    let classified = || result.records.iter().filter(|r| r.status == TypeStatus::Classified);

    let imag_t1: usize = classified().filter(|r| is_imaginary(r.lambda)).map(|r| r.type1_mult).sum();
    let nonreal_type2: Vec<(Complex64, usize)> =
        classified().filter(|r| !is_real(r.lambda) && r.type2_mult > 0).map(|r| (r.lambda, r.type2_mult)).collect();
    let nonreal_t2: usize = nonreal_type2.iter().map(|&(_, m)| m).sum();

    let negative_moduli = negative_type2_moduli(result);
    if let Some(r) = colliding_modulus(&negative_moduli) {
        return Err(Error::EnumerationAmbiguous(format!("negative type-II modulus {r} is repeated")));
    }
    let positives: Vec<(f64, usize)> = classified()
        .filter(|r| is_real(r.lambda) && r.lambda.re > 0.0 && r.type2_mult > 0)
        .map(|r| (r.lambda.re, r.type2_mult))
        .collect();

    let endpoint_hits: Vec<Complex64> = positives
        .iter()
        .filter(|(x, _)| negative_moduli.iter().any(|r| (x - r).abs() <= PAIR_TOL * r.max(1.0)))
        .map(|&(x, _)| Complex64::new(x, 0.0))
        .collect();
    let count_in =
        |lo: f64, hi: f64| -> usize { positives.iter().filter(|(x, _)| *x > lo && *x < hi).map(|&(_, m)| m).sum() };
    let first = negative_moduli.first().copied().unwrap_or(f64::INFINITY);
    let initial_count = count_in(0.0, first);
    let interval_counts: Vec<usize> = (0..negative_moduli.len())
        .map(|j| count_in(negative_moduli[j], negative_moduli.get(j + 1).copied().unwrap_or(f64::INFINITY)))
        .collect();

    let zero = result.zero_record();
    let zero_is_type2 = zero.is_some_and(|r| r.geo_mult > r.type1_mult);
    let zero_alg = zero.map_or(0, |r| r.alg_mult);
    let mut twice = initial_count as i64 - i64::from(zero_is_type2);
    twice += interval_counts.iter().map(|&c| c as i64 - 1).sum::<i64>();

    let p = spec.pencil();
    let scale = p.a.norm_max().max(p.m.norm_max()).max(1.0);
    let threshold = (opts.zero_tol * opts.zero_tol).max(1e-10 * scale);
    let negative_linear_count = count_negative_eigs_pencil_below(&p.a, &p.m, threshold)?;

    Ok(TypeTwoCounts {
        imag_type1_pairs: imag_t1 / 2,
        nonreal_type2_pairs: nonreal_t2 / 2,
        negative_linear_count,
        negative_moduli,
        initial_count,
        interval_counts,
        zero_is_type2,
        zero_alg,
        mass_definite: spec.m_mass > 1e-10 * spec.m_norm.max(1.0),
        interval_excess_twice: twice,
        endpoint_hits,
        nonreal_type2,
    })
}

/// Eigenvalues entering the balance: negative type-II and nonreal type-II.
fn counted_witnesses(c: &TypeTwoCounts) -> Vec<Complex64> {
    let mut w: Vec<Complex64> = c.negative_moduli.iter().map(|&r| Complex64::new(-r, 0.0)).collect();
    w.extend(c.nonreal_type2.iter().map(|&(z, _)| z));
    if w.is_empty() {
        w.push(Complex64::new(0.0, 0.0));
    }
    w
}

/// Check names of the bundle, in order.
pub const TYPE2_CHECKS: [&str; 6] = [
    "type2_nonreal_symmetric",
    "type2_nonreal_open_right_halfplane",
    "type2_negative_moduli_not_eigenvalues",
    "type2_interval_counts_odd",
    "type2_initial_interval_parity",
    "type2_counting_balance",
];

/// The six-part bundle; gate failures become `not_applicable` entries.
pub fn check_type2_counts(
    spec: &PencilSpec,
    result: &SpectrumResult,
    opts: &CountOptions,
) -> (Vec<Check>, Option<TypeTwoCounts>) {
    let c = match type2_counts(spec, result, opts) {
        Ok(c) => c,
        Err(e @ Error::EnumerationAmbiguous(_)) => {
            let r = colliding_modulus(&negative_type2_moduli(result)).unwrap_or(0.0);
            let w = vec![Complex64::new(-r, 0.0)];
            let mut out: Vec<Check> =
                TYPE2_CHECKS[..2].iter().map(|n| Check::not_applicable(n, e.to_string())).collect();
            out.extend(TYPE2_CHECKS[2..].iter().map(|n| Check::fail(n, e.to_string(), w.clone())));
            return (out, None);
        }
        Err(e) => return (TYPE2_CHECKS.iter().map(|n| Check::not_applicable(n, e.to_string())).collect(), None),
    };
    let mut out = Vec::with_capacity(6);

    let asym = conjugation_witnesses(&c.nonreal_type2, PAIR_TOL);
    let odd_total = c.nonreal_type2.iter().map(|&(_, m)| m).sum::<usize>() % 2 == 1;
    out.push(Check::from_bool(
        TYPE2_CHECKS[0],
        asym.is_empty() && !odd_total,
        format!("{} nonreal type-II eigenvalues", 2 * c.nonreal_type2_pairs + usize::from(odd_total)),
        asym,
    ));

    let left: Vec<Complex64> = if result.eta > 0.0 {
        c.nonreal_type2.iter().map(|&(z, _)| z).filter(|z| z.re <= 0.0).collect()
    } else {
        Vec::new()
    };
    out.push(Check::from_witnesses(TYPE2_CHECKS[1], format!("eta = {}", result.eta), left));

    // With `max_intervals`, only endpoints of the asserted intervals are examined.
    let cap =
        opts.max_intervals.and_then(|k| c.negative_moduli.get(k)).map_or(f64::INFINITY, |&r| r * (1.0 + PAIR_TOL));
    let hits: Vec<Complex64> = c.endpoint_hits.iter().copied().filter(|z| z.re <= cap).collect();
    out.push(Check::from_witnesses(
        TYPE2_CHECKS[2],
        format!("{} negative type-II moduli, endpoints up to {cap:.6e} examined", c.negative_moduli.len()),
        hits,
    ));

    let mass_note = "λ_min(M) = 0: branches may escape to infinity as eta → 0";
    if c.mass_definite {
        let limit = opts.max_intervals.unwrap_or(usize::MAX);
        let checked = &c.interval_counts[..c.interval_counts.len().min(limit)];
        let bad: Vec<Complex64> = checked
            .iter()
            .enumerate()
            .filter(|(_, &n)| n % 2 == 0)
            .map(|(j, _)| Complex64::new(c.negative_moduli[j], 0.0))
            .collect();
        out.push(Check::from_witnesses(
            TYPE2_CHECKS[3],
            format!("counts {:?} on {} intervals", checked, checked.len()),
            bad,
        ));
    } else {
        out.push(Check::not_applicable(TYPE2_CHECKS[3], mass_note));
    }

    let parity_ok =
        if c.zero_is_type2 { c.initial_count % 2 == 1 && c.zero_alg == 1 } else { c.initial_count % 2 == 0 };
    let variant = if c.zero_is_type2 { "odd with a simple zero" } else { "even" };
    let hi = c.negative_moduli.first().copied().unwrap_or(f64::INFINITY);
    out.push(Check::from_bool(
        TYPE2_CHECKS[4],
        parity_ok,
        format!("{} type-II eigenvalues in (0, {hi}), expected {variant}", c.initial_count),
        vec![Complex64::new(0.0, 0.0)],
    ));

    if c.mass_definite {
        let excess = c.interval_excess().map_or_else(|| format!("{}/2", c.interval_excess_twice), |k| k.to_string());
        out.push(Check::from_bool(
            TYPE2_CHECKS[5],
            c.balance_holds(),
            format!(
                "interval excess {excess} + nonreal type-II pairs {} + imaginary type-I pairs {} vs negative linear count {}",
                c.nonreal_type2_pairs, c.imag_type1_pairs, c.negative_linear_count
            ),
            counted_witnesses(&c),
        ));
    } else {
        out.push(Check::not_applicable(TYPE2_CHECKS[5], mass_note));
    }
    (out, Some(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;
    use crate::pencil::{spectrum, Pencil};
    use crate::report::Status;

    fn spec(m: &[f64], a: RealMatrix) -> PencilSpec {
        let n = m.len();
        PencilSpec::new(Pencil::with_rank_one(RealMatrix::from_diag(m), 1.0, n - 1, a).unwrap()).unwrap()
    }

    #[test]
    fn decoupled_real_pair_has_excess_one() {
        // λ² − λ + 0.09 = 0 on the second coordinate: roots 0.1 and 0.9.
        let s = spec(&[1.0, 1.0], RealMatrix::from_diag(&[1.0, -0.09]));
        let r = spectrum(&s, 1.0).unwrap();
        let (checks, c) = check_type2_counts(&s, &r, &CountOptions::default());
        let c = c.unwrap();
        assert_eq!(c.initial_count, 2);
        assert_eq!(c.interval_excess(), Some(1));
        assert_eq!((c.imag_type1_pairs, c.nonreal_type2_pairs, c.negative_linear_count), (0, 0, 1));
        assert!(checks.iter().all(Check::passed), "{checks:?}");
    }

    #[test]
    fn singular_mass_gates_parity_and_balance() {
        let s = PencilSpec::new(
            Pencil::new(
                RealMatrix::from_diag(&[1.0, 0.0]),
                RealMatrix::from_diag(&[0.0, 1.0]),
                RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
            )
            .unwrap(),
        )
        .unwrap();
        let r = spectrum(&s, 1.0).unwrap();
        let (checks, c) = check_type2_counts(&s, &r, &CountOptions::default());
        assert_eq!(c.unwrap().nonreal_type2_pairs, 1);
        assert_eq!(checks[3].status, Status::NotApplicable);
        assert_eq!(checks[5].status, Status::NotApplicable);
        assert!(checks[..3].iter().all(Check::passed));
    }

    #[test]
    fn dense_g_is_not_applicable() {
        let s = PencilSpec::new(
            Pencil::new(RealMatrix::identity(2), RealMatrix::identity(2), RealMatrix::identity(2)).unwrap(),
        )
        .unwrap();
        let r = spectrum(&s, 1.0).unwrap();
        let (checks, c) = check_type2_counts(&s, &r, &CountOptions::default());
        assert!(c.is_none());
        assert!(checks.iter().all(|k| k.status == Status::NotApplicable));
    }
}
