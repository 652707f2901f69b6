//! Pairing of negative with positive eigenvalues and the unpaired count.

use crate::error::{Error, Result};
use crate::linalg::count_negative_eigs_pencil;
use crate::pencil::{spectrum, PencilSpec, SpectrumResult};

/// Sum threshold `λ_j + λ_{−j} ≥ −PAIR_SLACK`.
pub const PAIR_SLACK: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct PairingReport {
    /// `(negative, positive)` pairs.
    pub pairs: Vec<(f64, f64)>,
    pub unpaired_positives: Vec<f64>,
    /// Negatives left without a partner.
    pub failures: Vec<f64>,
}

fn real_values(result: &SpectrumResult) -> (Vec<f64>, Vec<f64>) {
    let tol = |x: f64| 1e-8 * x.abs().max(1.0);
    let mut neg = Vec::new();
    let mut pos = Vec::new();
    for z in result.values_with_multiplicity() {
        if z.im.abs() > tol(z.re) || z.re.abs() <= tol(0.0) {
            continue;
        }
        if z.re < 0.0 {
            neg.push(z.re);
        } else {
            pos.push(z.re);
        }
    }
    neg.sort_by(|a, b| b.total_cmp(a));
    pos.sort_by(f64::total_cmp);
    (neg, pos)
}

fn compatible(neg: f64, pos: f64) -> bool {
    neg + pos >= -PAIR_SLACK
}

/// Greedy pairing: negatives by increasing modulus, each with the smallest free
/// positive `λ` satisfying `λ + λ_neg ≥ −1e-8`. A greedy shortfall on at most
/// twelve real values is re-checked by exhaustive augmenting-path matching.
pub fn pair_spectrum(result: &SpectrumResult) -> PairingReport {
    let (neg, pos) = real_values(result);
    let mut used = vec![false; pos.len()];
    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for &v in &neg {
        match (0..pos.len()).find(|&k| !used[k] && compatible(v, pos[k])) {
            Some(k) => {
                used[k] = true;
                pairs.push((v, pos[k]));
            }
            None => failures.push(v),
        }
    }
    if !failures.is_empty() && neg.len() + pos.len() <= 12 {
        if let Some(mate) = maximum_matching(&neg, &pos) {
            pairs = neg.iter().zip(&mate).map(|(&v, &k)| (v, pos[k])).collect();
            used = vec![false; pos.len()];
            for &k in &mate {
                used[k] = true;
            }
            failures.clear();
        }
    }
    let unpaired_positives = pos.iter().zip(&used).filter(|(_, &u)| !u).map(|(&p, _)| p).collect();
    PairingReport { pairs, unpaired_positives, failures }
}

/// Perfect matching of every negative, by augmenting paths.
fn maximum_matching(neg: &[f64], pos: &[f64]) -> Option<Vec<usize>> {
    fn augment(i: usize, neg: &[f64], pos: &[f64], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for k in 0..pos.len() {
            if seen[k] || !compatible(neg[i], pos[k]) {
                continue;
            }
            seen[k] = true;
            if owner[k].map_or(true, |j| augment(j, neg, pos, seen, owner)) {
                owner[k] = Some(i);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; pos.len()];
    for i in 0..neg.len() {
        let mut seen = vec![false; pos.len()];
        if !augment(i, neg, pos, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut mate = vec![0; neg.len()];
    for (k, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            mate[*i] = k;
        }
    }
    Some(mate)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountIdentity {
    /// Negative eigenvalues of `λM − A`.
    pub kappa_a: usize,
    /// Nonreal eigenvalues of `L(·, 1)`.
    pub kappa_c: usize,
    pub unpaired_positives: usize,
    pub unpaired: Vec<f64>,
    pub identity_holds: bool,
}

/// Unpaired positive eigenvalues of `L(·, 1)` against `2κ_A − κ_c`, for
/// `M ≫ 0`, `G ≫ 0`.
pub fn count_identity(spec: &PencilSpec) -> Result<CountIdentity> {
    if spec.m_mass <= 1e-10 * spec.m_norm.max(1.0) {
        return Err(Error::HypothesisViolated(format!("λ_min(M) = {:.3e} is not positive", spec.m_mass)));
    }
    if spec.g_min <= 1e-10 * spec.g_norm.max(1.0) {
        return Err(Error::HypothesisViolated(format!("λ_min(G) = {:.3e} is not positive", spec.g_min)));
    }
    let p = spec.pencil();
    let kappa_a = count_negative_eigs_pencil(&p.a, &p.m)?;
    let result = spectrum(spec, 1.0)?;
    let kappa_c = result
        .records
        .iter()
        .filter(|r| r.lambda.im.abs() > 1e-8 * r.lambda.norm().max(1.0))
        .map(|r| r.alg_mult)
        .sum::<usize>();
    let pr = pair_spectrum(&result);
    let unpaired_positives = pr.unpaired_positives.len();
    let identity_holds = pr.failures.is_empty() && unpaired_positives as i64 == 2 * kappa_a as i64 - kappa_c as i64;
    Ok(CountIdentity { kappa_a, kappa_c, unpaired_positives, unpaired: pr.unpaired_positives, identity_holds })
}
