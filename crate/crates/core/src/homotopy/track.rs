//! Continuation of eigenvalue branches along `η` and collision detection.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::assignment::min_cost_assignment;
use super::derivative::branch_derivative;
use crate::error::{Error, Result};
use crate::pencil::{spectrum_with, PencilSpec, SpectrumOptions};

/// Branches beyond `ESCAPE_FACTOR · ‖spec‖` are treated as escaped to infinity.
pub const ESCAPE_FACTOR: f64 = 1e6;
/// Branch values within `COINCIDE_TOL · (1 + |λ|)` coincide.
pub const COINCIDE_TOL: f64 = 1e-4;
/// An eigenvalue with `|Im λ| > NONREAL_TOL · (1 + |λ|)` counts as nonreal.
pub const NONREAL_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// Two real branches cross on the real axis.
    RealCrossing,
    /// A conjugate pair reaches the real axis and splits into two reals.
    ComplexToReal,
    /// Two reals merge and leave the axis as a conjugate pair.
    RealToComplex,
    Unknown,
}

impl EventKind {
    /// `1`, `2`, `3`, or `0` for unknown.
    pub fn code(self) -> u8 {
        match self {
            EventKind::RealCrossing => 1,
            EventKind::ComplexToReal => 2,
            EventKind::RealToComplex => 3,
            EventKind::Unknown => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollisionEvent {
    pub eta_star: f64,
    pub lambda_star: Complex64,
    pub kind: EventKind,
    pub participants: Vec<usize>,
    /// Nonreal eigenvalue counts just before and after `eta_star`, in tracking order.
    pub nonreal_before: usize,
    pub nonreal_after: usize,
    /// Two real branches swap order across the event.
    pub order_swap: bool,
    pub diagnostics: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub id: usize,
    /// One entry per grid point; `None` marks an escaped or not yet born branch.
    pub values: Vec<Option<Complex64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySet {
    /// Monotone in the tracking direction, including adaptive points.
    pub eta_grid: Vec<f64>,
    pub branches: Vec<Branch>,
    pub events: Vec<CollisionEvent>,
}

fn is_nonreal(z: Complex64) -> bool {
    z.im.abs() > NONREAL_TOL * (1.0 + z.norm())
}

fn coincide(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= COINCIDE_TOL * (1.0 + a.norm().max(b.norm()))
}

impl TrajectorySet {
    /// Values of the branches present at grid point `k`.
    pub fn values_at(&self, k: usize) -> Vec<Complex64> {
        self.branches.iter().filter_map(|b| b.values[k]).collect()
    }

    pub fn nonreal_count(&self, k: usize) -> usize {
        self.values_at(k).into_iter().filter(|&z| is_nonreal(z)).count()
    }

    pub fn branch(&self, id: usize) -> Option<&Branch> {
        self.branches.iter().find(|b| b.id == id)
    }

    /// `eta,branch_id,re,im,escaped`; gaps carry empty coordinates and `escaped = 1`.
    pub fn to_track_csv(&self) -> String {
        let mut s = String::from("eta,branch_id,re,im,escaped\n");
        for (k, eta) in self.eta_grid.iter().enumerate() {
            for b in &self.branches {
                match b.values[k] {
                    Some(z) => writeln!(s, "{eta},{},{},{},0", b.id, z.re, z.im),
                    None => writeln!(s, "{eta},{},,,1", b.id),
                }
                .expect("string write");
            }
        }
        s
    }

    /// `eta_star,re,im,kind,participants` with participants joined by `;`.
    pub fn to_events_csv(&self) -> String {
        let mut s = String::from("eta_star,re,im,kind,participants\n");
        for e in &self.events {
            let ids: Vec<String> = e.participants.iter().map(usize::to_string).collect();
            writeln!(s, "{},{},{},{},{}", e.eta_star, e.lambda_star.re, e.lambda_star.im, e.kind.code(), ids.join(";"))
                .expect("string write");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackOptions {
    pub spectrum: SpectrumOptions,
    /// Smallest adaptive step and event localization width.
    pub min_step: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self { spectrum: SpectrumOptions::default(), min_step: 1e-6 }
    }
}

struct Snapshot {
    values: Vec<Complex64>,
    velocity: Vec<Option<Complex64>>,
}

fn snapshot(spec: &PencilSpec, eta: f64, opts: &TrackOptions) -> Result<Snapshot> {
    let r = spectrum_with(spec, eta, &opts.spectrum)?;
    let limit = ESCAPE_FACTOR * spec.spec_norm.max(1.0);
    let mut values = Vec::new();
    let mut velocity = Vec::new();
    for rec in r.records.iter().filter(|rec| rec.lambda.norm() <= limit) {
        let v = if rec.alg_mult == 1 && rec.geo_mult == 1 && !rec.vectors.is_empty() {
            branch_derivative(spec, rec.lambda, &rec.vectors[0], eta)
                .ok()
                .filter(|d| d.re.is_finite() && d.im.is_finite())
        } else {
            None
        };
        for _ in 0..rec.alg_mult {
            values.push(rec.lambda);
            velocity.push(v);
        }
    }
    Ok(Snapshot { values, velocity })
}

/// Nonreal eigenvalue count at `eta`.
fn nonreal_at(spec: &PencilSpec, eta: f64, opts: &TrackOptions) -> Result<(usize, Vec<Complex64>)> {
    let s = snapshot(spec, eta, opts)?;
    Ok((s.values.iter().filter(|&&z| is_nonreal(z)).count(), s.values))
}

struct Matching {
    /// `prev index → next index`.
    pairs: Vec<(usize, usize)>,
    max_error: f64,
    min_gap: f64,
    ambiguous: bool,
}

fn match_snapshots(prev: &Snapshot, next: &Snapshot, d_eta: f64) -> Matching {
    let pred: Vec<Complex64> =
        prev.values.iter().zip(&prev.velocity).map(|(&v, d)| d.map_or(v, |d| v + d * d_eta)).collect();
    let (np, nn) = (pred.len(), next.values.len());
    let cost = |i: usize, j: usize| (pred[i] - next.values[j]).norm();
    let pairs: Vec<(usize, usize)> = if np <= nn {
        let c: Vec<Vec<f64>> = (0..np).map(|i| (0..nn).map(|j| cost(i, j)).collect()).collect();
        min_cost_assignment(&c).into_iter().enumerate().collect()
    } else {
        let c: Vec<Vec<f64>> = (0..nn).map(|j| (0..np).map(|i| cost(i, j)).collect()).collect();
        min_cost_assignment(&c).into_iter().enumerate().map(|(j, i)| (i, j)).collect()
    };
    let max_error = pairs.iter().map(|&(i, j)| cost(i, j)).fold(0.0, f64::max);
    let mut min_gap = f64::INFINITY;
    for a in 0..nn {
        for b in a + 1..nn {
            let (x, y) = (next.values[a], next.values[b]);
            if !coincide(x, y) {
                min_gap = min_gap.min((x - y).norm());
            }
        }
    }
    let mut ambiguous = false;
    for (p, &(i, a)) in pairs.iter().enumerate() {
        for &(j, b) in &pairs[p + 1..] {
            // Interchangeable sources or targets: equal or conjugate values.
            let (x, y) = (next.values[a], next.values[b]);
            if coincide(x, y)
                || coincide(x, y.conj())
                || coincide(pred[i], pred[j])
                || coincide(pred[i], pred[j].conj())
            {
                continue;
            }
            let now = cost(i, a) + cost(j, b);
            let swapped = cost(i, b) + cost(j, a);
            if (swapped - now).abs() <= 1e-12 * (1.0 + next.values[a].norm()) {
                ambiguous = true;
            }
        }
    }
    Matching { pairs, max_error, min_gap, ambiguous }
}

/// Tracks every finite branch of `L(·, η)` from `eta_from` to `eta_to` on a
/// uniform grid of `steps` points with adaptive refinement, then detects and
/// classifies collisions.
pub fn track(spec: &PencilSpec, eta_from: f64, eta_to: f64, steps: usize) -> Result<TrajectorySet> {
    track_with(spec, eta_from, eta_to, steps, &TrackOptions::default())
}

pub fn track_with(
    spec: &PencilSpec,
    eta_from: f64,
    eta_to: f64,
    steps: usize,
    opts: &TrackOptions,
) -> Result<TrajectorySet> {
    if steps < 2 {
        return Err(Error::InvalidInput(format!("steps must be at least 2, got {steps}")));
    }
    for e in [eta_from, eta_to] {
        if !(0.0..=1.0).contains(&e) {
            return Err(Error::InvalidInput(format!("eta = {e} outside [0, 1]")));
        }
    }
    if eta_from == eta_to {
        return Err(Error::InvalidInput("empty eta range".into()));
    }
    let coarse: Vec<f64> = (0..steps).map(|k| eta_from + (eta_to - eta_from) * k as f64 / (steps - 1) as f64).collect();

    let mut eta_grid = vec![eta_from];
    let mut prev = snapshot(spec, eta_from, opts)?;
    let mut branches: Vec<Branch> =
        prev.values.iter().enumerate().map(|(id, &z)| Branch { id, values: vec![Some(z)] }).collect();
    // Branch index of each value in `prev`.
    let mut owner: Vec<usize> = (0..branches.len()).collect();

    let mut cur = eta_from;
    let mut step = coarse[1] - coarse[0];
    for &target in &coarse[1..] {
        while cur != target {
            let remaining = target - cur;
            if step.abs() >= 0.999 * remaining.abs() {
                step = remaining;
            }
            // Secant fallback where the derivative is unavailable.
            let k = eta_grid.len();
            if k >= 2 {
                let h = eta_grid[k - 1] - eta_grid[k - 2];
                for (i, v) in prev.velocity.iter_mut().enumerate() {
                    if v.is_none() {
                        let b = &branches[owner[i]];
                        if let (Some(x), Some(y)) = (b.values[k - 2], b.values[k - 1]) {
                            *v = Some((y - x) / h);
                        }
                    }
                }
            }
            let (next_eta, next, m) = loop {
                let e = if step == remaining { target } else { cur + step };
                let next = snapshot(spec, e, opts)?;
                let m = match_snapshots(&prev, &next, step);
                if m.max_error <= 0.5 * m.min_gap || step.abs() < opts.min_step {
                    if m.max_error > 0.5 * m.min_gap && m.ambiguous {
                        return Err(Error::MatchingAmbiguous(e));
                    }
                    break (e, next, m);
                }
                step /= 2.0;
            };
            eta_grid.push(next_eta);
            let mut next_owner = vec![usize::MAX; next.values.len()];
            for &(i, j) in &m.pairs {
                next_owner[j] = owner[i];
            }
            for (j, o) in next_owner.iter_mut().enumerate() {
                if *o == usize::MAX {
                    let id = branches.len();
                    branches.push(Branch { id, values: vec![None; k] });
                    *o = id;
                }
                branches[*o].values.push(Some(next.values[j]));
            }
            for b in branches.iter_mut() {
                if b.values.len() == k {
                    b.values.push(None);
                }
            }
            owner = next_owner;
            prev = next;
            cur = next_eta;
            step = if (2.0 * step).abs() <= (target - cur).abs() { 2.0 * step } else { step };
        }
    }

    let mut t = TrajectorySet { eta_grid, branches, events: Vec::new() };
    t.events = detect_events(spec, &t, opts)?;
    Ok(classify_events(t))
}

fn detect_events(spec: &PencilSpec, t: &TrajectorySet, opts: &TrackOptions) -> Result<Vec<CollisionEvent>> {
    let g = &t.eta_grid;
    let (lo_end, hi_end) = (g[0], g[g.len() - 1]);
    let interior = |e: f64| (e - lo_end).abs() >= opts.min_step && (e - hi_end).abs() >= opts.min_step;
    let mut events = Vec::new();

    let counts: Vec<usize> = (0..g.len()).map(|k| t.nonreal_count(k)).collect();
    for k in 0..g.len() - 1 {
        if counts[k] == counts[k + 1] {
            continue;
        }
        let participants: Vec<usize> = t
            .branches
            .iter()
            .filter(|b| match (b.values[k], b.values[k + 1]) {
                (Some(x), Some(y)) => is_nonreal(x) != is_nonreal(y),
                _ => false,
            })
            .map(|b| b.id)
            .collect();
        let mut found = Vec::new();
        localize(spec, opts, (g[k], counts[k]), (g[k + 1], counts[k + 1]), &mut found)?;
        for (eta_star, before, after, values) in found {
            if !interior(eta_star) {
                continue;
            }
            events.push(CollisionEvent {
                eta_star,
                lambda_star: closest_pair_mean(&values),
                kind: EventKind::Unknown,
                participants: participants.clone(),
                nonreal_before: before,
                nonreal_after: after,
                order_swap: false,
                diagnostics: format!("nonreal count {before} -> {after}"),
            });
        }
    }

    let nb = t.branches.len();
    for a in 0..nb {
        for b in a + 1..nb {
            let (ba, bb) = (&t.branches[a], &t.branches[b]);
            let mut last: Option<(usize, f64)> = None;
            for k in 0..g.len() {
                let (Some(x), Some(y)) = (ba.values[k], bb.values[k]) else {
                    last = None;
                    continue;
                };
                if is_nonreal(x) || is_nonreal(y) {
                    last = None;
                    continue;
                }
                if coincide(x, y) {
                    continue;
                }
                let d = x.re - y.re;
                if let Some((kl, dl)) = last {
                    if dl.signum() != d.signum() {
                        let (eta_star, lambda_star) = if kl + 1 == k {
                            let s = dl / (dl - d);
                            let xl = ba.values[kl].unwrap_or(x);
                            (g[kl] + s * (g[k] - g[kl]), xl + (x - xl) * s)
                        } else {
                            let mid = (kl + k) / 2;
                            (0.5 * (g[kl] + g[k]), ba.values[mid].unwrap_or(x))
                        };
                        if interior(eta_star) {
                            let n = counts[kl];
                            events.push(CollisionEvent {
                                eta_star,
                                lambda_star,
                                kind: EventKind::Unknown,
                                participants: vec![ba.id, bb.id],
                                nonreal_before: n,
                                nonreal_after: counts[k],
                                order_swap: true,
                                diagnostics: "real branches swap order".into(),
                            });
                        }
                    }
                }
                last = Some((k, d));
            }
        }
    }

    for k in 1..g.len().saturating_sub(1) {
        for a in 0..nb {
            for b in a + 1..nb {
                let v = |br: &Branch, i: usize| br.values[i];
                let (ba, bb) = (&t.branches[a], &t.branches[b]);
                let hit = |i: usize| matches!((v(ba, i), v(bb, i)), (Some(x), Some(y)) if coincide(x, y));
                if !hit(k) || (hit(k - 1) && hit(k + 1)) {
                    continue;
                }
                let radius = g[k + 1] - g[k - 1];
                let explained = events.iter().any(|e| (e.eta_star - g[k]).abs() <= radius.abs());
                if !explained {
                    let z = v(ba, k).unwrap_or_default();
                    events.push(CollisionEvent {
                        eta_star: g[k],
                        lambda_star: z,
                        kind: EventKind::Unknown,
                        participants: vec![ba.id, bb.id],
                        nonreal_before: counts[k - 1],
                        nonreal_after: counts[k + 1],
                        order_swap: false,
                        diagnostics: "isolated coincidence without order swap or nonreal count change".into(),
                    });
                }
            }
        }
    }
    let forward = hi_end > lo_end;
    events.sort_by(|x, y| if forward { x.eta_star.total_cmp(&y.eta_star) } else { y.eta_star.total_cmp(&x.eta_star) });
    Ok(events)
}

/// Bisection on the nonreal count between `lo` and `hi`; pushes
/// `(η*, count before, count after, values at η*)` per change.
fn localize(
    spec: &PencilSpec,
    opts: &TrackOptions,
    lo: (f64, usize),
    hi: (f64, usize),
    out: &mut Vec<(f64, usize, usize, Vec<Complex64>)>,
) -> Result<()> {
    if lo.1 == hi.1 {
        return Ok(());
    }
    let mid = 0.5 * (lo.0 + hi.0);
    if (hi.0 - lo.0).abs() <= opts.min_step {
        let (_, values) = nonreal_at(spec, mid, opts)?;
        out.push((mid, lo.1, hi.1, values));
        return Ok(());
    }
    let (c, _) = nonreal_at(spec, mid, opts)?;
    localize(spec, opts, lo, (mid, c), out)?;
    localize(spec, opts, (mid, c), hi, out)
}

fn closest_pair_mean(values: &[Complex64]) -> Complex64 {
    let mut best = (f64::INFINITY, Complex64::default());
    for a in 0..values.len() {
        for b in a + 1..values.len() {
            let d = (values[a] - values[b]).norm();
            if d < best.0 {
                best = (d, 0.5 * (values[a] + values[b]));
            }
        }
    }
    best.1
}

/// Kind from the nonreal count change across each event: `−2` gives a
/// complex-to-real event, `+2` real-to-complex, `0` with an order swap a real
/// crossing; anything else stays unknown.
pub fn classify_events(mut t: TrajectorySet) -> TrajectorySet {
    for e in &mut t.events {
        let diff = e.nonreal_after as i64 - e.nonreal_before as i64;
        e.kind = match diff {
            -2 => EventKind::ComplexToReal,
            2 => EventKind::RealToComplex,
            0 if e.order_swap => EventKind::RealCrossing,
            _ => EventKind::Unknown,
        };
    }
    t
}

/// `dλ/dη` of the simple eigenvalue of `L(·, η)` nearest to `lambda`.
pub fn velocity_at(spec: &PencilSpec, eta: f64, lambda: Complex64) -> Result<Complex64> {
    let r = spectrum_with(spec, eta, &SpectrumOptions::default())?;
    let rec = r
        .records
        .iter()
        .min_by(|a, b| (a.lambda - lambda).norm().total_cmp(&(b.lambda - lambda).norm()))
        .filter(|rec| coincide(rec.lambda, lambda))
        .ok_or_else(|| Error::NotAnEigenvalue(format!("{lambda} at eta = {eta}")))?;
    if rec.geo_mult != 1 || rec.vectors.is_empty() {
        return Err(Error::DenominatorVanishes(0.0));
    }
    branch_derivative(spec, rec.lambda, &rec.vectors[0], eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;
    use crate::pencil::Pencil;

    fn spec(m: &[f64], g: &[f64], a: &[f64]) -> PencilSpec {
        PencilSpec::new(
            Pencil::new(RealMatrix::from_diag(m), RealMatrix::from_diag(g), RealMatrix::from_diag(a)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn constant_branches_without_g() {
        let t = track(&spec(&[1.0, 1.0], &[0.0, 0.0], &[1.0, 4.0]), 0.0, 1.0, 11).unwrap();
        assert!(t.events.is_empty());
        assert_eq!(t.branches.len(), 4);
        assert_eq!(t.eta_grid.len(), 11);
        for b in &t.branches {
            let z0 = b.values[0].unwrap();
            assert!(b.values.iter().all(|v| (v.unwrap() - z0).norm() < 1e-12));
        }
    }

    #[test]
    fn hyperbola_branch() {
        let t = track(&spec(&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]), 0.5, 1.0, 51).unwrap();
        let moving = t.branches.iter().find(|b| (b.values[0].unwrap().re + 2.0).abs() < 1e-9).unwrap();
        for (k, v) in moving.values.iter().enumerate() {
            assert!((v.unwrap().re + 1.0 / t.eta_grid[k]).abs() < 1e-9);
        }
        assert!(t.events.is_empty());
    }

    #[test]
    fn complex_pair_lands_on_axis() {
        let s = spec(&[1.0, 1.0], &[0.0, 1.0], &[1.0, -0.09]);
        let t = track(&s, 0.0, 1.0, 101).unwrap();
        assert_eq!(t.events.len(), 1, "{:?}", t.events);
        let e = &t.events[0];
        assert_eq!(e.kind, EventKind::ComplexToReal);
        assert!((e.eta_star - 0.6).abs() < 1e-5 && (e.lambda_star - 0.3).norm() < 1e-4);
        let back = track(&s, 1.0, 0.0, 101).unwrap();
        assert_eq!(back.events.len(), 1);
        assert_eq!(back.events[0].kind, EventKind::RealToComplex);
    }

    #[test]
    fn real_crossing_is_kind_one() {
        // Coordinate 2: λ² − 2ηλ − 3 = 0 has the root η + √(η² + 3), crossing the
        // constant branch 2 at η = 0.25.
        let s = spec(&[1.0, 1.0], &[0.0, 2.0], &[4.0, 3.0]);
        let t = track(&s, 0.0, 1.0, 41).unwrap();
        assert_eq!(t.events.len(), 1, "{:?}", t.events);
        assert_eq!(t.events[0].kind, EventKind::RealCrossing);
        assert!((t.events[0].eta_star - 0.25).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_arguments() {
        let s = spec(&[1.0], &[1.0], &[1.0]);
        assert!(matches!(track(&s, 0.0, 1.0, 1), Err(Error::InvalidInput(_))));
        assert!(matches!(track(&s, 0.0, 1.5, 5), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn csv_layout() {
        let t = track(&spec(&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]), 0.0, 1.0, 3).unwrap();
        let csv = t.to_track_csv();
        assert!(csv.starts_with("eta,branch_id,re,im,escaped\n"));
        assert!(csv.lines().any(|l| l.ends_with(",,,1")), "branch born after eta = 0 leaves a gap");
        assert_eq!(t.to_events_csv(), "eta_star,re,im,kind,participants\n");
    }
}
