//! Acceptance run: one line per criterion, nonzero exit on any failure.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qpencil::charfn::{search_zeros, verify_mode_pattern, RootWindow, ZeroSearch};
use qpencil::homotopy::{count_identity, lambda_derivative, pair_spectrum, track, EventKind, TrajectorySet};
use qpencil::pencil::{spectrum, PencilSpec, TypeStatus};
use qpencil::properties::{
    check_halfplane, check_negative_semisimple, check_symmetry, check_zero_multiplicity, expected_zero_multiplicity,
    run_string, StringOptions,
};
use qpencil::report::VerificationReport;
use qpencil::sturm::{junction_charfn, Potential, SlProblem, Variant};
use rand::Rng;

type Outcome = Result<String, String>;

/// Searches whose conservation is checked by the last criterion.
#[derive(Default)]
struct Searches(Vec<(&'static str, ZeroSearch)>);

fn failures(r: &VerificationReport) -> String {
    r.failures().map(|c| format!("{}: {}", c.name, c.details)).collect::<Vec<_>>().join("; ")
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    if elapsed.as_secs_f64() <= limit {
        Ok(())
    } else {
        Err(format!("took {:.1} s, limit {limit} s", elapsed.as_secs_f64()))
    }
}

fn analytic_pattern(found: &mut Searches) -> Outcome {
    let start = Instant::now();
    let p = verify_mode_pattern(4.0, PI, 1.0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    found.0.push(("junction q=4 default window", p.search.clone()));
    if p.report.has_failure() {
        return Err(failures(&p.report));
    }
    let zeros = &p.search.zeros;
    let origin = zeros.iter().find(|r| r.z.norm() <= 1e-8).ok_or("no zero within 1e-8 of the origin")?;
    if origin.multiplicity != 2 {
        return Err(format!("origin multiplicity {}", origin.multiplicity));
    }
    for s in [1.0, -1.0] {
        let t = Complex64::new(0.0, s * 3f64.sqrt());
        let err = zeros.iter().map(|r| (r.z - t).norm()).fold(f64::INFINITY, f64::min);
        if err > 1e-8 {
            return Err(format!("zero near {t} off by {err:.2e}"));
        }
    }
    let right: usize = zeros.iter().filter(|r| r.z.re > 1e-8 && r.z.im.abs() > 1e-8).map(|r| r.multiplicity).sum();
    if right != 4 {
        return Err(format!("{right} nonreal zeros with Re > 0"));
    }
    within(elapsed, 10.0)?;
    Ok(format!("{} zeros, winding {}, {:.2} s", zeros.len(), p.search.winding, elapsed.as_secs_f64()))
}

fn discrete_double(found: &mut Searches) -> Outcome {
    let start = Instant::now();
    let prob = SlProblem::new(Variant::Double, Potential::Const { value: 4.0 }, PI, 1.0, 300).with_paper_sign(true);
    let (report, v) = run_string(&prob, &StringOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if report.has_failure() {
        return Err(failures(&report));
    }
    let recs = &v.spectrum.records;
    for s in [1.0, -1.0] {
        let t = Complex64::new(0.0, s * 3f64.sqrt());
        let r = recs
            .iter()
            .min_by(|a, b| (a.lambda - t).norm().total_cmp(&(b.lambda - t).norm()))
            .ok_or("empty spectrum")?;
        if (r.lambda - t).norm() > 2e-2 || r.type1_mult < 1 {
            return Err(format!("nearest to {t} is {} with type I multiplicity {}", r.lambda, r.type1_mult));
        }
    }
    let zero = v.spectrum.zero_record().ok_or("no zero eigenvalue")?;
    if (zero.alg_mult, zero.geo_mult) != (2, 1) {
        return Err(format!("zero alg {} geo {}", zero.alg_mult, zero.geo_mult));
    }
    let off: usize = recs
        .iter()
        .filter(|r| r.status != TypeStatus::ZeroEigenvalue && r.lambda.re.abs() > 1e-6 && r.lambda.im.abs() > 1e-6)
        .map(|r| r.alg_mult)
        .sum();
    if off != 4 {
        return Err(format!("{off} off-axis nonreal eigenvalues"));
    }
    let c = v.counts.as_ref().ok_or("counting bundle not applicable")?;
    let kappas = (c.imag_type1_pairs, c.nonreal_type2_pairs, c.interval_excess(), c.negative_linear_count);
    if kappas != (1, 2, Some(0), 3) || !c.balance_holds() {
        return Err(format!("kappa (I, II, excess, A) = {kappas:?}, balance {}", c.balance_holds()));
    }
    within(elapsed, 60.0)?;

    // The analytic zeros in the same window are discrete eigenvalues.
    let f = |z: Complex64| junction_charfn(z, 4.0, PI, 1.0);
    let w = RootWindow::new(-0.5, 6.0, -3.0, 3.0).map_err(|e| e.to_string())?;
    let s = search_zeros(&f, &w).map_err(|e| e.to_string())?;
    for z in s.zeros.iter().filter(|z| z.z.norm() > 1e-8) {
        let d = recs.iter().map(|r| (r.lambda - z.z).norm()).fold(f64::INFINITY, f64::min);
        if d > 2e-2 {
            return Err(format!("analytic zero {} has no eigenvalue within 2e-2 (nearest {d:.2e})", z.z));
        }
    }
    found.0.push(("junction q=4 cross-check window", s));
    Ok(format!("kappa I=1 II=2 excess=0 A=3, identity holds, dimension {}, {:.1} s", v.spec.n(), elapsed.as_secs_f64()))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = common::rng(3);
    let mut specs: Vec<(String, PencilSpec)> =
        ["W1.json", "W2.json", "W3.json"].iter().map(|n| (n.to_string(), common::fixture(n))).collect();
    for k in 0..50 {
        let n = rng.gen_range(1..=4);
        let p = common::random_condition_i(&mut rng, n);
        specs.push((format!("random #{k}"), PencilSpec::new(p).map_err(|e| e.to_string())?));
    }
    let mut worst = 0.0f64;
    for (name, spec) in &specs {
        let r = spectrum(spec, 1.0).map_err(|e| format!("{name}: {e}"))?;
        let ours = r.values_with_multiplicity();
        let roots = common::poly_roots(&common::det_polynomial(spec.pencil(), 1.0));
        let pairs = common::optimal_pairing(&ours, &roots)
            .ok_or_else(|| format!("{name}: {} eigenvalues vs {} roots", ours.len(), roots.len()))?;
        for (a, b) in pairs {
            let d = (a - b).norm();
            worst = worst.max(d);
            if d > 1e-6 {
                return Err(format!("{name}: {a} vs root {b}, distance {d:.2e}"));
            }
        }
        for rec in &r.records {
            let near = roots.iter().filter(|&&z| (z - rec.lambda).norm() <= 1e-5).count();
            if near != rec.alg_mult {
                return Err(format!("{name}: {} has alg {} but {near} roots", rec.lambda, rec.alg_mult));
            }
        }
    }
    Ok(format!("{} pencils, worst distance {worst:.2e}", specs.len()))
}

fn lemma_suite() -> Outcome {
    let mut rng = common::rng(4);
    for k in 0..100 {
        let n = rng.gen_range(1..=8);
        let spec = PencilSpec::new(common::random_condition_i(&mut rng, n)).map_err(|e| format!("#{k}: {e}"))?;
        let r = spectrum(&spec, 1.0).map_err(|e| format!("#{k}: {e}"))?;
        for c in [check_symmetry(&r), check_halfplane(&spec, &r), check_negative_semisimple(&r)] {
            if c.failed() {
                return Err(format!("random #{k} (n = {n}): {} {}", c.name, c.details));
            }
        }
    }
    for k in 0..20 {
        let (p, want) = common::kernel_engineered(&mut rng);
        let spec = PencilSpec::new(p).map_err(|e| format!("kernel #{k}: {e}"))?;
        let r = spectrum(&spec, 1.0).map_err(|e| format!("kernel #{k}: {e}"))?;
        let c = check_zero_multiplicity(&spec, &r, 1e-6).map_err(|e| format!("kernel #{k}: {e}"))?;
        let expected = expected_zero_multiplicity(&spec, 1e-6).map_err(|e| e.to_string())?;
        let got = r.zero_record().map_or(0, |z| z.alg_mult);
        if c.failed() || expected != want || got != want {
            return Err(format!("kernel #{k}: constructed {want}, computed kernel count {expected}, alg {got}"));
        }
    }
    Ok("100 random and 20 kernel-engineered pencils".into())
}

fn count_identity_suite() -> Outcome {
    let mut rng = common::rng(5);
    for k in 0..50 {
        let n = rng.gen_range(1..=6);
        let spec = PencilSpec::new(common::random_definite(&mut rng, n)).map_err(|e| format!("#{k}: {e}"))?;
        let id = count_identity(&spec).map_err(|e| format!("#{k}: {e}"))?;
        let rhs = 2 * id.kappa_a as i64 - id.kappa_c as i64;
        if !id.identity_holds || id.unpaired_positives as i64 != rhs {
            return Err(format!("#{k}: unpaired {} vs 2*{} - {}", id.unpaired_positives, id.kappa_a, id.kappa_c));
        }
        let pr = pair_spectrum(&spectrum(&spec, 1.0).map_err(|e| e.to_string())?);
        if !pr.failures.is_empty() {
            return Err(format!("#{k}: unpaired negatives {:?}", pr.failures));
        }
        if let Some(&(a, b)) = pr.pairs.iter().find(|&&(a, b)| a + b < -1e-8) {
            return Err(format!("#{k}: pair ({a}, {b}) sums below -1e-8"));
        }
    }
    Ok("50 pencils with M, G positive definite".into())
}

/// Real phase-normalized eigenvector for the record nearest `lambda`.
fn real_vector(spec: &PencilSpec, eta: f64, lambda: f64) -> Option<Vec<f64>> {
    let r = spectrum(spec, eta).ok()?;
    let rec = r.records.iter().min_by(|a, b| (a.lambda - lambda).norm().total_cmp(&(b.lambda - lambda).norm()))?;
    let v = rec.vectors.first()?;
    let pivot = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
    let phase = pivot.conj() / pivot.norm();
    Some(v.iter().map(|&x| (x * phase).re).collect())
}

/// Largest relative gap between `lambda_derivative` and centered differences
/// of the tracked real branches at grid points with `keep(η)`.
fn derivative_gap(spec: &PencilSpec, t: &TrajectorySet, keep: impl Fn(f64) -> bool) -> Result<(f64, usize), String> {
    let g = &t.eta_grid;
    let mut worst = 0.0f64;
    let mut used = 0;
    for b in &t.branches {
        for k in 1..g.len() - 1 {
            if !keep(g[k - 1]) || !keep(g[k + 1]) {
                continue;
            }
            let (Some(lm), Some(l0), Some(lp)) = (b.values[k - 1], b.values[k], b.values[k + 1]) else { continue };
            if [lm, l0, lp].iter().any(|z| z.im.abs() > 1e-10) {
                continue;
            }
            let (h1, h2) = (g[k] - g[k - 1], g[k + 1] - g[k]);
            let fd = (h1 * h1 * lp.re - h2 * h2 * lm.re + (h2 * h2 - h1 * h1) * l0.re) / (h1 * h2 * (h1 + h2));
            let y = real_vector(spec, g[k], l0.re).ok_or("no eigenvector")?;
            let d = lambda_derivative(spec, l0.re, &y, g[k]).map_err(|e| format!("eta {}: {e}", g[k]))?;
            worst = worst.max((fd - d).abs() / d.abs().max(1.0));
            used += 1;
        }
    }
    Ok((worst, used))
}

fn homotopy_fidelity() -> Outcome {
    let w1 = common::fixture("W1.json");
    let t = track(&w1, 0.5, 1.0, 201).map_err(|e| e.to_string())?;
    let branch = t
        .branches
        .iter()
        .find(|b| b.values[0].is_some_and(|z| (z + 2.0).norm() < 1e-6))
        .ok_or("no branch starting at -2")?;
    let mut dev = 0.0f64;
    for (k, &eta) in t.eta_grid.iter().enumerate() {
        let z = branch.values[k].ok_or_else(|| format!("branch missing at eta {eta}"))?;
        dev = dev.max((z - Complex64::new(-1.0 / eta, 0.0)).norm());
    }
    if dev > 1e-6 {
        return Err(format!("W1 branch deviates from -1/eta by {dev:.2e}"));
    }

    let w3 = common::fixture("W3.json");
    let t3 = track(&w3, 0.0, 1.0, 201).map_err(|e| e.to_string())?;
    let ev: Vec<_> = t3.events.iter().filter(|e| e.kind == EventKind::ComplexToReal).collect();
    let [e] = ev.as_slice() else {
        return Err(format!("{} complex-to-real events on W3", ev.len()));
    };
    let (de, dl) = ((e.eta_star - 0.6).abs(), (e.lambda_star - 0.3).norm());
    if de > 1e-4 || dl > 1e-4 {
        return Err(format!("W3 event at eta {} lambda {}", e.eta_star, e.lambda_star));
    }

    let (g1, n1) = derivative_gap(&w1, &t, |eta| eta <= 0.95)?;
    // The square-root branch point makes third derivatives large near the
    // event, so the difference quotient needs a finer grid there.
    let fine = track(&w3, 0.0, 1.0, 801).map_err(|e| e.to_string())?;
    let (g3, n3) = derivative_gap(&w3, &fine, |eta| (eta - 0.6).abs() >= 0.05)?;
    if g1.max(g3) > 1e-4 {
        return Err(format!("derivative relative gap {:.2e} (W1), {:.2e} (W3)", g1, g3));
    }
    Ok(format!(
        "W1 deviation {dev:.1e}; W3 event eta {:.7} lambda {:.7}; derivative gap {:.1e} over {} points",
        e.eta_star,
        e.lambda_star.re,
        g1.max(g3),
        n1 + n3
    ))
}

fn sampled_single_strings() -> Outcome {
    let mut rng = common::rng(7);
    for k in 0..10 {
        let a = rng.gen_range(1.0..3.0);
        let alpha = rng.gen_range(0.5..2.0);
        let values = common::random_potential(&mut rng, a, 200);
        let p = SlProblem::new(Variant::Single, Potential::Sampled { values }, a, alpha, 200);
        let (report, _) = run_string(&p, &StringOptions::default()).map_err(|e| format!("#{k}: {e}"))?;
        if report.has_failure() {
            return Err(format!("#{k} (a = {a:.3}, alpha = {alpha:.3}): {}", failures(&report)));
        }
    }
    Ok("10 sampled potentials, n = 200".into())
}

fn winding_conservation(found: &Searches) -> Outcome {
    if found.0.is_empty() {
        return Err("no searches recorded".into());
    }
    for (name, s) in &found.0 {
        if s.total_multiplicity() != s.winding {
            return Err(format!("{name}: multiplicities {} vs winding {}", s.total_multiplicity(), s.winding));
        }
    }
    let detail: Vec<String> = found.0.iter().map(|(n, s)| format!("{n}: {}", s.winding)).collect();
    Ok(detail.join(", "))
}

fn main() {
    let mut found = Searches::default();
    let mut results: Vec<(u8, &str, Outcome, Duration)> = Vec::new();
    let mut run = |id: u8, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        results.push((id, name, out, start.elapsed()));
        let (id, name, out, t) = results.last().unwrap();
        let (tag, msg) = match out {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!("{tag} criterion {id} [{name}] ({:.1} s): {msg}", t.as_secs_f64());
    };
    run(1, "analytic zero pattern", &mut || analytic_pattern(&mut found));
    run(2, "discrete double string", &mut || discrete_double(&mut found));
    run(3, "determinant oracle", &mut oracle_equivalence);
    run(4, "lemma property suite", &mut lemma_suite);
    run(5, "unpaired count identity", &mut count_identity_suite);
    run(6, "homotopy fidelity", &mut homotopy_fidelity);
    run(7, "sampled single strings", &mut sampled_single_strings);
    run(8, "winding conservation", &mut || winding_conservation(&found));
    let failed = results.iter().filter(|r| r.2.is_err()).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
