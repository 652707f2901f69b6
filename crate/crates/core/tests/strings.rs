mod common;

use std::f64::consts::PI;

use qpencil::properties::{run_string, StringOptions};
use qpencil::sturm::{discretize, Potential, SlProblem, Variant};

#[test]
fn single_constant_potential_passes() {
    let p = SlProblem::new(Variant::Single, Potential::Const { value: 4.0 }, PI, 1.0, 200);
    let (report, v) = run_string(&p, &StringOptions::default()).unwrap();
    assert!(!report.has_failure(), "{:#?}", report.failures().collect::<Vec<_>>());
    assert_eq!(v.spec.n(), 201);
    assert!(v.spectrum.records.iter().all(|r| r.type1_mult == 0));
}

#[test]
fn sampled_potentials_pass() {
    let mut rng = common::rng(17);
    for _ in 0..3 {
        let values = common::random_potential(&mut rng, 2.0, 120);
        let p = SlProblem::new(Variant::Single, Potential::Sampled { values }, 2.0, 0.7, 120);
        let (report, _) = run_string(&p, &StringOptions::default()).unwrap();
        assert!(!report.has_failure(), "{:#?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn double_sampled_constant_equals_const() {
    let n = 40;
    let c = SlProblem::new(Variant::Double, Potential::Const { value: 1.5 }, 1.0, 1.0, n);
    let s = SlProblem { q: Potential::Sampled { values: vec![1.5; n + 1] }, ..c.clone() };
    let (a, b) = (discretize(&c).unwrap(), discretize(&s).unwrap());
    assert_eq!(a.pencil(), b.pencil());
}

#[test]
fn wrong_sample_count_rejected() {
    let p = SlProblem::new(Variant::Single, Potential::Sampled { values: vec![0.0; 5] }, 1.0, 1.0, 10);
    assert!(discretize(&p).is_err());
}
