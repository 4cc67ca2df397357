//! End-to-end certificates on the row with `m = 3`, `mu = 0`, `r = 4`.

use fpu_core::validate::{certify, make_partition, CONTRACTION_LIMIT};
use fpu_core::{Arc, Bump, Chain, Clause, Problem, ProfileExpect, Rational, Sequential, SolveConfig};

fn problem(degree: usize) -> Problem {
    let mut cfg = SolveConfig::new(3, Rational::ZERO, 1, Rational::integer(4), 1, 1, 1.4);
    cfg.degree = degree;
    Problem::new(cfg).unwrap()
}

fn solved(p: &Problem) -> Chain<f64> {
    p.newton_solve(p.make_guess(&[Bump { center: 0.0, amplitude: 1.3 }]), &Sequential).unwrap().w
}

/// The same function in a space of higher degree.
fn pad(w: &Chain<f64>, degree: usize) -> Chain<f64> {
    let grow = |a: &Arc<f64>| {
        let mut coeff = a.coeff.clone();
        coeff.resize(degree + 1, 0.0);
        Arc { coeff, band: vec![0.0; degree + 3] }
    };
    let mut tail = w.tail.clone();
    tail.coeff.resize(degree + 1, 0.0);
    tail.band.resize(degree + 3, 0.0);
    Chain { parity: w.parity, center: w.center.iter().map(grow).collect(), tail }
}

#[test]
fn row3_certifies_and_perturbation_fails() {
    let p = problem(31);
    let w = solved(&p);
    let expect = ProfileExpect { extrema: 1, sup_base: 1.3 };
    let c = certify(&p, &w, libm::ldexp(1.0, -40), &Sequential, Some(&expect)).unwrap();
    assert!(c.pass, "{:?}", c.failures);
    assert!(c.eps < 1e-8);
    assert!(c.k < CONTRACTION_LIMIT);
    assert!(c.eps + c.k * c.delta < c.delta);
    assert!(c.delta < 8.0 * c.eps);
    assert!(c.delta_prime < libm::ldexp(1.0, -20));
    assert_eq!(c.bounds.len(), make_partition(&p).len());
    assert!(c.profile.as_ref().is_some_and(|v| v.pass));

    let mut bad = w.clone();
    bad.center[1].coeff[2] += 1e-2;
    let c = certify(&p, &bad, libm::ldexp(1.0, -40), &Sequential, Some(&expect)).unwrap();
    assert!(!c.pass);
    assert!(c.failures.contains(&Clause::Epsilon));

    // too wide a parameter interval
    let c = certify(&p, &w, 0.1, &Sequential, None).unwrap();
    assert!(c.failures.contains(&Clause::Epsilon));
}

#[test]
fn higher_degree_keeps_the_certificate() {
    let p = problem(31);
    let w = solved(&p);
    let q = problem(39);
    let c = certify(&q, &pad(&w, 39), libm::ldexp(1.0, -40), &Sequential, None).unwrap();
    assert!(c.pass, "{:?} eps={} K={}", c.failures, c.eps, c.k);
}
