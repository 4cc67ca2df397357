//! Newton solves of parameter rows and consistency of the derivative,
//! the approximate inverse and the products at the solutions.

use fpu_core::wave::{find_extrema, ExtremumKind, Profile, EXTREMUM_THRESHOLD};
use fpu_core::{Bump, Problem, Rational, Sequential, SolveConfig};

fn rat(s: &str) -> Rational {
    s.parse().unwrap()
}

fn row3() -> Problem {
    Problem::new(SolveConfig::new(3, Rational::ZERO, 1, Rational::integer(4), 1, 1, 1.4)).unwrap()
}

fn single_bump(p: &Problem, amp: f64) -> fpu_core::NewtonState {
    p.newton_solve(p.make_guess(&[Bump { center: 0.0, amplitude: amp }]), &Sequential).unwrap()
}

#[test]
fn row3_converges_quadratically() {
    let p = row3();
    let s = single_bump(&p, 1.3);
    assert!(s.converged);
    assert!(s.residual < 1e-10, "{}", s.residual);
    assert!(s.iterations <= 25);
    for w in s.history.windows(2) {
        if w[0] < 1e-4 && w[0] > 1e-8 {
            assert!(w[1] < w[0].powf(1.5), "{:?}", s.history);
        }
    }
    let ex = find_extrema(&Profile::new(p.space(), &s.w, 1), EXTREMUM_THRESHOLD);
    assert_eq!(ex.len(), 1);
    assert_eq!(ex[0].kind, ExtremumKind::PositiveMax);
}

#[test]
fn approximate_inverse_inverts() {
    let p = row3();
    let s = single_bump(&p, 1.3);
    let j = p.jacobian(&s.w, 0.0, &Sequential).unwrap();
    let m = p.build_m(&s.w, 0.0, &Sequential).unwrap();
    let n = j.nrows();
    let id = nalgebra::DMatrix::<f64>::identity(n, n);
    let err = (&id - &j) * (&id - &m.matrix) - &id;
    let norm = (0..n).map(|c| err.column(c).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    assert!(norm < 1e-8, "{norm:e}");
}

#[test]
fn derivative_matches_central_differences() {
    // analytic inputs keep the truncated modes negligible
    let p = row3();
    let cs = p.space();
    let gauss = |c: f64, a: f64| {
        let mut w = cs.zero::<f64>(0);
        for j in 0..cs.sites() {
            let g = |x: f64| a * (libm::exp(-(x - c) * (x - c)) + libm::exp(-(x + c) * (x + c)));
            w.center[j] = cs.arcs().project(|t| g(j as f64 + t));
        }
        cs.enforce_parity(&mut w);
        w
    };
    let w = gauss(0.0, 0.6);
    let h = gauss(0.7, 0.3);
    let lin = p.linearize(&w).unwrap();
    let dg = p.dg_apply(&lin, &h, 0.0).unwrap();
    let t = 1e-5;
    let shifted = |c: f64| {
        let mut v = w.clone();
        cs.axpy(&mut v, c, &h);
        v
    };
    let gp = p.g_map(&shifted(t), 0.0).unwrap();
    let gm = p.g_map(&shifted(-t), 0.0).unwrap();
    let fd = cs.scale(&cs.sub(&gp, &gm), 0.5 / t);
    let err = cs.norm(&cs.sub(&fd, &dg));
    assert!(err < 1e-7 * cs.norm(&dg), "{err:e}");
}

#[test]
fn cube_matches_pointwise_cube() {
    let p = row3();
    let s = single_bump(&p, 1.3);
    let cs = p.space();
    let c = cs.power(&s.w, 3).unwrap();
    for i in 0..50 {
        let x = -6.0 + 12.0 * i as f64 / 49.0;
        let v = cs.eval_plain(&s.w, x);
        assert!((cs.eval_plain(&c, x) - v * v * v).abs() < 1e-12, "x={x}");
    }
}

#[test]
fn row4_residual_and_row1_shape() {
    let p4 = Problem::new(SolveConfig::new(3, rat("1/2"), 1, Rational::integer(2), 3, 1, 1.0)).unwrap();
    let s4 = single_bump(&p4, 1.3);
    assert!(p4.residual(&s4.w, p4.mu_bar()).unwrap().1 < 1e-9);

    let p1 = Problem::new(SolveConfig::new(2, rat("1/4"), 1, Rational::integer(4), 1, 1, 1.1)).unwrap();
    let s1 = single_bump(&p1, 1.3);
    let ex = find_extrema(&Profile::new(p1.space(), &s1.w, 1), EXTREMUM_THRESHOLD);
    assert_eq!(ex.iter().map(|e| e.kind).collect::<Vec<_>>(), [ExtremumKind::PositiveMax]);
    let sup = ex[0].value.mid();
    assert!(sup > 1.0 && sup < 1.1, "{sup}");
}

#[test]
fn continuation_in_mu() {
    let p = Problem::new(SolveConfig::new(3, rat("-1/4"), 1, Rational::integer(4), 2, 1, 1.5)).unwrap();
    let s = single_bump(&p, 1.4);
    let c = p.continue_mu(s, -0.125, 4, &Sequential).unwrap();
    assert_eq!(c.mu, -0.125);
    assert!(c.residual < 1e-9);
}
