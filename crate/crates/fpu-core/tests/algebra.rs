//! Submultiplicativity of the arc and chain norms, and the boundary
//! behaviour of the high-mode double antiderivative.

mod common;

use common::{random_arc, random_chain};
use fpu_core::legendre;
use fpu_core::{ArcSpace, ChainSpace, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const D: usize = 31;

#[test]
fn arc_products_are_submultiplicative() {
    let space = ArcSpace::new(D).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..1000 {
        let f = random_arc(&mut rng, &space, i % 3 == 0);
        let g = random_arc(&mut rng, &space, i % 5 == 0);
        let fg = space.product(&f, &g).unwrap();
        let (nf, ng, nfg) = (space.norm(&f), space.norm(&g), space.norm(&fg));
        assert!(nfg <= nf * ng * (1.0 + 1e-12), "trial {i}: {nfg} > {nf} * {ng}");
    }
}

#[test]
fn chain_products_are_submultiplicative() {
    let cs = ChainSpace::new(ArcSpace::new(D).unwrap(), Rational::integer(2), 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..100 {
        let v = random_chain(&mut rng, &cs, (i % 2) as u8);
        let w = random_chain(&mut rng, &cs, ((i / 2) % 2) as u8);
        let vw = cs.product(&v, &w).unwrap();
        let (nv, nw, nvw) = (cs.norm(&v), cs.norm(&w), cs.norm(&vw));
        assert!(nvw <= nv * nw * (1.0 + 1e-12), "trial {i}: {nvw} > {nv} * {nw}");
    }
}

#[test]
fn double_antiderivative_vanishes_at_the_ends() {
    let space = ArcSpace::new(D).unwrap();
    for n in 2..=D {
        let g = space.d2_inv_high(&space.unit::<f64>(n)).unwrap();
        let (p0, d0) = legendre::eval_with_derivative(g.coeff.len() - 1, -0.5).unwrap();
        let (p1, d1) = legendre::eval_with_derivative(g.coeff.len() - 1, 0.5).unwrap();
        let dot = |c: &[f64], p: &[f64]| c.iter().zip(p).map(|(a, b)| a * b).sum::<f64>();
        for (what, v) in [("g(-1/2)", dot(&g.coeff, &p0)), ("g(1/2)", dot(&g.coeff, &p1)), ("g'(-1/2)", dot(&g.coeff, &d0)), ("g'(1/2)", dot(&g.coeff, &d1))] {
            assert!(v.abs() < 1e-12, "n={n}: {what} = {v:e}");
        }
        // and its second derivative is the input: check at an interior point
        let x = 0.123;
        let h = 1e-3;
        let e = |x: f64| space.eval(&g, x).unwrap();
        let second = (e(x + h) - 2.0 * e(x) + e(x - h)) / (h * h);
        assert!((second - legendre::eval(n, x).unwrap()).abs() < 1e-3 * (n * n) as f64, "n={n}");
    }
}
