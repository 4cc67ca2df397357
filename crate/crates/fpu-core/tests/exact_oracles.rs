//! Product coefficients and low-mode stencils against exact rational algebra.

mod common;

use common::*;
use fpu_core::aop::aa_low;
use fpu_core::legendre::Adams;
use num_traits::{One, Zero};

fn contains(b: fpu_core::Ball, x: &Q) -> bool {
    abs_le(&(x - from_f64(b.mid())), &from_f64(b.rad()))
}

#[test]
fn adams_sums_enclose_one() {
    // P_k(1) P_l(1) = 1
    let a = Adams::new(80);
    for k in 0..=40usize {
        for l in 0..=40 {
            let mut s = fpu_core::Ball::ZERO;
            for m in k.abs_diff(l)..=k + l {
                s = s + a.get(k, l, m).unwrap();
            }
            assert!(s.contains(1.0), "k={k} l={l}: {s:?}");
        }
    }
}

#[test]
fn adams_matches_symbolic_products() {
    let a = Adams::new(24);
    let polys: Vec<Poly> = (0..=12).map(legendre).collect();
    for k in 0..=12 {
        for l in 0..=12 {
            let exact = to_legendre(&mul(&polys[k], &polys[l]));
            for m in 0..=24 {
                let want = exact.get(m).cloned().unwrap_or_else(Q::zero);
                let got = a.get(k, l, m).unwrap();
                assert!(contains(got, &want), "C({k},{l},{m}) = {want}, got {got:?}");
                assert!(got.rad() <= 1e-13 * (1.0 + got.mid().abs()), "C({k},{l},{m}) radius {}", got.rad());
            }
        }
    }
}

#[test]
fn low_mode_stencils_are_exact() {
    for kappa in [1usize, 2] {
        for n in 0..2 {
            let s = aa_low(n, kappa).unwrap();
            let k = kappa as i64;
            for d in -k - 2..=k + 2 {
                let want = stencil_oracle(n, k, d);
                let got = s.iter().find(|(o, _)| *o as i64 == d).map(|(_, r)| r.to_vec());
                for m in 0..want.len().max(4) {
                    let w = want.get(m).cloned().unwrap_or_else(Q::zero);
                    let g = got.as_ref().and_then(|r| r.get(m)).map_or(Q::zero(), |r| q(r.num(), r.den()));
                    assert_eq!(g, w, "kappa={kappa} n={n} d={d} m={m}");
                }
            }
        }
    }
    // the oracle itself reproduces the unit mass of the tent
    let total: Q = (-1..=1).map(|d| stencil_oracle(0, 1, d)[0].clone()).fold(Q::zero(), |a, b| a + b);
    assert!(total.is_one());
}
