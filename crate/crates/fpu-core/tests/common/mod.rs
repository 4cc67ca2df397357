//! Oracles shared by the integration tests: exact rational polynomials in
//! `x` and direct quadrature of the tent convolution.
#![allow(dead_code)]

use fpu_core::legendre::gauss_legendre;
use fpu_core::{Arc, ArcSpace, Ball, Chain, ChainSpace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;
/// Ascending coefficients.
pub type Poly = Vec<Q>;

pub fn q(p: i64, r: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(r))
}

pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite")
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).cloned().unwrap_or_else(Q::zero) + b.get(i).cloned().unwrap_or_else(Q::zero)).collect())
}

pub fn scale(a: &Poly, c: &Q) -> Poly {
    trim(a.iter().map(|x| x * c).collect())
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn eval(a: &Poly, x: &Q) -> Q {
    a.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// `p(x + s)`.
pub fn shift(a: &Poly, s: &Q) -> Poly {
    let lin = vec![s.clone(), Q::one()];
    let mut out = vec![Q::zero()];
    for c in a.iter().rev() {
        out = add(&mul(&out, &lin), &vec![c.clone()]);
    }
    out
}

/// `P_n(2x)` by the three-term recurrence.
pub fn legendre(n: usize) -> Poly {
    let two_x = vec![Q::zero(), q(2, 1)];
    let (mut a, mut b) = (vec![Q::one()], two_x.clone());
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let k = k as i64;
        let next = add(&scale(&mul(&two_x, &b), &q(2 * k + 1, k + 1)), &scale(&a, &q(-k, k + 1)));
        a = b;
        b = next;
    }
    b
}

/// Coefficients of `p` in the basis `P_m(2x)`.
pub fn to_legendre(p: &Poly) -> Vec<Q> {
    let mut rest = p.clone();
    let deg = rest.len() - 1;
    let mut out = vec![Q::zero(); deg + 1];
    for m in (0..=deg).rev() {
        let lm = legendre(m);
        let c = rest.get(m).cloned().unwrap_or_else(Q::zero) / &lm[m];
        rest = add(&rest, &scale(&lm, &-c.clone()));
        out[m] = c;
    }
    out
}

/// `x -> integral_a^x (x - y) f(y) dy`.
pub fn second_antiderivative_from(f: &Poly, a: &Q) -> Poly {
    // integrate twice with zero value and slope at a
    let int = |p: &Poly| -> Poly {
        let mut out = vec![Q::zero()];
        out.extend(p.iter().enumerate().map(|(i, c)| c / Q::from_integer(BigInt::from(i as i64 + 1))));
        let v = eval(&out, a);
        out[0] -= v;
        trim(out)
    };
    int(&int(f))
}

pub fn abs_le(a: &Q, b: &Q) -> bool {
    a.abs() <= *b
}

/// Degree stays two below the working degree so the image is not truncated.
pub fn random_compact(cs: &ChainSpace, rng: &mut ChaCha8Rng, parity: u8) -> Chain<f64> {
    let mut w = cs.zero::<f64>(parity);
    let rho = cs.arcs().rho();
    for j in 0..5 {
        for n in 0..=cs.degree() - 2 {
            w.center[j].coeff[n] = rng.gen_range(-1.0..1.0) / rho.powi(n as i32 + 2);
        }
    }
    cs.enforce_parity(&mut w);
    w
}

/// `int kappa^-2 (kappa - |s|) w(x + s) ds`, split at the kinks of the integrand.
pub fn tent(cs: &ChainSpace, w: &Chain<f64>, kappa: f64, x: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(24);
    let mut cuts = vec![-kappa, 0.0, kappa];
    let mut b = (x - kappa - 0.5).ceil() + 0.5;
    while b < x + kappa {
        cuts.push(b - x);
        b += 1.0;
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    for seg in cuts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        for (y, wt) in nodes.iter().zip(&weights) {
            let s = c + h * y;
            total += h * wt * (kappa - s.abs()) / (kappa * kappa) * cs.eval_plain(w, x + s);
        }
    }
    total
}

/// `A_kappa^2 P_n` on site `d`, as Legendre coefficients in the local variable.
pub fn stencil_oracle(n: usize, kappa: i64, d: i64) -> Vec<Q> {
    let f = legendre(n);
    let half = q(1, 2);
    let inner = second_antiderivative_from(&f, &-half.clone());
    // beyond the support F is linear
    let d1 = {
        let mut der: Poly = inner.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer((i as i64).into())).collect();
        if der.is_empty() {
            der.push(Q::zero());
        }
        eval(&der, &half)
    };
    let right = vec![eval(&inner, &half) - &d1 * &half, d1];
    let piece = |e: i64| -> Poly {
        match e.signum() {
            -1 => vec![Q::zero()],
            0 => inner.clone(),
            _ => shift(&right, &Q::from_integer(e.into())),
        }
    };
    let g = add(&add(&piece(d + kappa), &scale(&piece(d), &q(-2, 1))), &piece(d - kappa));
    let g = scale(&g, &q(1, kappa * kappa));
    to_legendre(&g)
}

pub fn random_arc(rng: &mut ChaCha8Rng, space: &ArcSpace, bands: bool) -> Arc<Ball> {
    let mut a = space.zero::<Ball>();
    let decay: f64 = rng.gen_range(0.3..0.95);
    for (n, c) in a.coeff.iter_mut().enumerate() {
        let mid = rng.gen_range(-1.0..1.0) * decay.powi(n as i32);
        let rad = if rng.gen_bool(0.2) { rng.gen_range(0.0..1e-8) } else { 0.0 };
        *c = Ball::new(mid, rad).unwrap();
    }
    if bands {
        for b in a.band.iter_mut() {
            if rng.gen_bool(0.1) {
                *b = rng.gen_range(0.0..1e-6);
            }
        }
    }
    a
}

pub fn random_chain(rng: &mut ChaCha8Rng, cs: &ChainSpace, parity: u8) -> Chain<Ball> {
    let mut w = cs.zero::<Ball>(parity);
    let width = rng.gen_range(1..cs.sites());
    for j in 0..width {
        w.center[j] = random_arc(rng, cs.arcs(), j % 4 == 1);
        for c in w.center[j].coeff.iter_mut() {
            *c = *c * Ball::point(0.5f64.powi(j as i32));
        }
    }
    if rng.gen_bool(0.5) {
        for c in w.tail.coeff.iter_mut().step_by(3) {
            *c = rng.gen_range(0.0..1e-9);
        }
    }
    cs.enforce_parity(&mut w);
    w
}
