//! Scaled Legendre polynomials `P_n(2x)` on `[-1/2, 1/2]`, their product
//! linearization coefficients and the antiderivative coefficient formulas.

use crate::ball::Ball;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegendreError {
    /// Argument outside `[-1/2, 1/2]` or mode index outside the formula's range.
    Domain,
    /// Index beyond the configured table bound.
    Capacity { index: usize, bound: usize },
}

impl fmt::Display for LegendreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LegendreError::Domain => f.write_str("argument outside the admissible domain"),
            LegendreError::Capacity { index, bound } => {
                write!(f, "Legendre index {index} exceeds the table bound {bound}")
            }
        }
    }
}

/// Largest mode index tabulated for a working degree `d`.
pub const fn degree_bound(d: usize) -> usize {
    4 * d + 8
}

fn check_x(x: f64) -> Result<(), LegendreError> {
    if x.abs() <= 0.5 {
        Ok(())
    } else {
        Err(LegendreError::Domain)
    }
}

/// Value of the scaled polynomial of degree `n` at `x`.
pub fn eval(n: usize, x: f64) -> Result<f64, LegendreError> {
    Ok(eval_upto(n, x)?[n])
}

/// Values of all scaled polynomials of degree `0..=nmax` at `x`.
pub fn eval_upto(nmax: usize, x: f64) -> Result<Vec<f64>, LegendreError> {
    check_x(x)?;
    let y = 2.0 * x;
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax >= 1 {
        out.push(y);
    }
    for n in 1..nmax {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0) * y * out[n] - nf * out[n - 1]) / (nf + 1.0);
        out.push(next);
    }
    Ok(out)
}

/// Enclosures of all scaled polynomials of degree `0..=nmax` at `x`.
///
/// The three-term recurrence run in ball arithmetic inflates radii
/// geometrically, so the values come from the positive expansion
/// `P_n(cos t) = sum_k a_k a_{n-k} cos((n-2k) t)` with
/// `a_k = binom(2k, k) / 4^k`. The cosines are real parts of powers of the
/// unit complex number `y + i sqrt(1 - y^2)` held as a disk, whose radius
/// grows only linearly.
pub fn eval_upto_ball(nmax: usize, x: f64) -> Result<Vec<Ball>, LegendreError> {
    check_x(x)?;
    let y = 2.0 * x;
    let yb = Ball::point(y);
    // (1 - y)(1 + y) keeps a relative error near |y| = 1 where sqrt is steep
    let s = ((Ball::ONE - yb) * (Ball::ONE + yb)).sqrt();
    let base = Disk { re: y, im: s.mid(), rad: s.rad() };
    let mut cheb = Vec::with_capacity(nmax + 1);
    let mut z = Disk { re: 1.0, im: 0.0, rad: 0.0 };
    cheb.push(Ball::ONE);
    for _ in 1..=nmax {
        z = z.mul(base);
        cheb.push(Ball::from_bounds(z.re, z.re).widen(z.rad).clamp_unit());
    }
    let mut a = Vec::with_capacity(nmax + 1);
    a.push(Ball::ONE);
    for k in 1..=nmax {
        let r = Ball::from_rational(2 * k as i64 - 1, 2 * k as i64).expect("nonzero");
        let next = a[k - 1] * r;
        a.push(next);
    }
    let mut out = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let mut acc = Ball::ZERO;
        for k in 0..=n {
            acc = acc + a[k] * a[n - k] * cheb[n.abs_diff(2 * k)];
        }
        out.push(acc.clamp_unit());
    }
    Ok(out)
}

/// Complex disk `{z : |z - (re + i im)| <= rad}`.
#[derive(Clone, Copy)]
struct Disk {
    re: f64,
    im: f64,
    rad: f64,
}

impl Disk {
    fn modulus_up(self) -> f64 {
        use crate::ball::add_up;
        libm::sqrt(add_up(self.re * self.re, self.im * self.im).next_up()).next_up()
    }

    fn mul(self, o: Disk) -> Disk {
        use crate::ball::{add_up, mul_up, ETA, UNIT_ROUNDOFF};
        let re = self.re * o.re - self.im * o.im;
        let im = self.re * o.im + self.im * o.re;
        // each component has at most three roundings on terms bounded by this sum
        let size = add_up(
            add_up((self.re * o.re).abs(), (self.im * o.im).abs()),
            add_up((self.re * o.im).abs(), (self.im * o.re).abs()),
        );
        let round = add_up(mul_up(4.0 * UNIT_ROUNDOFF, size), 4.0 * ETA);
        let prop = add_up(
            add_up(mul_up(self.modulus_up(), o.rad), mul_up(self.rad, o.modulus_up())),
            mul_up(self.rad, o.rad),
        );
        Disk { re, im, rad: add_up(prop, round) }
    }
}

/// Values and derivatives (with respect to `x`) of degrees `0..=nmax`.
pub fn eval_with_derivative(nmax: usize, x: f64) -> Result<(Vec<f64>, Vec<f64>), LegendreError> {
    let p = eval_upto(nmax, x)?;
    let mut dp = Vec::with_capacity(nmax + 1);
    dp.push(0.0);
    if nmax >= 1 {
        dp.push(2.0);
    }
    // P'_{n+1}(y) = P'_{n-1}(y) + (2n+1) P_n(y); the chain rule adds a factor 2.
    for n in 1..nmax {
        let v = dp[n - 1] + 2.0 * (2.0 * n as f64 + 1.0) * p[n];
        dp.push(v);
    }
    Ok((p, dp))
}

/// Bound on `|d/dx P_n(2x)|` over `[-1/2, 1/2]`.
pub fn derivative_bound(n: usize) -> f64 {
    (n * (n + 1)) as f64
}

/// Bound on `|d^2/dx^2 P_n(2x)|` over `[-1/2, 1/2]`.
pub fn second_derivative_bound(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    ((n - 1) * n * (n + 1) * (n + 2)) as f64 / 2.0
}

/// Product linearization coefficients `C_{k,l,m}` with
/// `P_k P_l = sum_m C_{k,l,m} P_m`.
#[derive(Clone, Debug)]
pub struct Adams {
    bound: usize,
    // a(n) = 2^-n binom(2n, n)
    a: Vec<Ball>,
}

impl Adams {
    /// Table valid for every index up to `bound`.
    pub fn new(bound: usize) -> Adams {
        let top = (3 * bound) / 2 + 1;
        let mut a = Vec::with_capacity(top + 1);
        a.push(Ball::ONE);
        for n in 1..=top {
            let ratio = Ball::from_rational(2 * n as i64 - 1, n as i64).expect("nonzero");
            let next = a[n - 1] * ratio;
            a.push(next);
        }
        Adams { bound, a }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Enclosure of `C_{k,l,m}`; exactly zero off the parity and triangle support.
    pub fn get(&self, k: usize, l: usize, m: usize) -> Result<Ball, LegendreError> {
        for idx in [k, l, m] {
            if idx > self.bound {
                return Err(LegendreError::Capacity { index: idx, bound: self.bound });
            }
        }
        if (k + l + m) % 2 == 1 || m > k + l || m + l < k || m + k < l {
            return Ok(Ball::ZERO);
        }
        let s = (k + l + m) / 2;
        let num = self.a[s - k] * self.a[s - l] * self.a[s - m];
        let frac = Ball::from_rational(2 * m as i64 + 1, 2 * s as i64 + 1).expect("nonzero");
        let c = num.checked_div(self.a[s]).expect("a(s) >= 1") * frac;
        // the exact value is positive; drop the part of the enclosure below zero
        let lo = c.lower().max(0.0);
        Ok(Ball::from_bounds(lo, c.upper()))
    }
}

/// Coefficients of the supported first antiderivative of `P_n`:
/// `(1/(4n+2)) P_{n+1} - (1/(4n+2)) P_{n-1}`.
pub fn d1_high_coeffs(n: usize) -> Result<(Ball, Ball), LegendreError> {
    if n == 0 {
        return Err(LegendreError::Domain);
    }
    let c = Ball::from_rational(1, 4 * n as i64 + 2).expect("nonzero");
    Ok((c, -c))
}

/// Coefficients `(C+, C-, -(C+ + C-))` of the double antiderivative of `P_n`
/// on `P_{n+2}`, `P_{n-2}` and `P_n`; it vanishes with its derivative at `±1/2`.
pub fn d2_high_coeffs(n: usize) -> Result<(Ball, Ball, Ball), LegendreError> {
    if n < 2 {
        return Err(LegendreError::Domain);
    }
    let n = n as i64;
    let plus = Ball::from_rational(1, 4 * (2 * n + 1) * (2 * n + 3)).expect("nonzero");
    let minus = Ball::from_rational(1, 4 * (2 * n + 1) * (2 * n - 1)).expect("nonzero");
    // -(C+ + C-) = -1 / (2 (2n-1)(2n+3)) exactly
    let diag = -Ball::from_rational(1, 2 * (2 * n - 1) * (2 * n + 3)).expect("nonzero");
    Ok((plus, minus, diag))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut y = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, y);
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * y * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (y * p1 - p0) / (y * y - 1.0);
            let dy = p1 / dp;
            y -= dy;
            if dy.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(y);
        weights.push(2.0 / ((1.0 - y * y) * dp * dp));
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_closed_forms() {
        assert_eq!(eval(0, 0.3).unwrap(), 1.0);
        assert_eq!(eval(2, 0.0).unwrap(), -0.5);
        for n in 0..=50 {
            assert!((eval(n, 0.5).unwrap() - 1.0).abs() < 1e-13);
        }
        assert_eq!(eval(3, 0.6), Err(LegendreError::Domain));
    }

    #[test]
    fn ball_values_enclose_plain_ones() {
        for i in 0..=20 {
            let x = -0.5 + i as f64 / 20.0;
            let p = eval_upto(40, x).unwrap();
            let b = eval_upto_ball(40, x).unwrap();
            for n in 0..=40 {
                assert!(b[n].contains(p[n]), "n={n} x={x}");
                assert!(b[n].rad() < 1e-12, "n={n} rad={}", b[n].rad());
            }
        }
    }

    #[test]
    fn derivative_recurrence() {
        let (_, dp) = eval_with_derivative(6, 0.2).unwrap();
        // d/dx P_2(2x) = 12x
        assert!((dp[2] - 12.0 * 0.2).abs() < 1e-14);
        for n in 0..=30 {
            let (_, d) = eval_with_derivative(n, 0.5).unwrap();
            assert!((d[n] - derivative_bound(n)).abs() < 1e-9 * (1.0 + derivative_bound(n)));
        }
    }

    #[test]
    fn adams_small_values() {
        let t = Adams::new(20);
        assert!(t.get(0, 0, 0).unwrap().contains(1.0));
        assert!(t.get(1, 1, 0).unwrap().contains(1.0 / 3.0));
        assert!(t.get(1, 1, 2).unwrap().contains(2.0 / 3.0));
        assert_eq!(t.get(1, 1, 1).unwrap(), Ball::ZERO);
        assert_eq!(t.get(1, 4, 2).unwrap(), Ball::ZERO);
        assert!(matches!(t.get(21, 0, 21), Err(LegendreError::Capacity { .. })));
    }

    #[test]
    fn antiderivative_coefficients() {
        let (a, b) = d1_high_coeffs(1).unwrap();
        assert!(a.contains(1.0 / 6.0) && b.contains(-1.0 / 6.0));
        let (p, m, d) = d2_high_coeffs(2).unwrap();
        assert!(p.contains(1.0 / 140.0) && m.contains(1.0 / 60.0) && d.contains(-1.0 / 42.0));
        assert!((p + m + d).contains(0.0));
        assert_eq!(d2_high_coeffs(1), Err(LegendreError::Domain));
        for n in 2..=100 {
            let (p, m, d) = d2_high_coeffs(n).unwrap();
            assert!(p.lower() > 0.0 && m.lower() > 0.0 && d.upper() < 0.0);
        }
    }

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m4 - 0.4).abs() < 1e-14);
    }
}
