//! Analytic arcs on `I0 = [-1/2, 1/2]`: truncated Legendre series plus
//! norm-bounded error bands.
//!
//! An `Arc<S>` of degree `D` stands for every function
//! `sum_{n<=D} c_n P_n + sum_{m<=D+2} rho^m E_m` where `c_n` lies in
//! `coeff[n]`, `E_m` has only modes `>= m` of the parity of `m`, and
//! `||E_m|| <= band[m]`. In plain mode the bands stay zero.

use crate::ball::{add_up, div_up, mul_up, Ball};
use crate::legendre::{self, degree_bound, Adams, LegendreError};
use crate::scalar::Scalar;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// The default weight `rho = 17/16`.
pub const RHO: (i64, i64) = (17, 16);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcError {
    /// Arcs of different degree or band layout.
    Shape,
    /// Input to the high-mode double antiderivative has content in modes 0 or 1.
    LowModeContent,
    /// Evaluation outside `I0`.
    Domain,
    /// Invalid space parameters.
    Config,
}

impl fmt::Display for ArcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArcError::Shape => "arc shapes do not match",
            ArcError::LowModeContent => "modes 0 and 1 must be empty",
            ArcError::Domain => "evaluation point outside [-1/2, 1/2]",
            ArcError::Config => "degree must be odd and greater than 1",
        };
        f.write_str(s)
    }
}

impl From<LegendreError> for ArcError {
    fn from(_: LegendreError) -> Self {
        ArcError::Domain
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arc<S> {
    pub coeff: Vec<S>,
    pub band: Vec<f64>,
}

impl<S: Scalar> Arc<S> {
    /// Degree of the stored coefficient vector.
    pub fn degree(&self) -> usize {
        self.coeff.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.iter().all(|c| c.is_zero()) && self.band.iter().all(|&b| b == 0.0)
    }

    pub fn has_bands(&self) -> bool {
        self.band.iter().any(|&b| b != 0.0)
    }

    /// `self += c * g` on the coefficients; bands grow by `|c| * band(g)`.
    pub fn axpy(&mut self, c: S, g: &Arc<S>) {
        let n = self.coeff.len().min(g.coeff.len());
        for i in 0..n {
            if !g.coeff[i].is_zero() {
                self.coeff[i] = self.coeff[i] + c * g.coeff[i];
            }
        }
        if S::RIGOROUS && g.has_bands() {
            let cm = c.mag();
            for (b, &gb) in self.band.iter_mut().zip(&g.band) {
                if gb != 0.0 {
                    *b = add_up(*b, mul_up(cm, gb));
                }
            }
        }
    }

    pub fn add_assign(&mut self, g: &Arc<S>) {
        for (a, &b) in self.coeff.iter_mut().zip(&g.coeff) {
            if !b.is_zero() {
                *a = *a + b;
            }
        }
        for (a, &b) in self.band.iter_mut().zip(&g.band) {
            if b != 0.0 {
                *a = add_up(*a, b);
            }
        }
    }

    /// Converts to an enclosure arc (exact for plain coefficients).
    pub fn to_ball(&self) -> Arc<Ball> {
        Arc { coeff: self.coeff.iter().map(|c| c.to_ball()).collect(), band: self.band.clone() }
    }
}

impl Arc<Ball> {
    /// Midpoint coefficients, dropping radii and bands.
    pub fn mid(&self) -> Arc<f64> {
        Arc {
            coeff: self.coeff.iter().map(|c| c.mid()).collect(),
            band: vec![0.0; self.band.len()],
        }
    }
}

/// Shared tables for arcs of one degree and weight.
#[derive(Clone, Debug)]
pub struct ArcSpace {
    degree: usize,
    rho: f64,
    rho_ball: Ball,
    rho_pow: Vec<f64>,
    rho_pow_up: Vec<f64>,
    rho_pow_down: Vec<f64>,
    rho_inv_pow: Vec<Ball>,
    adams: Adams,
    prod_start: Vec<usize>,
    prod_plain: Vec<f64>,
    prod_ball: Vec<Ball>,
    overflow_up: Vec<f64>,
    d2_plain: Vec<[f64; 3]>,
    d2_ball: Vec<[Ball; 3]>,
    band_d2_up: Vec<f64>,
}

impl ArcSpace {
    /// Space of degree `degree` with `rho = 17/16`.
    pub fn new(degree: usize) -> Result<ArcSpace, ArcError> {
        ArcSpace::with_rho(degree, RHO.0, RHO.1)
    }

    /// Space with weight `rho = p/q >= 1`.
    pub fn with_rho(degree: usize, p: i64, q: i64) -> Result<ArcSpace, ArcError> {
        if degree < 3 || degree % 2 == 0 || q <= 0 || p < q {
            return Err(ArcError::Config);
        }
        let d = degree;
        let rho_ball = Ball::from_rational(p, q).map_err(|_| ArcError::Config)?;
        let rho = rho_ball.mid();
        let top = 2 * d + 4;
        let mut rho_pow = vec![1.0; top + 1];
        let mut rho_pow_up = vec![1.0; top + 1];
        let mut rho_pow_down = vec![1.0; top + 1];
        let mut rho_inv_pow = vec![Ball::ONE; top + 1];
        let inv = rho_ball.recip().map_err(|_| ArcError::Config)?;
        let mut acc = Ball::ONE;
        for n in 1..=top {
            acc = acc * rho_ball;
            rho_pow[n] = rho_pow[n - 1] * rho;
            rho_pow_up[n] = acc.upper();
            rho_pow_down[n] = acc.lower();
            rho_inv_pow[n] = rho_inv_pow[n - 1] * inv;
        }
        let adams = Adams::new(degree_bound(d));
        let mut prod_start = Vec::with_capacity((d + 1) * (d + 1));
        let mut prod_plain = Vec::new();
        let mut prod_ball = Vec::new();
        let mut overflow_up = Vec::with_capacity((d + 1) * (d + 1));
        for k in 0..=d {
            for l in 0..=d {
                prod_start.push(prod_plain.len());
                let lo = k.abs_diff(l);
                let mut m = lo;
                while m <= (k + l).min(d) {
                    let c = adams.get(k, l, m).expect("within bound");
                    prod_plain.push(c.mid());
                    prod_ball.push(c);
                    m += 2;
                }
                let mut ovf = Ball::ZERO;
                while m <= k + l {
                    if m > d {
                        let c = adams.get(k, l, m).expect("within bound");
                        ovf = ovf + c * Ball::point(rho_pow_up[m]);
                    }
                    m += 2;
                }
                overflow_up.push(ovf.upper());
            }
        }
        let mut d2_plain = vec![[0.0; 3]; d + 1];
        let mut d2_ball = vec![[Ball::ZERO; 3]; d + 1];
        for n in 2..=d {
            let (a, b, c) = legendre::d2_high_coeffs(n).expect("n >= 2");
            d2_plain[n] = [a.mid(), b.mid(), c.mid()];
            d2_ball[n] = [a, b, c];
        }
        // band m >= 2 maps into band m-2 with factor F_m rho^2, where
        // F_m = C+ rho^2 + C- rho^-2 + C+ + C- bounds D^-2 on modes >= m.
        let mut band_d2_up = vec![0.0; d + 3];
        for m in 2..=d + 2 {
            let (a, b, _) = legendre::d2_high_coeffs(m).expect("m >= 2");
            let r2 = rho_ball * rho_ball;
            let f = a * r2 + b * rho_inv_pow[2] + a + b;
            band_d2_up[m] = (f * r2).upper();
        }
        Ok(ArcSpace {
            degree,
            rho,
            rho_ball,
            rho_pow,
            rho_pow_up,
            rho_pow_down,
            rho_inv_pow,
            adams,
            prod_start,
            prod_plain,
            prod_ball,
            overflow_up,
            d2_plain,
            d2_ball,
            band_d2_up,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn rho_ball(&self) -> Ball {
        self.rho_ball
    }

    pub fn adams(&self) -> &Adams {
        &self.adams
    }

    /// Upper bound of `rho^n`.
    #[inline]
    pub fn rho_pow_up(&self, n: usize) -> f64 {
        self.rho_pow_up[n]
    }

    /// Enclosure of `rho^-n`.
    #[inline]
    pub fn rho_inv_pow(&self, n: usize) -> Ball {
        self.rho_inv_pow[n]
    }

    /// `rho^n` rounded to nearest, for plain-mode weights.
    #[inline]
    pub fn rho_pow(&self, n: usize) -> f64 {
        self.rho_pow[n]
    }

    pub fn band_len(&self) -> usize {
        self.degree + 3
    }

    pub fn zero<S: Scalar>(&self) -> Arc<S> {
        Arc { coeff: vec![S::ZERO; self.degree + 1], band: vec![0.0; self.band_len()] }
    }

    /// The pure mode `P_n`.
    pub fn unit<S: Scalar>(&self, n: usize) -> Arc<S> {
        let mut a = self.zero();
        a.coeff[n] = S::ONE;
        a
    }

    pub fn check_shape<S: Scalar>(&self, f: &Arc<S>) -> Result<(), ArcError> {
        if f.coeff.len() == self.degree + 1 && f.band.len() == self.band_len() {
            Ok(())
        } else {
            Err(ArcError::Shape)
        }
    }

    /// Upper bound on the weighted l1 norm over the enclosure.
    pub fn norm<S: Scalar>(&self, f: &Arc<S>) -> f64 {
        if !S::RIGOROUS {
            return f.coeff.iter().enumerate().map(|(n, c)| c.mag() * self.rho_pow[n]).sum();
        }
        let mut s = 0.0;
        for (n, c) in f.coeff.iter().enumerate() {
            if !c.is_zero() {
                s = add_up(s, mul_up(c.mag(), self.rho_pow_up[n]));
            }
        }
        add_up(s, self.band_content(f))
    }

    /// Upper bound of `sum_m rho^m band[m]`.
    pub fn band_content<S: Scalar>(&self, f: &Arc<S>) -> f64 {
        let mut s = 0.0;
        for (m, &b) in f.band.iter().enumerate() {
            if b != 0.0 {
                s = add_up(s, mul_up(b, self.rho_pow_up[m]));
            }
        }
        s
    }

    /// Norms split into (even coefficients, odd coefficients, even bands, odd bands).
    fn norm_parts<S: Scalar>(&self, f: &Arc<S>) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (n, c) in f.coeff.iter().enumerate() {
            if !c.is_zero() {
                out[n & 1] = add_up(out[n & 1], mul_up(c.mag(), self.rho_pow_up[n]));
            }
        }
        for (m, &b) in f.band.iter().enumerate() {
            if b != 0.0 {
                out[2 + (m & 1)] = add_up(out[2 + (m & 1)], mul_up(b, self.rho_pow_up[m]));
            }
        }
        out
    }

    /// Adds a function of the given parity and norm `<= content` to the
    /// lowest parity-consistent band at index `>= from`.
    #[inline]
    fn push_band(&self, band: &mut [f64], from: usize, parity: usize, content: f64) {
        if content == 0.0 {
            return;
        }
        let idx = if from % 2 == parity { from } else { from + 1 };
        band[idx] = add_up(band[idx], div_up(content, self.rho_pow_down[idx]));
    }

    /// Pointwise product. Overflow above the degree and every band
    /// interaction is absorbed into bands in rigorous mode and dropped in
    /// plain mode.
    pub fn product<S: Scalar>(&self, f: &Arc<S>, g: &Arc<S>) -> Result<Arc<S>, ArcError> {
        self.check_shape(f)?;
        self.check_shape(g)?;
        Ok(self.mul(f, g))
    }

    pub(crate) fn mul<S: Scalar>(&self, f: &Arc<S>, g: &Arc<S>) -> Arc<S> {
        let d = self.degree;
        let mut out = self.zero::<S>();
        let mut ovf = [0.0f64; 2];
        for k in 0..=d {
            let fk = f.coeff[k];
            if fk.is_zero() {
                continue;
            }
            for l in 0..=d {
                let gl = g.coeff[l];
                if gl.is_zero() {
                    continue;
                }
                let p = fk * gl;
                let idx = k * (d + 1) + l;
                let base = self.prod_start[idx];
                let lo = k.abs_diff(l);
                let hi = (k + l).min(d);
                let mut m = lo;
                let mut i = base;
                while m <= hi {
                    let c = S::select(self.prod_plain[i], self.prod_ball[i]);
                    out.coeff[m] = out.coeff[m] + c * p;
                    m += 2;
                    i += 1;
                }
                if S::RIGOROUS && k + l > d {
                    let par = (k + l) & 1;
                    ovf[par] = add_up(ovf[par], mul_up(p.mag(), self.overflow_up[idx]));
                }
            }
        }
        if S::RIGOROUS {
            self.push_band(&mut out.band, d + 1, 0, ovf[0]);
            self.push_band(&mut out.band, d + 1, 1, ovf[1]);
            if f.has_bands() || g.has_bands() {
                let mut acc = vec![0.0f64; self.band_len()];
                self.band_cross(f, g, &mut acc);
                self.band_cross(g, f, &mut acc);
                let fp = self.norm_parts(f);
                let gp = self.norm_parts(g);
                // band * band may reach every mode
                acc[0] = add_up(acc[0], add_up(mul_up(fp[2], gp[2]), mul_up(fp[3], gp[3])));
                acc[1] = add_up(acc[1], add_up(mul_up(fp[2], gp[3]), mul_up(fp[3], gp[2])));
                for (m, &c) in acc.iter().enumerate() {
                    self.push_band(&mut out.band, m, m & 1, c);
                }
            }
        }
        out
    }

    /// Adds the norm content of `coeff(f) * band(g)` to `acc`: mode `a`
    /// times modes `>= m` only reaches modes `>= m - a` of parity `a + m`.
    fn band_cross<S: Scalar>(&self, f: &Arc<S>, g: &Arc<S>, acc: &mut [f64]) {
        for (m, &b) in g.band.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            let bw = mul_up(b, self.rho_pow_up[m]);
            for (a, c) in f.coeff.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let idx = if m > a { m - a } else { (a + m) & 1 };
                acc[idx] = add_up(acc[idx], mul_up(mul_up(c.mag(), self.rho_pow_up[a]), bw));
            }
        }
    }

    /// Moves band 0 and band 1 content into radii of the first two
    /// coefficients plus bands 2 and 3, so that modes 0 and 1 are explicit.
    pub fn lift_low_bands<S: Scalar>(&self, f: &mut Arc<S>) {
        let b0 = f.band[0];
        if b0 != 0.0 {
            f.coeff[0] = f.coeff[0].widen(b0);
            f.band[2] = add_up(f.band[2], div_up(b0, self.rho_pow_down[2]));
            f.band[0] = 0.0;
        }
        let b1 = f.band[1];
        if b1 != 0.0 {
            // content rho*E_1: mode-1 coefficient bounded by b1, remainder norm by rho*b1
            f.coeff[1] = f.coeff[1].widen(b1);
            f.band[3] = add_up(f.band[3], div_up(b1, self.rho_pow_down[2]));
            f.band[1] = 0.0;
        }
    }

    /// Lifts every band of index `<= degree` into coefficient radii, leaving
    /// only bands `degree+1` and `degree+2`. Used before reading all
    /// truncated modes of an enclosure.
    pub fn expand_bands<S: Scalar>(&self, f: &mut Arc<S>) {
        let d = self.degree;
        for m in 0..=d {
            let b = f.band[m];
            if b == 0.0 {
                continue;
            }
            // content rho^m E_m: each mode n >= m has |e_n| <= rho^m b / rho^n
            let content = mul_up(b, self.rho_pow_up[m]);
            let mut n = m;
            while n <= d {
                f.coeff[n] = f.coeff[n].widen(div_up(content, self.rho_pow_down[n]));
                n += 2;
            }
            self.push_band(&mut f.band, d + 1, m & 1, content);
            f.band[m] = 0.0;
        }
    }

    /// Double antiderivative of modes `>= 2`, extended by two degrees
    /// (nothing is truncated). Requires empty modes 0 and 1.
    pub fn d2_inv_high<S: Scalar>(&self, f: &Arc<S>) -> Result<Arc<S>, ArcError> {
        self.check_shape(f)?;
        if !f.coeff[0].is_zero() || !f.coeff[1].is_zero() || f.band[0] != 0.0 || f.band[1] != 0.0
        {
            return Err(ArcError::LowModeContent);
        }
        let d = self.degree;
        let mut out = Arc { coeff: vec![S::ZERO; d + 3], band: vec![0.0; self.band_len()] };
        self.d2_accumulate(f, &mut out.coeff);
        if S::RIGOROUS {
            self.d2_bands(&f.band, &mut out.band);
        }
        Ok(out)
    }

    fn d2_accumulate<S: Scalar>(&self, f: &Arc<S>, out: &mut [S]) {
        for n in 2..=self.degree {
            let c = f.coeff[n];
            if c.is_zero() {
                continue;
            }
            let t = &self.d2_plain[n];
            let b = &self.d2_ball[n];
            out[n + 2] = out[n + 2] + S::select(t[0], b[0]) * c;
            out[n - 2] = out[n - 2] + S::select(t[1], b[1]) * c;
            out[n] = out[n] + S::select(t[2], b[2]) * c;
        }
    }

    fn d2_bands(&self, inp: &[f64], out: &mut [f64]) {
        for m in 2..inp.len() {
            if inp[m] != 0.0 {
                out[m - 2] = add_up(out[m - 2], mul_up(inp[m], self.band_d2_up[m]));
            }
        }
    }

    /// Cuts an arc of higher degree back to the working degree; the removed
    /// modes go to bands in rigorous mode.
    pub fn truncate<S: Scalar>(&self, mut f: Arc<S>) -> Arc<S> {
        let d = self.degree;
        if f.coeff.len() <= d + 1 {
            f.coeff.resize(d + 1, S::ZERO);
            return f;
        }
        if S::RIGOROUS {
            for n in d + 1..f.coeff.len() {
                let c = f.coeff[n];
                if !c.is_zero() {
                    let content = mul_up(c.mag(), self.rho_pow_up[n]);
                    self.push_band(&mut f.band, d + 1, n & 1, content);
                }
            }
        }
        f.coeff.truncate(d + 1);
        f
    }

    /// Plain value of the coefficient midpoints at `x` (any stored degree).
    pub fn eval<S: Scalar>(&self, f: &Arc<S>, x: f64) -> Result<f64, ArcError> {
        let p = legendre::eval_upto(f.coeff.len() - 1, x)?;
        Ok(f.coeff.iter().zip(&p).map(|(c, p)| c.mid() * p).sum())
    }

    /// Enclosure of every function in `f` at `x`.
    pub fn eval_enclosure<S: Scalar>(&self, f: &Arc<S>, x: f64) -> Result<Ball, ArcError> {
        let p = legendre::eval_upto_ball(f.coeff.len() - 1, x)?;
        let mut acc = Ball::ZERO;
        for (c, p) in f.coeff.iter().zip(&p) {
            if !c.is_zero() {
                acc = acc + c.to_ball() * *p;
            }
        }
        Ok(acc.widen(self.band_content(f)))
    }

    pub fn add<S: Scalar>(&self, f: &Arc<S>, g: &Arc<S>) -> Result<Arc<S>, ArcError> {
        self.check_shape(f)?;
        self.check_shape(g)?;
        let mut out = f.clone();
        out.add_assign(g);
        Ok(out)
    }

    pub fn scale<S: Scalar>(&self, f: &Arc<S>, c: S) -> Arc<S> {
        let mut out = self.zero();
        out.coeff.resize(f.coeff.len(), S::ZERO);
        out.axpy(c, f);
        out
    }

    /// `x -> f(-x)`: odd modes change sign; band norms are unchanged.
    pub fn reflect<S: Scalar>(&self, f: &Arc<S>) -> Arc<S> {
        let mut out = f.clone();
        for (n, c) in out.coeff.iter_mut().enumerate() {
            if n % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    /// Legendre projection of a smooth function on `I0` (Gauss quadrature).
    pub fn project(&self, f: impl Fn(f64) -> f64) -> Arc<f64> {
        let d = self.degree;
        let (nodes, weights) = legendre::gauss_legendre(2 * d + 8);
        let mut out = self.zero::<f64>();
        for (y, w) in nodes.iter().zip(&weights) {
            let x = 0.5 * y;
            let fx = f(x);
            if fx == 0.0 {
                continue;
            }
            let p = legendre::eval_upto(d, x).expect("node inside I0");
            for n in 0..=d {
                out.coeff[n] += 0.5 * (2 * n + 1) as f64 * w * fx * p[n];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> ArcSpace {
        ArcSpace::new(7).unwrap()
    }

    #[test]
    fn norm_examples() {
        let s = space();
        let mut f = s.zero::<f64>();
        f.coeff[0] = 1.0;
        f.coeff[1] = -2.0;
        assert_eq!(s.norm(&f), 3.125);
        assert_eq!(s.norm(&s.zero::<f64>()), 0.0);
        let u3 = s.unit::<Ball>(3);
        assert!(s.norm(&u3) >= 1.0625f64.powi(3));
    }

    #[test]
    fn p1_squared() {
        let s = space();
        let p = s.product(&s.unit::<f64>(1), &s.unit::<f64>(1)).unwrap();
        assert!((p.coeff[0] - 1.0 / 3.0).abs() < 1e-16);
        assert!((p.coeff[2] - 2.0 / 3.0).abs() < 1e-16);
        let pb = s.product(&s.unit::<Ball>(1), &s.unit::<Ball>(1)).unwrap();
        assert!(pb.coeff[0].contains(1.0 / 3.0) && pb.coeff[2].contains(2.0 / 3.0));
        assert!(!pb.has_bands());
    }

    #[test]
    fn overflow_goes_to_high_bands() {
        let s = space();
        let p = s.product(&s.unit::<Ball>(7), &s.unit::<Ball>(5)).unwrap();
        assert!(p.band[8] > 0.0);
        assert_eq!(p.band[9], 0.0);
        let q = s.product(&s.unit::<f64>(7), &s.unit::<f64>(5)).unwrap();
        assert!(q.band.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn d2_of_p2() {
        let s = space();
        let g = s.d2_inv_high(&s.unit::<f64>(2)).unwrap();
        assert!((g.coeff[4] - 1.0 / 140.0).abs() < 1e-17);
        assert!((g.coeff[2] + 1.0 / 42.0).abs() < 1e-17);
        assert!((g.coeff[0] - 1.0 / 60.0).abs() < 1e-17);
        assert!(s.eval(&g, 0.5).unwrap().abs() < 1e-16);
        assert!(s.eval(&g, -0.5).unwrap().abs() < 1e-16);
        assert_eq!(s.d2_inv_high(&s.unit::<f64>(1)), Err(ArcError::LowModeContent));
        assert!(s.d2_inv_high(&s.zero::<f64>()).unwrap().coeff.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn band_only_eval() {
        let s = space();
        let mut f = s.zero::<Ball>();
        f.band[3] = 1e-3;
        let v = s.eval_enclosure(&f, 0.0).unwrap();
        assert!(v.contains(1.0625f64.powi(3) * 1e-3));
        assert!(v.rad() <= 1.0625f64.powi(3) * 1e-3 * (1.0 + 1e-12));
        assert_eq!(s.eval_enclosure(&f, 0.7), Err(ArcError::Domain));
    }

    #[test]
    fn reflect_and_cancel() {
        let s = space();
        let mut f = s.unit::<Ball>(1);
        f.band[2] = 0.5;
        let r = s.reflect(&f);
        assert_eq!(r.coeff[1], -Ball::ONE);
        assert_eq!(s.reflect(&r), f);
        let z = s.add(&f, &s.scale(&f, -Ball::ONE)).unwrap();
        assert!(z.coeff.iter().all(|c| c.mid() == 0.0));
        assert!(z.band[2] >= 1.0);
    }

    #[test]
    fn lifting_keeps_enclosure() {
        let s = space();
        let mut f = s.zero::<Ball>();
        f.band[0] = 0.25;
        f.band[1] = 0.5;
        let before = s.norm(&f);
        s.lift_low_bands(&mut f);
        assert_eq!(f.band[0], 0.0);
        assert_eq!(f.band[1], 0.0);
        assert!(f.coeff[0].rad() >= 0.25 && f.coeff[1].rad() >= 0.5);
        assert!(s.norm(&f) >= before);
    }

    #[test]
    fn projection_recovers_polynomial() {
        let s = space();
        let f = s.project(|x| 1.0 + x - 4.0 * x * x * x);
        for i in 0..=10 {
            let x = -0.5 + 0.1 * i as f64;
            let want = 1.0 + x - 4.0 * x * x * x;
            assert!((s.eval(&f, x).unwrap() - want).abs() < 1e-14);
        }
    }
}
