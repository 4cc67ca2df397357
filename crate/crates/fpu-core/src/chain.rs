//! Parity-reduced chains of arcs with a geometric tail enclosure.
//!
//! Site `j` holds the arc `w(. + j)` on `I0`. Only `0 <= j < L` is stored;
//! negative sites follow from `w_{-j,n} = (-1)^(tau+n) w_{j,n}`, and sites
//! `j >= L` are known only through the tail weights
//! `W_n = sum_{j>=L} r^(j-L) |w_{j,n}|` (and the same sums for bands).
//! The norm is `||w_0|| + 2 sum_{0<j<L} r^j ||w_j|| + 2 r^L ||W||`.

use crate::arc::{Arc, ArcError, ArcSpace};
use crate::ball::{add_up, mul_up, Ball};
use crate::config::Rational;
use crate::scalar::Scalar;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainError {
    Shape,
    /// Site 0 holds modes of the wrong parity.
    Parity,
    /// Unsupported power.
    Power,
    Weight,
    Arc(ArcError),
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::Shape => f.write_str("chain shapes do not match"),
            ChainError::Parity => f.write_str("site 0 violates the chain parity"),
            ChainError::Power => f.write_str("only powers 2 and 3 are supported"),
            ChainError::Weight => f.write_str("weight r must exceed 1"),
            ChainError::Arc(e) => write!(f, "{e}"),
        }
    }
}

impl From<ArcError> for ChainError {
    fn from(e: ArcError) -> Self {
        ChainError::Arc(e)
    }
}

/// Per-mode weights `W_n` and band weights of the part of a chain at sites
/// `>= J`, each site scaled by `r^(j-J)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailWeight {
    pub coeff: Vec<f64>,
    pub band: Vec<f64>,
}

impl TailWeight {
    pub fn zero(space: &ArcSpace) -> TailWeight {
        TailWeight { coeff: vec![0.0; space.degree() + 1], band: vec![0.0; space.band_len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.iter().chain(&self.band).all(|&x| x == 0.0)
    }

    /// `sum_n W_n rho^n + sum_m rho^m band_m`, rounded upward.
    pub fn norm(&self, space: &ArcSpace) -> f64 {
        let mut s = 0.0;
        for (n, &w) in self.coeff.iter().enumerate() {
            if w != 0.0 {
                s = add_up(s, mul_up(w, space.rho_pow_up(n)));
            }
        }
        for (m, &w) in self.band.iter().enumerate() {
            if w != 0.0 {
                s = add_up(s, mul_up(w, space.rho_pow_up(m)));
            }
        }
        s
    }

    /// Every entry multiplied by `f >= 0`, rounded upward.
    pub fn scaled(&self, f: f64) -> TailWeight {
        let sc = |v: &Vec<f64>| v.iter().map(|&x| if x == 0.0 { 0.0 } else { mul_up(x, f) }).collect();
        TailWeight { coeff: sc(&self.coeff), band: sc(&self.band) }
    }

    pub fn add_assign(&mut self, o: &TailWeight) {
        for (a, &b) in self.coeff.iter_mut().zip(&o.coeff) {
            if b != 0.0 {
                *a = add_up(*a, b);
            }
        }
        for (a, &b) in self.band.iter_mut().zip(&o.band) {
            if b != 0.0 {
                *a = add_up(*a, b);
            }
        }
    }

    /// Adds `f * |arc|` mode-wise.
    pub fn add_arc<S: Scalar>(&mut self, arc: &Arc<S>, f: f64) {
        for (a, c) in self.coeff.iter_mut().zip(&arc.coeff) {
            if !c.is_zero() {
                *a = add_up(*a, mul_up(c.mag(), f));
            }
        }
        for (a, &b) in self.band.iter_mut().zip(&arc.band) {
            if b != 0.0 {
                *a = add_up(*a, mul_up(b, f));
            }
        }
    }

    /// The zero-centred enclosure arc with these weights as radii.
    pub fn as_arc(&self) -> Arc<Ball> {
        Arc {
            coeff: self.coeff.iter().map(|&w| Ball::radius(w)).collect(),
            band: self.band.clone(),
        }
    }

    /// Weights of a zero-centred enclosure arc.
    pub fn from_arc(a: &Arc<Ball>) -> TailWeight {
        TailWeight { coeff: a.coeff.iter().map(|c| c.mag()).collect(), band: a.band.clone() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chain<S> {
    /// 0 for even, 1 for odd.
    pub parity: u8,
    pub center: Vec<Arc<S>>,
    pub tail: TailWeight,
}

impl<S: Scalar> Chain<S> {
    pub fn sites(&self) -> usize {
        self.center.len()
    }

    pub fn is_zero(&self) -> bool {
        self.center.iter().all(|a| a.is_zero()) && self.tail.is_zero()
    }
}

/// Shared tables for chains of one arc space, weight `r` and center width.
#[derive(Clone, Debug)]
pub struct ChainSpace {
    arc: ArcSpace,
    r: Rational,
    r_ball: Ball,
    sites: usize,
    r_pow: Vec<f64>,
    r_pow_up: Vec<f64>,
    r_pow_down: Vec<f64>,
    r_inv_up: Vec<f64>,
    r_inv_ball: Vec<Ball>,
}

impl ChainSpace {
    pub fn new(arc: ArcSpace, r: Rational, sites: usize) -> Result<ChainSpace, ChainError> {
        if r.num() <= r.den() {
            return Err(ChainError::Weight);
        }
        if sites < 2 {
            return Err(ChainError::Shape);
        }
        let r_ball = r.to_ball();
        let inv = r_ball.recip().map_err(|_| ChainError::Weight)?;
        let top = 2 * sites + 64;
        let mut r_pow = vec![1.0; top + 1];
        let mut r_pow_up = vec![1.0; top + 1];
        let mut r_pow_down = vec![1.0; top + 1];
        let mut r_inv_up = vec![1.0; top + 1];
        let mut r_inv_ball = vec![Ball::ONE; top + 1];
        let (mut acc, mut iacc) = (Ball::ONE, Ball::ONE);
        for j in 1..=top {
            acc = acc * r_ball;
            iacc = iacc * inv;
            r_pow[j] = r_pow[j - 1] * r_ball.mid();
            r_pow_up[j] = acc.upper();
            r_pow_down[j] = acc.lower();
            r_inv_up[j] = iacc.upper();
            r_inv_ball[j] = iacc;
        }
        Ok(ChainSpace { arc, r, r_ball, sites, r_pow, r_pow_up, r_pow_down, r_inv_up, r_inv_ball })
    }

    pub fn arcs(&self) -> &ArcSpace {
        &self.arc
    }

    pub fn r(&self) -> Rational {
        self.r
    }

    pub fn r_ball(&self) -> Ball {
        self.r_ball
    }

    /// Center half-width `L`.
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn degree(&self) -> usize {
        self.arc.degree()
    }

    /// `r^j` rounded to nearest.
    pub fn r_pow(&self, j: usize) -> f64 {
        self.r_pow[j]
    }

    /// Upper bound of `r^j`.
    pub fn r_pow_up(&self, j: usize) -> f64 {
        self.r_pow_up[j]
    }

    pub fn r_pow_down(&self, j: usize) -> f64 {
        self.r_pow_down[j]
    }

    /// Upper bound of `r^-j`.
    pub fn r_inv_up(&self, j: usize) -> f64 {
        self.r_inv_up[j]
    }

    /// Upper bound of `r^d` for a signed exponent.
    pub fn r_signed_up(&self, d: isize) -> f64 {
        if d >= 0 {
            self.r_pow_up[d as usize]
        } else {
            self.r_inv_up[(-d) as usize]
        }
    }

    pub fn r_inv_ball(&self, j: usize) -> Ball {
        self.r_inv_ball[j]
    }

    pub fn zero<S: Scalar>(&self, parity: u8) -> Chain<S> {
        Chain {
            parity,
            center: vec![self.arc.zero(); self.sites],
            tail: TailWeight::zero(&self.arc),
        }
    }

    pub fn check<S: Scalar>(&self, w: &Chain<S>) -> Result<(), ChainError> {
        if w.center.len() != self.sites
            || w.tail.coeff.len() != self.degree() + 1
            || w.tail.band.len() != self.arc.band_len()
        {
            return Err(ChainError::Shape);
        }
        for a in &w.center {
            self.arc.check_shape(a)?;
        }
        let c0 = &w.center[0];
        let tau = w.parity as usize;
        let bad_coeff = c0.coeff.iter().enumerate().any(|(n, c)| n % 2 != tau && !c.is_zero());
        let bad_band = c0.band.iter().enumerate().any(|(m, &b)| m % 2 != tau && b != 0.0);
        if bad_coeff || bad_band {
            return Err(ChainError::Parity);
        }
        Ok(())
    }

    /// Zeroes the wrong-parity modes of site 0.
    pub fn enforce_parity<S: Scalar>(&self, w: &mut Chain<S>) {
        let tau = w.parity as usize;
        let c0 = &mut w.center[0];
        for (n, c) in c0.coeff.iter_mut().enumerate() {
            if n % 2 != tau {
                *c = S::ZERO;
            }
        }
        for (m, b) in c0.band.iter_mut().enumerate() {
            if m % 2 != tau {
                *b = 0.0;
            }
        }
    }

    /// Weight of site `j` in the norm: 1 at `j = 0`, `2 r^j` otherwise.
    pub fn site_weight_up(&self, j: usize) -> f64 {
        if j == 0 {
            1.0
        } else {
            2.0 * self.r_pow_up[j]
        }
    }

    pub fn norm<S: Scalar>(&self, w: &Chain<S>) -> f64 {
        if !S::RIGOROUS {
            let mut s = self.arc.norm(&w.center[0]);
            for j in 1..self.sites {
                s += 2.0 * self.r_pow[j] * self.arc.norm(&w.center[j]);
            }
            return s;
        }
        let mut s = 0.0;
        for (j, a) in w.center.iter().enumerate() {
            s = add_up(s, mul_up(self.site_weight_up(j), self.arc.norm(a)));
        }
        add_up(s, mul_up(2.0 * self.r_pow_up[self.sites], w.tail.norm(&self.arc)))
    }

    /// Unweighted arc norms `||w_j||` for `j < L`.
    pub fn site_norms<S: Scalar>(&self, w: &Chain<S>) -> Vec<f64> {
        w.center.iter().map(|a| self.arc.norm(a)).collect()
    }

    /// Arc at any site `|j| < L`, using the parity law for `j < 0`.
    pub fn site_arc<S: Scalar>(&self, w: &Chain<S>, j: isize) -> Arc<S> {
        let a = &w.center[j.unsigned_abs()];
        if j >= 0 {
            return a.clone();
        }
        let mut out = self.arc.reflect(a);
        if w.parity == 1 {
            for c in out.coeff.iter_mut() {
                *c = -*c;
            }
        }
        out
    }

    /// Pointwise product; the tail of the result bounds the product of the tails.
    pub fn product<S: Scalar>(&self, v: &Chain<S>, w: &Chain<S>) -> Result<Chain<S>, ChainError> {
        self.check(v)?;
        self.check(w)?;
        Ok(self.mul(v, w))
    }

    pub(crate) fn mul<S: Scalar>(&self, v: &Chain<S>, w: &Chain<S>) -> Chain<S> {
        let center = v
            .center
            .iter()
            .zip(&w.center)
            .map(|(a, b)| {
                if a.is_zero() || b.is_zero() {
                    self.arc.zero()
                } else {
                    self.arc.mul(a, b)
                }
            })
            .collect();
        let tail = if S::RIGOROUS && !v.tail.is_zero() && !w.tail.is_zero() {
            // sum_j r^(j-L) |v_j w_j| <= (sum_j r^(j-L) |v_j|) * sup_j |w_j|,
            // applied mode-wise through the linearization
            let p = self.arc.mul(&v.tail.as_arc(), &w.tail.as_arc());
            TailWeight::from_arc(&p)
        } else {
            TailWeight::zero(&self.arc)
        };
        Chain { parity: (v.parity + w.parity) % 2, center, tail }
    }

    pub fn power<S: Scalar>(&self, w: &Chain<S>, m: u32) -> Result<Chain<S>, ChainError> {
        self.check(w)?;
        match m {
            2 => Ok(self.mul(w, w)),
            3 => Ok(self.mul(&self.mul(w, w), w)),
            _ => Err(ChainError::Power),
        }
    }

    /// `W_J(w) = sum_{j>=J} r^(j-J) |w_j|` mode-wise, for `J >= 0`.
    pub fn tail_weight<S: Scalar>(&self, w: &Chain<S>, j0: usize) -> TailWeight {
        let l = self.sites;
        let mut out = TailWeight::zero(&self.arc);
        for j in j0..l {
            out.add_arc(&w.center[j], self.r_pow_up[j - j0]);
        }
        let f = if j0 <= l { self.r_pow_up[l - j0] } else { self.r_inv_up[j0 - l] };
        out.add_assign(&w.tail.scaled(f));
        out
    }

    /// Moves a weight taken at site `J` down to `J' <= J`, which is exact for
    /// functions supported at sites `>= J`.
    pub fn shift_bound(&self, w: &TailWeight, j: usize, j_new: usize) -> TailWeight {
        assert!(j_new <= j, "shift_bound moves weights toward the center only");
        w.scaled(self.r_pow_up[j - j_new])
    }

    /// Enclosure of `w(x)`. Beyond the center the tail norm gives a
    /// zero-centred bound.
    pub fn eval<S: Scalar>(&self, w: &Chain<S>, x: f64) -> Ball {
        let (j, t) = split_site(x);
        let aj = j.unsigned_abs();
        if aj < self.sites {
            let a = &w.center[aj];
            let sign = if j < 0 && w.parity == 1 { -1.0 } else { 1.0 };
            let t = if j < 0 { -t } else { t };
            let v = self.arc.eval_enclosure(a, t).expect("t inside I0");
            return if sign < 0.0 { -v } else { v };
        }
        let tn = w.tail.norm(&self.arc);
        Ball::radius(mul_up(tn, self.r_inv_up[(aj - self.sites).min(self.r_inv_up.len() - 1)]))
    }

    /// Plain value from coefficient midpoints (zero beyond the center).
    pub fn eval_plain<S: Scalar>(&self, w: &Chain<S>, x: f64) -> f64 {
        let (j, t) = split_site(x);
        let aj = j.unsigned_abs();
        if aj >= self.sites {
            return 0.0;
        }
        let a = &w.center[aj];
        if j >= 0 {
            self.arc.eval(a, t).expect("t inside I0")
        } else {
            let v = self.arc.eval(a, -t).expect("t inside I0");
            if w.parity == 1 {
                -v
            } else {
                v
            }
        }
    }

    pub fn sample<S: Scalar>(&self, w: &Chain<S>, grid: &[f64]) -> Vec<(f64, Ball)> {
        grid.iter().map(|&x| (x, self.eval(w, x))).collect()
    }

    pub fn add<S: Scalar>(&self, v: &Chain<S>, w: &Chain<S>) -> Chain<S> {
        let mut out = v.clone();
        self.add_assign(&mut out, w);
        out
    }

    pub fn add_assign<S: Scalar>(&self, v: &mut Chain<S>, w: &Chain<S>) {
        for (a, b) in v.center.iter_mut().zip(&w.center) {
            if !b.is_zero() {
                a.add_assign(b);
            }
        }
        v.tail.add_assign(&w.tail);
    }

    /// `v += c w`.
    pub fn axpy<S: Scalar>(&self, v: &mut Chain<S>, c: S, w: &Chain<S>) {
        for (a, b) in v.center.iter_mut().zip(&w.center) {
            if !b.is_zero() {
                a.axpy(c, b);
            }
        }
        if !w.tail.is_zero() {
            v.tail.add_assign(&w.tail.scaled(c.mag()));
        }
    }

    pub fn sub<S: Scalar>(&self, v: &Chain<S>, w: &Chain<S>) -> Chain<S> {
        let mut out = v.clone();
        self.axpy(&mut out, -S::ONE, w);
        out
    }

    pub fn scale<S: Scalar>(&self, w: &Chain<S>, c: S) -> Chain<S> {
        let mut out = self.zero(w.parity);
        self.axpy(&mut out, c, w);
        out
    }

    pub fn to_ball<S: Scalar>(&self, w: &Chain<S>) -> Chain<Ball> {
        Chain { parity: w.parity, center: w.center.iter().map(|a| a.to_ball()).collect(), tail: w.tail.clone() }
    }

    /// Midpoints only; radii, bands and tail are dropped.
    pub fn mid(&self, w: &Chain<Ball>) -> Chain<f64> {
        Chain {
            parity: w.parity,
            center: w.center.iter().map(|a| a.mid()).collect(),
            tail: TailWeight::zero(&self.arc),
        }
    }

    /// Adds an arc sitting at `site >= L` to a tail weight taken at `L`.
    pub(crate) fn spill_to_tail<S: Scalar>(&self, tail: &mut TailWeight, arc: &Arc<S>, site: usize) {
        tail.add_arc(arc, self.r_pow_up[site - self.sites]);
    }
}

/// Nearest site and offset in `[-1/2, 1/2]`.
pub fn split_site(x: f64) -> (isize, f64) {
    let j = libm::round(x);
    let mut t = x - j;
    if t > 0.5 {
        t = 0.5;
    } else if t < -0.5 {
        t = -0.5;
    }
    (j as isize, t)
}
