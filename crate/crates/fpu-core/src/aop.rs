//! The smoothing operator `A_kappa^2` (convolution with the tent
//! `kappa^-2 (kappa - |s|)_+`) and its powers on chains.
//!
//! On one arc, modes 0 and 1 use exact rational stencils spanning
//! `2 kappa + 1` sites. Higher modes have a double antiderivative `g`
//! supported in the arc itself, so their image is the second difference
//! `kappa^-2 (g(. - kappa) - 2 g + g(. + kappa))`.
//!
//! Powers are computed in three parts. The center is propagated exactly in
//! a growing window, and whatever leaves the center becomes tail weight.
//! The first tail sites, enclosed through the stored weights, are propagated
//! to find what re-enters the center. Tail-to-tail transfer uses collapsed
//! `r`-weighted stencil norms.

use crate::arc::{Arc, ArcSpace};
use crate::ball::{mul_up, Ball};
use crate::chain::{Chain, ChainError, ChainSpace, TailWeight};
use crate::config::Rational;
use crate::scalar::Scalar;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AopError {
    Kappa,
    /// Requested power is zero or above the configured `k`.
    Steps,
    /// The center is too narrow for `k` steps of width `kappa`.
    Sites,
    /// Only modes 0 and 1 have closed-form stencils.
    Mode,
    Chain(ChainError),
}

impl fmt::Display for AopError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AopError::Kappa => f.write_str("kappa must be 1 or 2"),
            AopError::Steps => f.write_str("power outside 1..=k"),
            AopError::Sites => f.write_str("center half-width L must be at least (k+1) kappa + 2"),
            AopError::Mode => f.write_str("closed-form stencils exist for modes 0 and 1 only"),
            AopError::Chain(e) => write!(f, "{e}"),
        }
    }
}

impl From<ChainError> for AopError {
    fn from(e: ChainError) -> Self {
        AopError::Chain(e)
    }
}

// 4 A_1^2 P_n at offsets -1, 0, 1 and 4 A_2^2 P_n at offsets -2..=2, as
// (numerator, denominator) coefficients of P_0..P_3.
type Row = [(i64, i64); 4];
const K1_P0: [Row; 3] = [
    [(1, 6), (1, 4), (1, 12), (0, 1)],
    [(2, 3), (0, 1), (-1, 6), (0, 1)],
    [(1, 6), (-1, 4), (1, 12), (0, 1)],
];
const K1_P1: [Row; 3] = [
    [(-1, 12), (-1, 10), (0, 1), (1, 60)],
    [(0, 1), (1, 5), (0, 1), (-1, 30)],
    [(1, 12), (-1, 10), (0, 1), (1, 60)],
];
const K2_P0: [Row; 5] = [
    [(1, 6), (1, 4), (1, 12), (0, 1)],
    [(1, 1), (1, 2), (0, 1), (0, 1)],
    [(5, 3), (0, 1), (-1, 6), (0, 1)],
    [(1, 1), (-1, 2), (0, 1), (0, 1)],
    [(1, 6), (-1, 4), (1, 12), (0, 1)],
];
const K2_P1: [Row; 5] = [
    [(-1, 12), (-1, 10), (0, 1), (1, 60)],
    [(-1, 6), (0, 1), (0, 1), (0, 1)],
    [(0, 1), (1, 5), (0, 1), (-1, 30)],
    [(1, 6), (0, 1), (0, 1), (0, 1)],
    [(1, 12), (-1, 10), (0, 1), (1, 60)],
];

/// Exact stencil of `A_kappa^2 P_n` for `n` in {0, 1}: one entry per output
/// offset `-kappa..=kappa`, holding the coefficients of `P_0..P_3` there.
pub fn aa_low(n: usize, kappa: usize) -> Result<Vec<(isize, [Rational; 4])>, AopError> {
    let rows: &[Row] = match (kappa, n) {
        (1, 0) => &K1_P0,
        (1, 1) => &K1_P1,
        (2, 0) => &K2_P0,
        (2, 1) => &K2_P1,
        (1 | 2, _) => return Err(AopError::Mode),
        _ => return Err(AopError::Kappa),
    };
    let scale = if kappa == 1 { 1 } else { 4 };
    Ok(rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let c = row.map(|(p, q)| Rational::new(p, q * scale).expect("nonzero"));
            (i as isize - kappa as isize, c)
        })
        .collect())
}

/// Consecutive sites `lo, lo+1, ...` of a function on the line.
struct Window<S> {
    lo: isize,
    arcs: Vec<Arc<S>>,
}

impl<S: Scalar> Window<S> {
    fn slot(&mut self, site: isize) -> Option<&mut Arc<S>> {
        let i = site - self.lo;
        if i < 0 {
            return None;
        }
        self.arcs.get_mut(i as usize)
    }
}

/// `A_kappa^2` and its powers up to `k` on one chain space.
#[derive(Clone, Debug)]
pub struct AOp {
    space: ChainSpace,
    kappa: usize,
    k: usize,
    low_plain: Vec<[[f64; 4]; 2]>,
    low_ball: Vec<[[Ball; 4]; 2]>,
    kinv2: f64,
    // hh[p-1][m]: r-weighted stencil norms of A^(2p) P_m, as tail weights
    hh: Vec<Vec<TailWeight>>,
}

impl AOp {
    pub fn new(space: ChainSpace, kappa: usize, k: usize) -> Result<AOp, AopError> {
        if kappa != 1 && kappa != 2 {
            return Err(AopError::Kappa);
        }
        if k == 0 {
            return Err(AopError::Steps);
        }
        if space.sites() < (k + 1) * kappa + 2 {
            return Err(AopError::Sites);
        }
        let s0 = aa_low(0, kappa)?;
        let s1 = aa_low(1, kappa)?;
        let mut low_plain = Vec::new();
        let mut low_ball = Vec::new();
        for (a, b) in s0.iter().zip(&s1) {
            low_plain.push([a.1.map(|q| q.to_f64()), b.1.map(|q| q.to_f64())]);
            low_ball.push([a.1.map(|q| q.to_ball()), b.1.map(|q| q.to_ball())]);
        }
        let kinv2 = if kappa == 1 { 1.0 } else { 0.25 };
        let mut op = AOp { space, kappa, k, low_plain, low_ball, kinv2, hh: Vec::new() };
        op.hh = op.collapsed_stencils();
        Ok(op)
    }

    pub fn space(&self) -> &ChainSpace {
        &self.space
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn arcs(&self) -> &ArcSpace {
        self.space.arcs()
    }

    /// Adds the image of the arc `f` at site `i` into `out`.
    fn apply_source<S: Scalar>(&self, f: &Arc<S>, i: isize, out: &mut Window<S>) {
        let arcs = self.arcs();
        let mut f = f.clone();
        if S::RIGOROUS && (f.band[0] != 0.0 || f.band[1] != 0.0) {
            arcs.lift_low_bands(&mut f);
        }
        let (c0, c1) = (f.coeff[0], f.coeff[1]);
        if !c0.is_zero() || !c1.is_zero() {
            for (di, (lp, lb)) in self.low_plain.iter().zip(&self.low_ball).enumerate() {
                let t = i + di as isize - self.kappa as isize;
                if let Some(a) = out.slot(t) {
                    for n in 0..4 {
                        let mut v = S::ZERO;
                        if !c0.is_zero() && lp[0][n] != 0.0 {
                            v = v + S::select(lp[0][n], lb[0][n]) * c0;
                        }
                        if !c1.is_zero() && lp[1][n] != 0.0 {
                            v = v + S::select(lp[1][n], lb[1][n]) * c1;
                        }
                        if !v.is_zero() {
                            a.coeff[n] = a.coeff[n] + v;
                        }
                    }
                }
            }
        }
        f.coeff[0] = S::ZERO;
        f.coeff[1] = S::ZERO;
        if f.is_zero() {
            return;
        }
        let g = arcs.truncate(arcs.d2_inv_high(&f).expect("low modes cleared"));
        let kp = self.kappa as isize;
        for (d, c) in [(-kp, self.kinv2), (0, -2.0 * self.kinv2), (kp, self.kinv2)] {
            if let Some(a) = out.slot(i + d) {
                a.axpy(S::from_f64(c), &g);
            }
        }
    }

    /// One application on a window. With `mirror = Some(parity)` the window
    /// starts at site 0 and negative sites are implied by the parity law;
    /// otherwise the window is treated as the whole function.
    fn step<S: Scalar>(&self, win: &Window<S>, mirror: Option<u8>) -> Window<S> {
        let kp = self.kappa as isize;
        let len = win.arcs.len();
        let mut out = match mirror {
            Some(_) => Window { lo: 0, arcs: vec![self.arcs().zero(); len + self.kappa] },
            None => Window { lo: win.lo - kp, arcs: vec![self.arcs().zero(); len + 2 * self.kappa] },
        };
        if let Some(parity) = mirror {
            debug_assert_eq!(win.lo, 0);
            for j in 1..=self.kappa.min(len - 1) {
                let a = &win.arcs[j];
                if a.is_zero() {
                    continue;
                }
                let mut m = self.arcs().reflect(a);
                if parity == 1 {
                    for c in m.coeff.iter_mut() {
                        *c = -*c;
                    }
                }
                self.apply_source(&m, -(j as isize), &mut out);
            }
        }
        for (idx, a) in win.arcs.iter().enumerate() {
            if !a.is_zero() {
                self.apply_source(a, win.lo + idx as isize, &mut out);
            }
        }
        out
    }

    /// `sum_d r^d |arc at offset d|` for a window around site 0.
    fn collapse(&self, win: &Window<Ball>) -> TailWeight {
        let mut t = TailWeight::zero(self.arcs());
        for (idx, a) in win.arcs.iter().enumerate() {
            if !a.is_zero() {
                t.add_arc(a, self.space.r_signed_up(win.lo + idx as isize));
            }
        }
        t
    }

    fn collapsed_stencils(&self) -> Vec<Vec<TailWeight>> {
        let d = self.arcs().degree();
        let mut hh = vec![Vec::with_capacity(d + 1); self.k];
        for m in 0..=d {
            let mut win = Window { lo: 0, arcs: vec![self.arcs().unit::<Ball>(m)] };
            for table in hh.iter_mut() {
                win = self.step(&win, None);
                table.push(self.collapse(&win));
            }
        }
        hh
    }

    /// One-step tail map on weights: `W(A^2 f) <= T1 W(f)`.
    fn t1(&self, w: &TailWeight) -> TailWeight {
        let win = Window { lo: 0, arcs: vec![w.as_arc()] };
        self.collapse(&self.step(&win, None))
    }

    /// Enclosure of the tail arc at site `L + a`.
    fn tail_site<S: Scalar>(&self, w: &TailWeight, a: usize) -> Arc<S> {
        let f = self.space.r_inv_up(a);
        let sc = |x: f64| if x == 0.0 { 0.0 } else { mul_up(x, f) };
        Arc {
            coeff: w.coeff.iter().map(|&x| S::select(0.0, Ball::radius(sc(x)))).collect(),
            band: w.band.iter().map(|&x| sc(x)).collect(),
        }
    }

    /// `A^(2p) w` for `p = 1..=upto`.
    pub fn powers<S: Scalar>(&self, w: &Chain<S>, upto: usize) -> Result<Vec<Chain<S>>, AopError> {
        if upto == 0 || upto > self.k {
            return Err(AopError::Steps);
        }
        self.space.check(w)?;
        let l = self.space.sites();
        let mut out = Vec::with_capacity(upto);
        let mut win = Window { lo: 0, arcs: w.center.clone() };
        for _ in 0..upto {
            win = self.step(&win, Some(w.parity));
            let mut c = self.space.zero::<S>(w.parity);
            c.center.clone_from_slice(&win.arcs[..l]);
            if S::RIGOROUS {
                for (i, a) in win.arcs.iter().enumerate().skip(l) {
                    if !a.is_zero() {
                        self.space.spill_to_tail(&mut c.tail, a, i);
                    }
                }
            }
            self.space.enforce_parity(&mut c);
            out.push(c);
        }
        if !S::RIGOROUS || w.tail.is_zero() {
            return Ok(out);
        }
        // tail sites that can reach the center within `upto` steps
        let reach = upto * self.kappa;
        let mut win = Window {
            lo: l as isize,
            arcs: (0..reach).map(|a| self.tail_site::<S>(&w.tail, a)).collect(),
        };
        for c in out.iter_mut() {
            win = self.step(&win, None);
            for (idx, a) in win.arcs.iter().enumerate() {
                let t = win.lo + idx as isize;
                if t < l as isize && !a.is_zero() {
                    c.center[t as usize].add_assign(a);
                }
            }
        }
        for (n, &wn) in w.tail.coeff.iter().enumerate() {
            if wn == 0.0 {
                continue;
            }
            for (c, table) in out.iter_mut().zip(&self.hh) {
                c.tail.add_assign(&table[n].scaled(wn));
            }
        }
        if w.tail.band.iter().any(|&b| b != 0.0) {
            let mut cur = TailWeight { coeff: vec![0.0; w.tail.coeff.len()], band: w.tail.band.clone() };
            for c in out.iter_mut() {
                cur = self.t1(&cur);
                c.tail.add_assign(&cur);
            }
        }
        Ok(out)
    }

    pub fn apply<S: Scalar>(&self, w: &Chain<S>) -> Result<Chain<S>, AopError> {
        Ok(self.powers(w, 1)?.pop().expect("one power"))
    }

    /// `A^(2p) w` for `1 <= p <= k`.
    pub fn power<S: Scalar>(&self, w: &Chain<S>, p: usize) -> Result<Chain<S>, AopError> {
        Ok(self.powers(w, p)?.pop().expect("p >= 1"))
    }

    /// `sum_{p=1}^{k} mu^(p-1) A^(2p) w`, summed term by term.
    pub fn sum_powers<S: Scalar>(&self, w: &Chain<S>, mu: S) -> Result<Chain<S>, AopError> {
        let pw = self.powers(w, self.k)?;
        Ok(self.combine(&pw, mu))
    }

    /// `sum_p mu^(p-1) terms[p-1]`.
    pub(crate) fn combine<S: Scalar>(&self, terms: &[Chain<S>], mu: S) -> Chain<S> {
        let mut acc = terms[0].clone();
        let mut f = S::ONE;
        for t in &terms[1..] {
            f = f * mu;
            if f.is_zero() {
                break;
            }
            self.space.axpy(&mut acc, f, t);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(kappa: usize, k: usize) -> AOp {
        let cs = ChainSpace::new(ArcSpace::new(7).unwrap(), Rational::integer(4), 12).unwrap();
        AOp::new(cs, kappa, k).unwrap()
    }

    #[test]
    fn stencil_examples() {
        let s = aa_low(0, 1).unwrap();
        let q = |p, r| Rational::new(p, r).unwrap();
        assert_eq!(s[1], (0, [q(2, 3), q(0, 1), q(-1, 6), q(0, 1)]));
        let s = aa_low(1, 1).unwrap();
        assert_eq!(s[2].1, [q(1, 12), q(-1, 10), q(0, 1), q(1, 60)]);
        let s = aa_low(1, 2).unwrap();
        assert_eq!(s[1].1[0], q(-1, 24));
        assert_eq!(s[3].1[0], q(1, 24));
        assert_eq!(aa_low(2, 1), Err(AopError::Mode));
    }

    #[test]
    fn unit_mass() {
        // a broad constant is reproduced away from its edge
        for kappa in [1, 2] {
            let a = op(kappa, 1);
            let mut w = a.space().zero::<f64>(0);
            for j in 0..8 {
                w.center[j] = a.space().arcs().unit(0);
            }
            let v = a.apply(&w).unwrap();
            for j in 0..8 - kappa - 1 {
                assert!((v.center[j].coeff[0] - 1.0).abs() < 1e-14);
                assert!(v.center[j].coeff[1..].iter().all(|c| c.abs() < 1e-14));
            }
        }
    }

    #[test]
    fn zero_and_parity() {
        let a = op(1, 2);
        let z = a.space().zero::<Ball>(1);
        assert!(a.apply(&z).unwrap().is_zero());
        let mut w = a.space().zero::<f64>(1);
        w.center[0].coeff[1] = 1.0;
        w.center[0].coeff[3] = 0.3;
        w.center[2].coeff[0] = -0.5;
        let v = a.power(&w, 2).unwrap();
        assert_eq!(a.space().check(&v), Ok(()));
        for &x in &[0.3, 1.7, 3.2] {
            let (p, m) = (a.space().eval_plain(&v, x), a.space().eval_plain(&v, -x));
            assert!((p + m).abs() < 1e-14);
        }
    }

    #[test]
    fn rigorous_contains_plain() {
        let a = op(2, 3);
        let mut w = a.space().zero::<f64>(0);
        w.center[0].coeff[0] = 1.0;
        w.center[1].coeff[2] = -0.7;
        w.center[3].coeff[5] = 0.2;
        let p = a.powers(&w, 3).unwrap();
        let b = a.powers(&a.space().to_ball(&w), 3).unwrap();
        for (pp, bb) in p.iter().zip(&b) {
            for (x, y) in pp.center.iter().zip(&bb.center) {
                for (c, e) in x.coeff.iter().zip(&y.coeff) {
                    assert!(e.widen(a.space().arcs().band_content(y)).contains(*c));
                }
            }
        }
    }

    #[test]
    fn tail_flows_inward() {
        let a = op(1, 2);
        let mut w = a.space().zero::<Ball>(0);
        w.tail.coeff[0] = 1.0;
        let p = a.powers(&w, 2).unwrap();
        // the site next to the seam sees at most r^-0 * 1/6 plus P1, P2 parts
        assert!(p[0].center[11].coeff[0].contains(1.0 / 6.0));
        assert!(p[0].center[10].is_zero());
        assert!(!p[1].center[10].is_zero());
        assert!(!p[0].tail.is_zero());
    }
}
