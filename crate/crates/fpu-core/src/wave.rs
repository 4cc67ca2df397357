//! From `w` to the lattice wave: `v = w(kappa .)`, the profile `u` with
//! `u(x + 1/2) - u(x - 1/2) = v(x)`, extrema of `v`, decay and sup-norm
//! bounds.

use crate::ball::{add_up, mul_up, Ball};
use crate::chain::{split_site, Chain, ChainSpace};
use crate::legendre::{self, derivative_bound};
use alloc::vec::Vec;
use core::fmt;

/// Extrema below this magnitude are not reported.
pub const EXTREMUM_THRESHOLD: f64 = 1.0 / 64.0;

/// `v(x) = w(kappa x)`, optionally widened by a uniform radius (the
/// distance to a true solution).
#[derive(Clone, Copy, Debug)]
pub struct Profile<'a> {
    space: &'a ChainSpace,
    w: &'a Chain<f64>,
    kappa: usize,
    radius: f64,
}

impl<'a> Profile<'a> {
    pub fn new(space: &'a ChainSpace, w: &'a Chain<f64>, kappa: usize) -> Profile<'a> {
        Profile { space, w, kappa, radius: 0.0 }
    }

    /// Every enclosure grows by `radius`.
    pub fn with_radius(self, radius: f64) -> Profile<'a> {
        Profile { radius, ..self }
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn space(&self) -> &ChainSpace {
        self.space
    }

    pub fn chain(&self) -> &Chain<f64> {
        self.w
    }

    /// Parity of `v`.
    pub fn parity(&self) -> u8 {
        self.w.parity
    }

    /// Half-width of the center in `v` units.
    pub fn extent(&self) -> f64 {
        self.space.sites() as f64 / self.kappa as f64
    }

    pub fn eval_plain(&self, x: f64) -> f64 {
        self.space.eval_plain(self.w, self.kappa as f64 * x)
    }

    pub fn eval(&self, x: f64) -> Ball {
        self.space.eval(self.w, self.kappa as f64 * x).widen(self.radius)
    }

    /// Upper bound of `|v|` on `[x - h/2, x + h/2]` (the interval must lie
    /// in one site of `w`): value, slope at `x` and a curvature term.
    fn local_sup(&self, x: f64, h: f64) -> f64 {
        let v = self.eval(x).mag();
        // |v| is even, so work on the right half line
        let z = libm::fabs(self.kappa as f64 * x);
        let (j, t) = split_site(z);
        let aj = j.unsigned_abs();
        if aj >= self.space.sites() {
            return v;
        }
        let a = &self.w.center[aj];
        let (_, dp) = legendre::eval_with_derivative(a.degree(), t).expect("t lies in I0");
        let (mut d1, mut slack, mut d2) = (0.0, 0.0, 0.0);
        for (n, c) in a.coeff.iter().enumerate() {
            if *c != 0.0 {
                d1 += c * dp[n];
                slack = add_up(slack, mul_up(c.abs(), derivative_bound(n)));
                d2 = add_up(d2, mul_up(c.abs(), legendre::second_derivative_bound(n)));
            }
        }
        // rounding in the slope sum stays far below 1e-12 of its absolute sum
        let slope = add_up(libm::fabs(d1), mul_up(slack, 1e-12));
        let half = mul_up(self.kappa as f64, 0.5 * h);
        add_up(v, add_up(mul_up(slope, half), mul_up(0.5 * d2, mul_up(half, half))))
    }
}

/// `u(x) = (u_L(x) + u_R(x)) / 2` with `u_L(x) = sum_{j>=0} v(x - j - 1/2)` and
/// `u_R(x) = -sum_{j>=0} v(x + j + 1/2)`; the truncated sums carry a
/// geometric remainder bound below `tol`.
pub fn build_u(p: &Profile<'_>, x: f64, tol: f64) -> Ball {
    let cs = p.space;
    let decay = decay_report(cs, p.w);
    let rk = libm::pow(cs.r().to_f64(), p.kappa as f64);
    // |v(y)| <= C r^(1/2) r^(-kappa |y|) + radius
    let c = decay.c * libm::sqrt(cs.r().to_f64()) * 1.000001;
    let remainder = |d: f64| c * libm::pow(rk, -d) / (1.0 - 1.0 / rk);
    let mut total = Ball::ZERO;
    let mut slack = 0.0;
    for side in [-1.0f64, 1.0] {
        // terms v(x + side (j + 1/2)); the distance from 0 grows with j
        let mut j = 0usize;
        let mut acc = Ball::ZERO;
        loop {
            let y = x + side * (j as f64 + 0.5);
            let d = side * y;
            if d > 0.0 && remainder(d) < 0.25 * tol {
                slack = add_up(slack, remainder(d));
                break;
            }
            acc = acc + p.eval(y);
            j += 1;
        }
        total = if side < 0.0 { total + acc } else { total - acc };
    }
    (total * Ball::from_rational(1, 2).expect("exact")).widen(0.5 * slack)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremumKind {
    PositiveMax,
    NegativeMax,
    PositiveMin,
    NegativeMin,
}

impl ExtremumKind {
    pub fn name(self) -> &'static str {
        match self {
            ExtremumKind::PositiveMax => "positive-max",
            ExtremumKind::NegativeMax => "negative-max",
            ExtremumKind::PositiveMin => "positive-min",
            ExtremumKind::NegativeMin => "negative-min",
        }
    }

    fn is_max(self) -> bool {
        matches!(self, ExtremumKind::PositiveMax | ExtremumKind::NegativeMax)
    }
}

impl fmt::Display for ExtremumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremumRecord {
    pub position: f64,
    pub value: Ball,
    pub kind: ExtremumKind,
    /// The enclosure straddles the threshold, so the record may be spurious.
    pub indeterminate: bool,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    // maximizes f on [a, b]
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Local extrema of `v` with `|v| > threshold`, sorted by position.
pub fn find_extrema(p: &Profile<'_>, threshold: f64) -> Vec<ExtremumRecord> {
    let h = 1.0 / (8.0 * p.kappa as f64);
    let half = libm::floor(p.extent() / h) as i64;
    let xs: Vec<f64> = (-half..=half).map(|i| i as f64 * h).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| p.eval_plain(x)).collect();
    let mut out = Vec::new();
    for i in 1..xs.len() - 1 {
        let (a, b, c) = (vs[i - 1], vs[i], vs[i + 1]);
        let is_max = b > a && b >= c;
        let is_min = b < a && b <= c;
        if !(is_max || is_min) || b.abs() <= 0.5 * threshold {
            continue;
        }
        let sign = if is_max { 1.0 } else { -1.0 };
        let x = golden(|t| sign * p.eval_plain(t), xs[i - 1], xs[i + 1], 1e-8);
        let value = p.eval(x);
        let kind = match (is_max, value.mid() > 0.0) {
            (true, true) => ExtremumKind::PositiveMax,
            (true, false) => ExtremumKind::NegativeMax,
            (false, true) => ExtremumKind::PositiveMin,
            (false, false) => ExtremumKind::NegativeMin,
        };
        if value.mag() <= threshold {
            continue;
        }
        let indeterminate = value.mig() <= threshold;
        out.push(ExtremumRecord { position: x, value, kind, indeterminate });
    }
    out
}

/// Checks that a true local extremum of the kind of `rec` with
/// `|v| > threshold` lies within `h` of its position, using enclosures.
pub fn certify_extremum(p: &Profile<'_>, rec: &ExtremumRecord, h: f64, threshold: f64) -> bool {
    let (a, b, c) = (rec.position - h, rec.position, rec.position + h);
    let (va, vb, vc) = (p.eval(a), p.eval(b), p.eval(c));
    if rec.kind.is_max() {
        if !(vb.lower() > va.upper() && vb.lower() > vc.upper()) {
            return false;
        }
    } else if !(vb.upper() < va.lower() && vb.upper() < vc.lower()) {
        return false;
    }
    match rec.kind {
        // the extreme value is at least as far from 0 as v(b)
        ExtremumKind::PositiveMax => vb.lower() > threshold,
        ExtremumKind::NegativeMin => vb.upper() < -threshold,
        // here the extreme value is closer to 0 than v(b): bound v on [a, c]
        ExtremumKind::PositiveMin => range_bound(p, a, c).0 > threshold,
        ExtremumKind::NegativeMax => range_bound(p, a, c).1 < -threshold,
    }
}

/// Lower and upper bounds of `v` on `[a, b]`.
fn range_bound(p: &Profile<'_>, a: f64, b: f64) -> (f64, f64) {
    let n = 64;
    let h = (b - a) / n as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let x = a + (i as f64 + 0.5) * h;
        let v = p.eval(x);
        let spread = p.local_sup(x, h) - v.mag();
        lo = lo.min(v.lower() - spread.max(0.0));
        hi = hi.max(v.upper() + spread.max(0.0));
    }
    (lo, hi)
}

/// Rigorous bounds on `sup |v|`: the lower bound is attained at a grid
/// point, the upper bound covers the whole line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupBounds {
    pub lower: f64,
    pub upper: f64,
    pub argmax: f64,
}

/// Halvings of the cells that keep the upper bound loose.
const SUP_REFINEMENTS: usize = 8;

pub fn sup_bounds(p: &Profile<'_>) -> SupBounds {
    let sites = p.space.sites();
    let kappa = p.kappa as f64;
    // cells of width h inside each w-site, so the derivative bound applies
    let per_site = 32usize;
    let h = 1.0 / (per_site as f64 * kappa);
    let mut best = SupBounds { lower: 0.0, upper: 0.0, argmax: 0.0 };
    let mut cells = Vec::with_capacity(sites * per_site);
    for j in 0..sites {
        for i in 0..per_site {
            let x = (j as f64 - 0.5) / kappa + (i as f64 + 0.5) * h;
            let v = p.eval(x);
            if v.mig() > best.lower {
                best.lower = v.mig();
                best.argmax = x;
            }
            cells.push((x, h, p.local_sup(x, h)));
        }
    }
    // split cells whose bound sits well above the attained value
    for _ in 0..SUP_REFINEMENTS {
        let gap = 1e-4 * (1.0 + best.lower);
        let (loose, tight): (Vec<_>, Vec<_>) = cells.into_iter().partition(|c| c.2 > best.lower + gap);
        cells = tight;
        if loose.is_empty() {
            break;
        }
        for (x, h, _) in loose {
            for x in [x - 0.25 * h, x + 0.25 * h] {
                let v = p.eval(x);
                if v.mig() > best.lower {
                    best.lower = v.mig();
                    best.argmax = x;
                }
                cells.push((x, 0.5 * h, p.local_sup(x, 0.5 * h)));
            }
        }
    }
    best.upper = cells.iter().fold(0.0, |u, c| u.max(c.2));
    // beyond the center only the tail bound is known
    let tail = p.space.eval(p.w, (sites as f64) + 0.25).mag();
    best.upper = best.upper.max(add_up(tail, p.radius));
    best
}

/// `sup |v|` lies in `(stated, stated + 0.1)`.
pub fn sup_in_window(b: &SupBounds, stated: f64) -> bool {
    b.lower > stated && b.upper < stated + 0.1
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    /// Least `C` with `||w_j|| r^j <= C` for every site, the tail included.
    pub c: f64,
    pub verified: bool,
    /// `||w_{j+1}|| / ||w_j||` for `j = 0..L-1` (NaN where both vanish).
    pub ratios: Vec<f64>,
}

pub fn decay_report(cs: &ChainSpace, w: &Chain<f64>) -> DecayReport {
    let norms = cs.site_norms(w);
    let mut c = 0.0f64;
    for (j, &n) in norms.iter().enumerate() {
        if n != 0.0 {
            c = c.max(mul_up(n, cs.r_pow_up(j)));
        }
    }
    let t = w.tail.norm(cs.arcs());
    if t != 0.0 {
        c = c.max(mul_up(t, cs.r_pow_up(cs.sites())));
    }
    let ratios = norms.windows(2).map(|p| if p[0] == 0.0 { f64::NAN } else { p[1] / p[0] }).collect();
    DecayReport { c, verified: c.is_finite(), ratios }
}

/// Decay beyond the outermost reported extremum: every site ratio of `w`
/// stays below `1/r`. Sites whose norms underflow are skipped.
pub fn decay_beyond(cs: &ChainSpace, w: &Chain<f64>, kappa: usize, extrema: &[ExtremumRecord]) -> bool {
    let last = extrema.iter().map(|e| e.position.abs()).fold(0.0, f64::max);
    let from = libm::ceil(last * kappa as f64) as usize + 1;
    let limit = 1.0 / cs.r().to_f64();
    let report = decay_report(cs, w);
    report.ratios.iter().skip(from).all(|&q| q.is_nan() || q < limit)
}

/// A diagram glyph from the parameter table: a height in {3, 1.5, -1.5, -3}.
pub fn glyph_kind(height: f64, verbatim: bool) -> Option<ExtremumKind> {
    let k = if height == 3.0 {
        ExtremumKind::PositiveMax
    } else if height == -3.0 {
        ExtremumKind::NegativeMin
    } else if height == 1.5 {
        if verbatim {
            ExtremumKind::NegativeMax
        } else {
            ExtremumKind::PositiveMin
        }
    } else if height == -1.5 {
        if verbatim {
            ExtremumKind::PositiveMin
        } else {
            ExtremumKind::NegativeMax
        }
    } else {
        return None;
    };
    Some(k)
}

/// Whether the kinds of `records` match `diagram` under the legend order
/// (`verbatim`) and under the geometric reading that swaps the middle glyphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagramVerdict {
    pub count: bool,
    pub verbatim: bool,
    pub geometric: bool,
}

pub fn match_diagram(records: &[ExtremumRecord], diagram: &[f64]) -> DiagramVerdict {
    let count = records.len() == diagram.len();
    let matches = |verbatim: bool| {
        count
            && records
                .iter()
                .zip(diagram)
                .all(|(r, &g)| glyph_kind(g, verbatim) == Some(r.kind))
    };
    DiagramVerdict { count, verbatim: matches(true), geometric: matches(false) }
}
