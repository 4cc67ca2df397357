//! Contraction certificates for `N(h) = G(wbar + Lambda h) - wbar + M h`,
//! whose fixed points give fixed points `wbar + Lambda h` of `G`.
//!
//! With `eps >= ||N(0)||` and `K >= ||DN(h)||` on a ball of radius `R`, any
//! `delta <= R` with `eps + K delta < delta` traps a unique fixed point in
//! the ball of radius `delta`. `K` is the maximum over a partition of the
//! unit basis functions of the norm of `DN` applied to an enclosure of each
//! part, so it covers every `h` of norm at most 1.

use crate::ball::{add_up, div_up, mul_up, Ball};
use crate::chain::{Chain, ChainSpace};
use crate::exec::Executor;
use crate::scalar::Scalar;
use crate::solver::{FiniteRankM, Linearization, Problem, SolveError};
use crate::wave::{self, Profile, SupBounds, EXTREMUM_THRESHOLD};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Radius used when the derivative bound is computed: `R = RADIUS_FACTOR * eps`.
pub const RADIUS_FACTOR: f64 = 8.0;
/// Required bound on `K`.
pub const CONTRACTION_LIMIT: f64 = 7.0 / 8.0;

#[derive(Clone, Debug, PartialEq)]
pub enum CertifyError {
    Solve(SolveError),
    NonFinite,
}

impl fmt::Display for CertifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyError::Solve(e) => write!(f, "{e}"),
            CertifyError::NonFinite => f.write_str("enclosure overflow"),
        }
    }
}

impl From<SolveError> for CertifyError {
    fn from(e: SolveError) -> Self {
        CertifyError::Solve(e)
    }
}

/// One part of the partition of basis indices `(site, mode)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeSet {
    /// A single truncated slot.
    Single { site: usize, mode: usize },
    /// Every mode above the degree with the parity of `band` at one
    /// center site (`band` is `D+1` or `D+2`).
    SiteBand { site: usize, band: usize },
    /// One truncated mode at every tail site.
    TailMode { mode: usize },
    /// Every mode above the degree with the parity of `band` at every tail site.
    TailBand { band: usize },
}

impl ModeSet {
    /// Membership of the basis index `(site, mode)` for a chain of parity
    /// `tau`, degree `degree` and center width `sites`.
    pub fn contains(&self, site: usize, mode: usize, tau: u8, degree: usize, sites: usize) -> bool {
        if site == 0 && mode % 2 != tau as usize {
            return false;
        }
        match *self {
            ModeSet::Single { site: j, mode: n } => site == j && mode == n,
            ModeSet::SiteBand { site: j, band } => site == j && mode > degree && mode % 2 == band % 2,
            ModeSet::TailMode { mode: n } => site >= sites && mode == n,
            ModeSet::TailBand { band } => site >= sites && mode > degree && mode % 2 == band % 2,
        }
    }
}

impl fmt::Display for ModeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeSet::Single { site, mode } => write!(f, "j={site},n={mode}"),
            ModeSet::SiteBand { site, band } => write!(f, "j={site},band={band}"),
            ModeSet::TailMode { mode } => write!(f, "tail,n={mode}"),
            ModeSet::TailBand { band } => write!(f, "tail,band={band}"),
        }
    }
}

/// Singletons in basis order, then the band sets per site, then the tail.
pub fn make_partition(problem: &Problem) -> Vec<ModeSet> {
    let b = problem.basis();
    let tau = b.tau() as usize;
    let (sites, degree) = (problem.space().sites(), problem.space().degree());
    let mut out: Vec<ModeSet> = (0..b.dim())
        .map(|s| {
            let (site, mode) = b.slot(s);
            ModeSet::Single { site, mode }
        })
        .collect();
    for site in 0..sites {
        for band in [degree + 1, degree + 2] {
            if site > 0 || band % 2 == tau {
                out.push(ModeSet::SiteBand { site, band });
            }
        }
    }
    out.extend((0..=degree).map(|mode| ModeSet::TailMode { mode }));
    out.extend([degree + 1, degree + 2].map(|band| ModeSet::TailBand { band }));
    out
}

/// `1/2 r^-j rho^-n` rounded up (without the half at `j = 0`).
fn unit_weight(cs: &ChainSpace, j: usize, n: usize) -> f64 {
    let mut w = cs.arcs().rho_inv_pow(n).upper();
    if j > 0 {
        w = mul_up(0.5 * cs.r_inv_up(j), w);
    }
    w
}

/// Enclosure of every unit basis function `h^(j,n)` in `set`.
pub fn mode_enclosure(problem: &Problem, set: &ModeSet) -> Chain<Ball> {
    let cs = problem.space();
    let tau = problem.basis().tau();
    let l = cs.sites();
    let mut h = cs.zero::<Ball>(tau);
    match *set {
        ModeSet::Single { site, mode } => {
            let s = problem.basis().index(site, mode).expect("admissible slot");
            h.center[site].coeff[mode] = problem.basis().omega_ball(s);
        }
        ModeSet::SiteBand { site, band } => h.center[site].band[band] = unit_weight(cs, site, band),
        ModeSet::TailMode { mode } => h.tail.coeff[mode] = unit_weight(cs, l, mode),
        ModeSet::TailBand { band } => h.tail.band[band] = unit_weight(cs, l, band),
    }
    h
}

/// `wbar` plus every function of norm at most `x`.
pub fn enclose_ball(problem: &Problem, wbar: &Chain<f64>, x: f64) -> Chain<Ball> {
    let cs = problem.space();
    let tau = problem.basis().tau() as usize;
    let rho_inv = cs.arcs().rho_inv_pow(1).upper();
    let mut w = cs.to_ball(wbar);
    let b0 = &mut w.center[0].band[tau];
    *b0 = add_up(*b0, mul_up(x, cs.arcs().rho_inv_pow(tau).upper()));
    let part = |j: usize| mul_up(0.5 * x, cs.r_inv_up(j));
    for j in 1..cs.sites() {
        let e = part(j);
        let a = &mut w.center[j];
        a.band[0] = add_up(a.band[0], e);
        a.band[1] = add_up(a.band[1], mul_up(e, rho_inv));
    }
    let e = part(cs.sites());
    w.tail.band[0] = add_up(w.tail.band[0], e);
    w.tail.band[1] = add_up(w.tail.band[1], mul_up(e, rho_inv));
    w
}

/// `M h` for an enclosure `h`; only truncated coefficients are read, so
/// bands at degree `<= D` are first made explicit.
pub fn apply_m(problem: &Problem, m: &FiniteRankM, h: &Chain<Ball>) -> Chain<Ball> {
    let cs = problem.space();
    let b = problem.basis();
    let mut h = h.clone();
    for a in h.center.iter_mut() {
        cs.arcs().expand_bands(a);
    }
    let x: Vec<Ball> = (0..b.dim())
        .map(|s| {
            let (j, n) = b.slot(s);
            h.center[j].coeff[n].checked_div(Ball::point(b.omega(s))).expect("omega > 0")
        })
        .collect();
    let mut out = cs.zero::<Ball>(b.tau());
    for t in 0..b.dim() {
        let mut acc = Ball::ZERO;
        for (s, xs) in x.iter().enumerate() {
            let mts = m.matrix[(t, s)];
            if mts != 0.0 && !xs.is_zero() {
                acc = acc + Ball::point(mts) * *xs;
            }
        }
        let (j, n) = b.slot(t);
        out.center[j].coeff[n] = acc * Ball::point(b.omega(t));
    }
    out
}

/// `M h^s` for the singleton `s`: column `s` of `M` in coordinates.
fn m_column(problem: &Problem, m: &FiniteRankM, s: usize) -> Chain<Ball> {
    let cs = problem.space();
    let b = problem.basis();
    let xs = b.omega_ball(s).checked_div(Ball::point(b.omega(s))).expect("omega > 0");
    let mut out = cs.zero::<Ball>(b.tau());
    for t in 0..b.dim() {
        let mts = m.matrix[(t, s)];
        if mts != 0.0 {
            let (j, n) = b.slot(t);
            out.center[j].coeff[n] = Ball::point(mts) * xs * Ball::point(b.omega(t));
        }
    }
    out
}

/// Upper bound on `||G(wbar) - wbar||` over the parameter interval `mu`.
pub fn contr_zero(problem: &Problem, wbar: &Chain<f64>, mu: Ball) -> Result<f64, CertifyError> {
    let cs = problem.space();
    let wb = cs.to_ball(wbar);
    let g = problem.g_map(&wb, mu)?;
    let e = cs.norm(&cs.sub(&g, &wb));
    if e.is_finite() {
        Ok(e)
    } else {
        Err(CertifyError::NonFinite)
    }
}

/// Upper bound on `||DN h||` over the enclosure of `set`, with
/// `DN h = DG(w)(h - M h) + M h`.
pub fn dcontr_bound(problem: &Problem, lin: &Linearization<Ball>, m: &FiniteRankM, set: &ModeSet, mu: Ball) -> Result<f64, CertifyError> {
    let cs = problem.space();
    let h = mode_enclosure(problem, set);
    let y = match *set {
        ModeSet::Single { site, mode } => {
            let s = problem.basis().index(site, mode).expect("admissible slot");
            let mh = m_column(problem, m, s);
            let v = cs.sub(&h, &mh);
            let mut y = problem.dg_apply(lin, &v, mu)?;
            cs.add_assign(&mut y, &mh);
            y
        }
        // M vanishes on functions without truncated coefficients
        _ => problem.dg_apply(lin, &h, mu)?,
    };
    let n = cs.norm(&y);
    if n.is_finite() {
        Ok(n)
    } else {
        Err(CertifyError::NonFinite)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// `eps + K delta < delta`.
    Epsilon,
    /// `K < 7/8`.
    Contraction,
    /// `delta < 8 eps`.
    Radius,
    /// Extrema, sup-norm window or decay.
    Profile,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::Epsilon => "epsilon",
            Clause::Contraction => "contraction",
            Clause::Radius => "radius",
            Clause::Profile => "profile",
        }
    }
}

/// Expected features of the profile `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileExpect {
    pub extrema: usize,
    pub sup_base: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileVerdict {
    pub extrema_found: usize,
    pub extrema_certified: usize,
    pub sup: SupBounds,
    pub sup_ok: bool,
    pub decay_ok: bool,
    pub pass: bool,
}

/// Profile checks for the true solution within `radius` of `wbar`.
pub fn check_profile(problem: &Problem, wbar: &Chain<f64>, radius: f64, expect: &ProfileExpect) -> ProfileVerdict {
    let cs = problem.space();
    let kappa = problem.config().kappa;
    let p = Profile::new(cs, wbar, kappa).with_radius(radius);
    let ex: Vec<_> = wave::find_extrema(&p, EXTREMUM_THRESHOLD).into_iter().filter(|e| !e.indeterminate).collect();
    let h = 1.0 / (16.0 * kappa as f64);
    let certified = ex.iter().filter(|e| wave::certify_extremum(&p, e, h, EXTREMUM_THRESHOLD)).count();
    let sup = wave::sup_bounds(&p);
    let sup_ok = wave::sup_in_window(&sup, expect.sup_base);
    let decay_ok = wave::decay_beyond(cs, wbar, kappa, &ex);
    let pass = ex.len() == expect.extrema && certified == expect.extrema && sup_ok && decay_ok;
    ProfileVerdict { extrema_found: ex.len(), extrema_certified: certified, sup, sup_ok, decay_ok, pass }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub eps: f64,
    /// Bound on `||DN||` over the ball of radius `RADIUS_FACTOR * eps`.
    pub k: f64,
    pub delta: f64,
    /// `||Lambda|| delta`: distance from `wbar` to the true fixed point.
    pub delta_prime: f64,
    pub lambda_norm: f64,
    pub mu: Ball,
    pub bounds: Vec<(ModeSet, f64)>,
    pub profile: Option<ProfileVerdict>,
    pub failures: Vec<Clause>,
    pub pass: bool,
}

impl Certificate {
    /// The set attaining `k`.
    pub fn worst(&self) -> Option<(ModeSet, f64)> {
        self.bounds.iter().copied().fold(None, |acc, (s, b)| match acc {
            Some((_, a)) if a >= b => acc,
            _ => Some((s, b)),
        })
    }
}

/// Parameter interval `mu_bar +- radius`.
pub fn mu_interval(problem: &Problem, radius: f64) -> Ball {
    problem.config().mu_bar.to_ball().widen(radius)
}

/// Builds `M` at `wbar` and certifies.
pub fn certify(problem: &Problem, wbar: &Chain<f64>, mu_radius: f64, exec: &dyn Executor, expect: Option<&ProfileExpect>) -> Result<Certificate, CertifyError> {
    let m = problem.build_m(wbar, problem.mu_bar(), exec)?;
    certify_with(problem, wbar, &m, mu_radius, exec, expect)
}

pub fn certify_with(
    problem: &Problem,
    wbar: &Chain<f64>,
    m: &FiniteRankM,
    mu_radius: f64,
    exec: &dyn Executor,
    expect: Option<&ProfileExpect>,
) -> Result<Certificate, CertifyError> {
    let mu = mu_interval(problem, mu_radius);
    let eps = contr_zero(problem, wbar, mu)?;
    let lambda_norm = m.lambda_norm();
    let radius = mul_up(RADIUS_FACTOR, eps);
    let w_enc = enclose_ball(problem, wbar, mul_up(lambda_norm, radius));
    let lin = problem.linearize(&w_enc)?;
    let sets = make_partition(problem);
    let raw = exec.map(sets.len(), &|i| {
        vec![dcontr_bound(problem, &lin, m, &sets[i], mu).unwrap_or(f64::INFINITY)]
    });
    let bounds: Vec<(ModeSet, f64)> = sets.iter().copied().zip(raw.into_iter().map(|v| v[0])).collect();
    let k = bounds.iter().map(|b| b.1).fold(0.0, f64::max);
    if !k.is_finite() {
        return Err(CertifyError::NonFinite);
    }
    let lo = if k < 1.0 { div_up(eps, Ball::point(1.0).checked_sub(Ball::point(k)).map(|b| b.lower()).unwrap_or(0.0)) } else { f64::INFINITY };
    let delta = if lo < radius { 0.5 * (lo + radius) } else { radius };
    let mut failures = Vec::new();
    if !(add_up(eps, mul_up(k, delta)) < delta) {
        failures.push(Clause::Epsilon);
    }
    if !(k < CONTRACTION_LIMIT) {
        failures.push(Clause::Contraction);
    }
    if !(delta < radius) {
        failures.push(Clause::Radius);
    }
    let delta_prime = mul_up(lambda_norm, delta);
    let profile = expect.map(|e| check_profile(problem, wbar, delta_prime, e));
    if profile.as_ref().is_some_and(|p| !p.pass) {
        failures.push(Clause::Profile);
    }
    Ok(Certificate {
        eps,
        k,
        delta,
        delta_prime,
        lambda_norm,
        mu,
        bounds,
        profile,
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Rational, SolveConfig};

    fn small(tau_sigma: u8) -> Problem {
        let mut cfg = SolveConfig::new(3, Rational::ZERO, tau_sigma, Rational::integer(4), 1, 1, 1.3);
        cfg.degree = 3;
        cfg.sites = 4;
        Problem::new(cfg).unwrap()
    }

    #[test]
    fn partition_covers_once() {
        let p = small(1);
        let parts = make_partition(&p);
        let (d, l) = (3, 4);
        assert_eq!(parts.len(), p.basis().dim() + 2 * l - 1 + (d + 1) + 2);
        assert!(parts.contains(&ModeSet::Single { site: 0, mode: 0 }));
        assert!(parts.contains(&ModeSet::Single { site: 0, mode: 2 }));
        assert!(!parts.contains(&ModeSet::Single { site: 0, mode: 1 }));
        for j in 0..l + 3 {
            for n in 0..d + 3 {
                let hits = parts.iter().filter(|s| s.contains(j, n, 0, d, l)).count();
                let admissible = j > 0 || n % 2 == 0;
                assert_eq!(hits, admissible as usize, "({j}, {n})");
            }
        }
    }

    #[test]
    fn unit_enclosures_have_norm_one() {
        let p = small(1);
        for set in make_partition(&p) {
            let h = mode_enclosure(&p, &set);
            let n = p.space().norm(&h);
            assert!((1.0..1.0 + 1e-12).contains(&n), "{set}: {n}");
        }
    }

    #[test]
    fn eps_at_zero() {
        let p = small(1);
        let z = p.space().zero::<f64>(0);
        assert_eq!(contr_zero(&p, &z, Ball::ZERO).unwrap(), 0.0);
    }
}
