//! Plain-arithmetic search for approximate fixed points of
//! `G(w) = sum_{p=1}^{k} mu^(p-1) A^(2p) w^m + mu^k A^(2k) w`
//! and the finite-rank operator `M` used by the certifier.
//!
//! Newton works in normalized coordinates: slot `s = (j, n)` carries
//! `x_s = w_{j,n} / omega_s` where `omega_s P_n` at site `j` has unit norm.
//! Then the chain norm of a truncated chain is the l1 norm of `x`.

use crate::aop::{AOp, AopError};
use crate::arc::ArcError;
use crate::ball::Ball;
use crate::chain::{Chain, ChainError, ChainSpace};
use crate::config::{ConfigError, SolveConfig};
use crate::exec::Executor;
use crate::scalar::Scalar;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use nalgebra::{DMatrix, DVector};

pub const PIVOT_TOLERANCE: f64 = 1e-14;
const MAX_HALVINGS: usize = 8;
const MAX_INCREASES: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub enum SolveError {
    Config(ConfigError),
    Aop(AopError),
    Chain(ChainError),
    /// `I - J` has a pivot below the tolerance.
    NearDegenerate { pivot: f64 },
    Diverged { iteration: usize, residual: f64 },
    NonFinite,
    /// Continuation failed; the last parameter that converged is reported.
    Continuation { last_mu: f64 },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Config(e) => write!(f, "configuration: {e}"),
            SolveError::Aop(e) => write!(f, "operator: {e}"),
            SolveError::Chain(e) => write!(f, "chain: {e}"),
            SolveError::NearDegenerate { pivot } => {
                write!(f, "near-degenerate: I - J has pivot {pivot:.3e}")
            }
            SolveError::Diverged { iteration, residual } => {
                write!(f, "diverged at iteration {iteration} (residual {residual:.3e})")
            }
            SolveError::NonFinite => f.write_str("non-finite value during the solve"),
            SolveError::Continuation { last_mu } => {
                write!(f, "continuation failed; last converged mu = {last_mu}")
            }
        }
    }
}

impl From<AopError> for SolveError {
    fn from(e: AopError) -> Self {
        SolveError::Aop(e)
    }
}

impl From<ChainError> for SolveError {
    fn from(e: ChainError) -> Self {
        SolveError::Chain(e)
    }
}

impl From<ConfigError> for SolveError {
    fn from(e: ConfigError) -> Self {
        SolveError::Config(e)
    }
}

/// Truncated coordinates: sites `0..L`, modes `0..=D`, parity-restricted at
/// site 0.
#[derive(Clone, Debug)]
pub struct Basis {
    tau: u8,
    sites: usize,
    degree: usize,
    omega: Vec<f64>,
    omega_ball: Vec<Ball>,
}

impl Basis {
    pub fn new(cs: &ChainSpace, tau: u8) -> Basis {
        let (sites, degree) = (cs.sites(), cs.degree());
        let arcs = cs.arcs();
        let mut b = Basis { tau, sites, degree, omega: Vec::new(), omega_ball: Vec::new() };
        let half = Ball::from_rational(1, 2).expect("exact");
        for s in 0..b.dim() {
            let (j, n) = b.slot(s);
            let mut w = arcs.rho_inv_pow(n);
            if j > 0 {
                w = w * cs.r_inv_ball(j) * half;
            }
            b.omega_ball.push(w);
            b.omega.push(w.mid());
        }
        b
    }

    fn head(&self) -> usize {
        (self.degree + 2 - self.tau as usize) / 2
    }

    pub fn tau(&self) -> u8 {
        self.tau
    }

    pub fn dim(&self) -> usize {
        self.head() + (self.sites - 1) * (self.degree + 1)
    }

    /// `(site, mode)` of slot `s`.
    pub fn slot(&self, s: usize) -> (usize, usize) {
        let h = self.head();
        if s < h {
            (0, 2 * s + self.tau as usize)
        } else {
            let t = s - h;
            (1 + t / (self.degree + 1), t % (self.degree + 1))
        }
    }

    pub fn index(&self, j: usize, n: usize) -> Option<usize> {
        if j >= self.sites || n > self.degree {
            return None;
        }
        if j == 0 {
            (n % 2 == self.tau as usize).then_some(n / 2)
        } else {
            Some(self.head() + (j - 1) * (self.degree + 1) + n)
        }
    }

    /// Rounded normalization `omega_s`, used as the coordinate scale.
    pub fn omega(&self, s: usize) -> f64 {
        self.omega[s]
    }

    /// Enclosure of the exact normalization.
    pub fn omega_ball(&self, s: usize) -> Ball {
        self.omega_ball[s]
    }

    pub fn to_x(&self, w: &Chain<f64>) -> Vec<f64> {
        (0..self.dim())
            .map(|s| {
                let (j, n) = self.slot(s);
                w.center[j].coeff[n] / self.omega[s]
            })
            .collect()
    }

    pub fn from_x(&self, cs: &ChainSpace, x: &[f64]) -> Chain<f64> {
        let mut w = cs.zero::<f64>(self.tau);
        for (s, &v) in x.iter().enumerate() {
            let (j, n) = self.slot(s);
            w.center[j].coeff[n] = v * self.omega[s];
        }
        w
    }

    /// `omega_s P_n` at site `j` (rounded normalization).
    pub fn unit(&self, cs: &ChainSpace, s: usize) -> Chain<f64> {
        let mut w = cs.zero::<f64>(self.tau);
        let (j, n) = self.slot(s);
        w.center[j].coeff[n] = self.omega[s];
        w
    }
}

/// A cos^2 bump of half-width 1 in the profile variable `v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub amplitude: f64,
}

/// `m w^(m-1)`, the factor in the derivative of the nonlinearity.
#[derive(Clone, Debug)]
pub struct Linearization<S> {
    factor: Chain<S>,
}

#[derive(Clone, Debug)]
pub struct NewtonState {
    pub w: Chain<f64>,
    pub mu: f64,
    pub residual: f64,
    pub iterations: usize,
    pub jacobian_dim: usize,
    pub converged: bool,
    /// Residual before each iteration, ending with the final one.
    pub history: Vec<f64>,
}

/// `M = I - (I - J)^-1` on the truncated coordinates; identity-free
/// (zero) off them.
#[derive(Clone, Debug)]
pub struct FiniteRankM {
    pub matrix: DMatrix<f64>,
}

impl FiniteRankM {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Upper bound on the operator norm of `Lambda = I - M`.
    pub fn lambda_norm(&self) -> f64 {
        let n = self.dim();
        let mut best = 0.0f64;
        for c in 0..n {
            let mut s = 0.0;
            for r in 0..n {
                let v = self.matrix[(r, c)].abs();
                s = crate::ball::add_up(s, if r == c { (1.0 - self.matrix[(r, c)]).abs() } else { v });
            }
            best = best.max(s);
        }
        // the unit vectors have norm 1 up to a few roundings of omega
        best.max(1.0) * (1.0 + 1e-12)
    }
}

/// One parameter row: the operator, the coordinates and the map `G`.
#[derive(Clone, Debug)]
pub struct Problem {
    cfg: SolveConfig,
    op: AOp,
    basis: Basis,
}

impl Problem {
    pub fn new(cfg: SolveConfig) -> Result<Problem, SolveError> {
        cfg.validate()?;
        let arcs = crate::arc::ArcSpace::with_rho(cfg.degree, cfg.rho.num(), cfg.rho.den())
            .map_err(|e: ArcError| SolveError::Chain(ChainError::Arc(e)))?;
        let cs = ChainSpace::new(arcs, cfg.r, cfg.sites)?;
        let basis = Basis::new(&cs, cfg.tau());
        let op = AOp::new(cs, cfg.kappa, cfg.k)?;
        Ok(Problem { cfg, op, basis })
    }

    pub fn config(&self) -> &SolveConfig {
        &self.cfg
    }

    pub fn op(&self) -> &AOp {
        &self.op
    }

    pub fn space(&self) -> &ChainSpace {
        self.op.space()
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn mu_bar(&self) -> f64 {
        self.cfg.mu_bar.to_f64()
    }

    /// `G(w)` at parameter `mu`.
    pub fn g_map<S: Scalar>(&self, w: &Chain<S>, mu: S) -> Result<Chain<S>, SolveError> {
        let cs = self.space();
        let wm = cs.power(w, self.cfg.m)?;
        let mut g = self.op.sum_powers(&wm, mu)?;
        let muk = pow(mu, self.cfg.k);
        if !muk.is_zero() {
            let ak = self.op.power(w, self.cfg.k)?;
            cs.axpy(&mut g, muk, &ak);
        }
        Ok(g)
    }

    pub fn linearize<S: Scalar>(&self, w: &Chain<S>) -> Result<Linearization<S>, SolveError> {
        let cs = self.space();
        let m = self.cfg.m;
        let p = if m == 2 { w.clone() } else { cs.power(w, m - 1)? };
        Ok(Linearization { factor: cs.scale(&p, S::from_f64(m as f64)) })
    }

    /// `DG(w) h = sum_p mu^(p-1) A^(2p) (m w^(m-1) h) + mu^k A^(2k) h`.
    pub fn dg_apply<S: Scalar>(&self, lin: &Linearization<S>, h: &Chain<S>, mu: S) -> Result<Chain<S>, SolveError> {
        let cs = self.space();
        let p = cs.product(&lin.factor, h)?;
        let mut g = self.op.sum_powers(&p, mu)?;
        let muk = pow(mu, self.cfg.k);
        if !muk.is_zero() {
            let ak = self.op.power(h, self.cfg.k)?;
            cs.axpy(&mut g, muk, &ak);
        }
        Ok(g)
    }

    /// `G(w) - w` and its norm.
    pub fn residual(&self, w: &Chain<f64>, mu: f64) -> Result<(Chain<f64>, f64), SolveError> {
        let g = self.g_map(w, mu)?;
        let r = self.space().sub(&g, w);
        let n = self.space().norm(&r);
        if !n.is_finite() {
            return Err(SolveError::NonFinite);
        }
        Ok((r, n))
    }

    /// Truncated Jacobian of `G` at `w` in normalized coordinates.
    pub fn jacobian(&self, w: &Chain<f64>, mu: f64, exec: &dyn Executor) -> Result<DMatrix<f64>, SolveError> {
        let lin = self.linearize(w)?;
        let n = self.basis.dim();
        let cols = exec.map(n, &|s| {
            let h = self.basis.unit(self.space(), s);
            match self.dg_apply(&lin, &h, mu) {
                Ok(g) => self.basis.to_x(&g),
                Err(_) => vec![f64::NAN; n],
            }
        });
        let data: Vec<f64> = cols.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(SolveError::NonFinite);
        }
        Ok(DMatrix::from_vec(n, n, data))
    }

    /// Solution of `(I - J) d = b`.
    fn newton_direction(&self, j: DMatrix<f64>, b: &[f64]) -> Result<Vec<f64>, SolveError> {
        let n = j.nrows();
        let a = DMatrix::<f64>::identity(n, n) - j;
        let lu = a.lu();
        check_pivots(&lu)?;
        let d = lu.solve(&DVector::from_column_slice(b)).ok_or(SolveError::NearDegenerate { pivot: 0.0 })?;
        Ok(d.iter().copied().collect())
    }

    pub fn newton_solve(&self, guess: Chain<f64>, exec: &dyn Executor) -> Result<NewtonState, SolveError> {
        self.newton_solve_at(guess, self.mu_bar(), exec)
    }

    /// Newton iteration at parameter `mu`, with the tail frozen at zero.
    pub fn newton_solve_at(&self, guess: Chain<f64>, mu: f64, exec: &dyn Executor) -> Result<NewtonState, SolveError> {
        let cs = self.space();
        let mut w = guess;
        w.parity = self.cfg.tau();
        w.tail = crate::chain::TailWeight::zero(cs.arcs());
        cs.enforce_parity(&mut w);
        cs.check(&w)?;
        let (mut r, mut res) = self.residual(&w, mu)?;
        let mut state = NewtonState {
            w: w.clone(),
            mu,
            residual: res,
            iterations: 0,
            jacobian_dim: self.basis.dim(),
            converged: res < self.cfg.newton_tol,
            history: vec![res],
        };
        let mut increases = 0;
        while !state.converged && state.iterations < self.cfg.max_iter {
            let jac = self.jacobian(&w, mu, exec)?;
            let d = self.newton_direction(jac, &self.basis.to_x(&r))?;
            let step = self.basis.from_x(cs, &d);
            let mut t = 1.0;
            let mut trial;
            let mut halvings = 0;
            loop {
                trial = w.clone();
                cs.axpy(&mut trial, t, &step);
                let (tr, tres) = self.residual(&trial, mu)?;
                if tres < res || halvings == MAX_HALVINGS {
                    increases = if tres < res { 0 } else { increases + 1 };
                    r = tr;
                    res = tres;
                    break;
                }
                t *= 0.5;
                halvings += 1;
            }
            w = trial;
            state.iterations += 1;
            state.residual = res;
            state.history.push(res);
            state.w = w.clone();
            state.converged = res < self.cfg.newton_tol;
            if increases >= MAX_INCREASES {
                // a stalled iteration near roundoff is a result, not a failure
                if res < 1e-9 {
                    break;
                }
                return Err(SolveError::Diverged { iteration: state.iterations, residual: res });
            }
        }
        Ok(state)
    }

    /// Sum of parity-symmetrized cos^2 bumps, projected arc by arc.
    pub fn make_guess(&self, bumps: &[Bump]) -> Chain<f64> {
        let cs = self.space();
        let tau = self.cfg.tau();
        let kappa = self.cfg.kappa as f64;
        let g = |x: f64| -> f64 {
            bumps
                .iter()
                .map(|b| {
                    let t = (x / kappa - b.center).abs();
                    if t < 1.0 {
                        let c = libm::cos(0.5 * PI * t);
                        b.amplitude * c * c
                    } else {
                        0.0
                    }
                })
                .sum()
        };
        let sign = if tau == 0 { 1.0 } else { -1.0 };
        let mut w = cs.zero::<f64>(tau);
        for j in 0..cs.sites() {
            let x0 = j as f64;
            w.center[j] = cs.arcs().project(|t| 0.5 * (g(x0 + t) + sign * g(-x0 - t)));
        }
        cs.enforce_parity(&mut w);
        w
    }

    /// `M = I - (I - J)^-1` at `w`.
    pub fn build_m(&self, w: &Chain<f64>, mu: f64, exec: &dyn Executor) -> Result<FiniteRankM, SolveError> {
        let jac = self.jacobian(w, mu, exec)?;
        let n = jac.nrows();
        let a = DMatrix::<f64>::identity(n, n) - jac;
        let lu = a.lu();
        check_pivots(&lu)?;
        let inv = lu.try_inverse().ok_or(SolveError::NearDegenerate { pivot: 0.0 })?;
        Ok(FiniteRankM { matrix: DMatrix::<f64>::identity(n, n) - inv })
    }

    /// Re-solves along `mu_0 -> target` in `steps` steps, geometric when the
    /// endpoints share a sign and linear otherwise.
    pub fn continue_mu(&self, state: NewtonState, target: f64, steps: usize, exec: &dyn Executor) -> Result<NewtonState, SolveError> {
        let mu0 = state.mu;
        let mut cur = state;
        for i in 1..=steps {
            let f = i as f64 / steps as f64;
            let mu = if mu0 * target > 0.0 {
                mu0 * libm::pow(target / mu0, f)
            } else {
                mu0 + (target - mu0) * f
            };
            let last = cur.mu;
            match self.newton_solve_at(cur.w.clone(), mu, exec) {
                Ok(s) if s.converged || s.residual < 1e-9 => cur = s,
                _ => return Err(SolveError::Continuation { last_mu: last }),
            }
        }
        Ok(cur)
    }
}

fn check_pivots(lu: &nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>) -> Result<(), SolveError> {
    let u = lu.u();
    let mut smallest = f64::INFINITY;
    for i in 0..u.nrows() {
        smallest = smallest.min(u[(i, i)].abs());
    }
    if !(smallest >= PIVOT_TOLERANCE) {
        return Err(SolveError::NearDegenerate { pivot: smallest });
    }
    Ok(())
}

pub(crate) fn pow<S: Scalar>(x: S, k: usize) -> S {
    let mut acc = S::ONE;
    for _ in 0..k {
        acc = acc * x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Rational;
    use crate::exec::Sequential;

    fn small(m: u32, mu: Rational, sigma: u8) -> Problem {
        let mut cfg = SolveConfig::new(m, mu, sigma, Rational::integer(4), 1, 1, 1.3);
        cfg.degree = 7;
        cfg.sites = 6;
        Problem::new(cfg).unwrap()
    }

    #[test]
    fn basis_layout() {
        let p = small(3, Rational::ZERO, 1);
        let b = p.basis();
        assert_eq!(b.dim(), 4 + 5 * 8);
        assert_eq!(b.slot(1), (0, 2));
        assert_eq!(b.index(0, 1), None);
        for s in 0..b.dim() {
            let (j, n) = b.slot(s);
            assert_eq!(b.index(j, n), Some(s));
            let u = b.unit(p.space(), s);
            assert!((p.space().norm(&u) - 1.0).abs() < 1e-14);
        }
        let odd = small(3, Rational::ZERO, 0);
        assert_eq!(odd.basis().slot(0), (0, 1));
        assert_eq!(odd.basis().dim(), 4 + 5 * 8);
    }

    #[test]
    fn g_of_zero() {
        let p = small(3, Rational::new(1, 4).unwrap(), 1);
        let z = p.space().zero::<f64>(0);
        assert!(p.g_map(&z, 0.25).unwrap().is_zero());
        let lin = p.linearize(&z).unwrap();
        let mut h = p.space().zero::<f64>(0);
        h.center[1].coeff[2] = 1.0;
        let d = p.dg_apply(&lin, &h, 0.25).unwrap();
        let want = p.space().scale(&p.op().apply(&h).unwrap(), 0.25);
        assert_eq!(d, want);
    }

    #[test]
    fn zero_jacobian_gives_zero_m() {
        let p = small(3, Rational::ZERO, 1);
        let z = p.space().zero::<f64>(0);
        let m = p.build_m(&z, 0.0, &Sequential).unwrap();
        assert!(m.matrix.iter().all(|&v| v == 0.0));
        assert!((m.lambda_norm() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn guess_symmetry() {
        let p = small(3, Rational::ZERO, 1);
        let g = p.make_guess(&[Bump { center: 0.0, amplitude: 1.3 }]);
        let v = p.space().eval_plain(&g, 0.0);
        assert!((v - 1.3).abs() < 0.02);
        assert!((p.space().eval_plain(&g, 0.4) - p.space().eval_plain(&g, -0.4)).abs() < 1e-14);
        assert!(p.make_guess(&[]).is_zero());
    }
}
