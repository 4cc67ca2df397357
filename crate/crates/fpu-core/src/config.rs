//! Exact rationals and the per-row solve configuration.

use crate::ball::Ball;
use core::fmt;
use core::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };

    /// `num / den` in lowest terms; `None` for a zero denominator.
    pub fn new(num: i64, den: i64) -> Option<Rational> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Some(Rational { num: s * num / g, den: s * den / g })
    }

    pub fn integer(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_ball(self) -> Ball {
        Ball::from_rational(self.num, self.den).expect("denominator is nonzero")
    }

    pub fn abs_lt_one(self) -> bool {
        self.num.abs() < self.den
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseRationalError;

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected an integer or a fraction p/q")
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Rational, ParseRationalError> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: i64 = p.parse().map_err(|_| ParseRationalError)?;
        let q: i64 = q.parse().map_err(|_| ParseRationalError)?;
        Rational::new(p, q).ok_or(ParseRationalError)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigError {
    Power,
    Mu,
    Parity,
    Kappa,
    Steps,
    Weight,
    Degree,
    Sites,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConfigError::Power => "power m must be 2 or 3",
            ConfigError::Mu => "mu must satisfy |mu| < 1",
            ConfigError::Parity => "odd profiles (sigma = 0) need odd m, and sigma must be 0 or 1",
            ConfigError::Kappa => "kappa must be 1 or 2",
            ConfigError::Steps => "k must be at least 1",
            ConfigError::Weight => "weight r must exceed 1",
            ConfigError::Degree => "degree D must be odd and greater than 1",
            ConfigError::Sites => "center half-width L is too small for k and kappa",
        };
        f.write_str(s)
    }
}

/// One parameter row plus discretization knobs.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    /// Power of the nonlinearity (2 or 3).
    pub m: u32,
    pub mu_bar: Rational,
    /// Parity of the wave profile `u`; `v` has parity `1 - sigma`.
    pub sigma: u8,
    pub r: Rational,
    pub k: usize,
    pub kappa: usize,
    pub rho: Rational,
    pub degree: usize,
    /// Center half-width `L`: sites `0..L` are stored explicitly.
    pub sites: usize,
    pub newton_tol: f64,
    pub max_iter: usize,
    /// Radius of the parameter interval around `mu_bar` used when certifying.
    pub mu_radius: f64,
}

pub const DEFAULT_DEGREE: usize = 31;
pub const MIN_SITES: usize = 16;
pub const MAX_SITES: usize = 64;

impl SolveConfig {
    /// Configuration with default knobs; `sup` sizes the center.
    pub fn new(m: u32, mu_bar: Rational, sigma: u8, r: Rational, k: usize, kappa: usize, sup: f64) -> SolveConfig {
        SolveConfig {
            m,
            mu_bar,
            sigma,
            r,
            k,
            kappa,
            rho: Rational::new(17, 16).expect("nonzero"),
            degree: DEFAULT_DEGREE,
            sites: default_sites(r, kappa, sup),
            newton_tol: 1e-12,
            max_iter: 50,
            mu_radius: libm::ldexp(1.0, -40),
        }
    }

    /// Parity of `v` (0 even, 1 odd).
    pub fn tau(&self) -> u8 {
        1 - self.sigma
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m != 2 && self.m != 3 {
            return Err(ConfigError::Power);
        }
        if !self.mu_bar.abs_lt_one() {
            return Err(ConfigError::Mu);
        }
        if self.sigma > 1 || (self.sigma == 0 && self.m % 2 == 0) {
            return Err(ConfigError::Parity);
        }
        if self.kappa != 1 && self.kappa != 2 {
            return Err(ConfigError::Kappa);
        }
        if self.k == 0 {
            return Err(ConfigError::Steps);
        }
        if self.r.num() <= self.r.den() || self.rho.num() < self.rho.den() {
            return Err(ConfigError::Weight);
        }
        if self.degree < 3 || self.degree % 2 == 0 {
            return Err(ConfigError::Degree);
        }
        if self.sites < (self.k + 1) * self.kappa + 2 {
            return Err(ConfigError::Sites);
        }
        Ok(())
    }
}

/// Smallest `L >= 16` with `r^(-kappa L) * sup < 1e-16`, capped at 64.
pub fn default_sites(r: Rational, kappa: usize, sup: f64) -> usize {
    let rf = r.to_f64();
    if !(rf > 1.0) {
        return MAX_SITES;
    }
    let need = libm::log(sup.max(1e-300) * 1e16) / (kappa as f64 * libm::log(rf));
    let mut l = libm::floor(need) as i64 + 1;
    // guard the floor against rounding right at an integer
    while l > 0 && libm::pow(rf, -((kappa as i64 * (l - 1)) as f64)) * sup < 1e-16 {
        l -= 1;
    }
    (l.max(0) as usize).clamp(MIN_SITES, MAX_SITES)
}
