//! Midpoint/radius enclosures of reals.
//!
//! Every native floating-point step is followed by an outward inflation of
//! the radius by `UNIT_ROUNDOFF * |mid| + ETA`, and every radius computation
//! is rounded upward with `next_up`. Nothing here touches the rounding mode,
//! so results are identical on every thread.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// Relative rounding bound of the representable format (2^-52 for binary64).
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON;
/// Smallest positive subnormal of the representable format.
pub const ETA: f64 = 4.9406564584124654e-324;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallError {
    /// An operation produced an infinite or NaN midpoint or radius.
    NonFinite,
    /// Division by an enclosure that contains zero.
    DivisionByZero,
    /// A rational with zero denominator.
    ZeroDenominator,
}

impl fmt::Display for BallError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BallError::NonFinite => f.write_str("enclosure overflowed to a non-finite value"),
            BallError::DivisionByZero => f.write_str("division by an enclosure containing zero"),
            BallError::ZeroDenominator => f.write_str("rational with zero denominator"),
        }
    }
}

/// Sum of two nonnegative reals, rounded upward.
#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return a + b;
    }
    (a + b).next_up()
}

/// Product of two nonnegative reals, rounded upward.
#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    (a * b).next_up()
}

/// Quotient of two positive reals, rounded upward.
#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    (a / b).next_up()
}

/// Quotient of two positive reals, rounded downward (never below zero).
#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = (a / b).next_down();
    if q < 0.0 {
        0.0
    } else {
        q
    }
}

/// Product of two nonnegative reals, rounded downward.
#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let q = (a * b).next_down();
    if q < 0.0 {
        0.0
    } else {
        q
    }
}

/// Worst-case rounding error of a just-computed midpoint.
#[inline]
fn mid_err(m: f64) -> f64 {
    UNIT_ROUNDOFF * m.abs() + ETA
}

/// The enclosure `{x : |x - mid| <= rad}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    mid: f64,
    rad: f64,
}

impl Default for Ball {
    fn default() -> Self {
        Ball::ZERO
    }
}

impl Ball {
    pub const ZERO: Ball = Ball { mid: 0.0, rad: 0.0 };
    pub const ONE: Ball = Ball { mid: 1.0, rad: 0.0 };

    pub fn new(mid: f64, rad: f64) -> Result<Ball, BallError> {
        if !mid.is_finite() || !rad.is_finite() || rad < 0.0 {
            return Err(BallError::NonFinite);
        }
        Ok(Ball { mid, rad })
    }

    /// An exact point. Panics on a non-finite argument.
    pub fn point(x: f64) -> Ball {
        assert!(x.is_finite(), "Ball::point of a non-finite value");
        Ball { mid: x, rad: 0.0 }
    }

    /// The zero-centred enclosure `[-r, r]`.
    pub fn radius(r: f64) -> Ball {
        assert!(r.is_finite() && r >= 0.0, "invalid radius");
        Ball { mid: 0.0, rad: r }
    }

    #[inline]
    pub fn mid(self) -> f64 {
        self.mid
    }

    #[inline]
    pub fn rad(self) -> f64 {
        self.rad
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.mid.is_finite() && self.rad.is_finite()
    }

    /// Returns `self` if both fields are finite.
    pub fn check(self) -> Result<Ball, BallError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(BallError::NonFinite)
        }
    }

    /// Encloses `p / q`. The radius is zero when the quotient is representable
    /// and one ulp of the quotient otherwise.
    pub fn from_rational(p: i64, q: i64) -> Result<Ball, BallError> {
        if q == 0 {
            return Err(BallError::ZeroDenominator);
        }
        const EXACT: u64 = 1 << 53;
        if p.unsigned_abs() <= EXACT && q.unsigned_abs() <= EXACT {
            let (pf, qf) = (p as f64, q as f64);
            let m = pf / qf;
            // fma gives m*q - p with a single rounding; it is zero exactly when
            // the quotient was representable.
            if libm::fma(m, qf, -pf) == 0.0 {
                return Ok(Ball { mid: m, rad: 0.0 });
            }
            let a = m.abs();
            return Ok(Ball { mid: m, rad: a.next_up() - a });
        }
        Ball::from_i64(p).checked_div(Ball::from_i64(q))
    }

    /// Encloses an integer (exact up to 2^53 in magnitude).
    pub fn from_i64(n: i64) -> Ball {
        let m = n as f64;
        let back = m as i128;
        if back == n as i128 {
            Ball { mid: m, rad: 0.0 }
        } else {
            Ball { mid: m, rad: m.abs().next_up() - m.abs() }
        }
    }

    /// Lower end of the enclosure, rounded downward.
    pub fn lower(self) -> f64 {
        if self.rad == 0.0 {
            self.mid
        } else {
            (self.mid - self.rad).next_down()
        }
    }

    /// Upper end of the enclosure, rounded upward.
    pub fn upper(self) -> f64 {
        if self.rad == 0.0 {
            self.mid
        } else {
            (self.mid + self.rad).next_up()
        }
    }

    /// Upper bound of `|x|` over the enclosure.
    #[inline]
    pub fn mag(self) -> f64 {
        if self.rad == 0.0 {
            self.mid.abs()
        } else {
            add_up(self.mid.abs(), self.rad)
        }
    }

    /// Lower bound of `|x|` over the enclosure (zero if it contains zero).
    pub fn mig(self) -> f64 {
        let d = (self.mid.abs() - self.rad).next_down();
        if d > 0.0 {
            d
        } else {
            0.0
        }
    }

    pub fn contains(self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    pub fn contains_ball(self, other: Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    /// Smallest ball (up to rounding) containing both arguments.
    pub fn hull(self, other: Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        let mid = 0.5 * lo + 0.5 * hi;
        let rad = (hi - mid).max(mid - lo).next_up();
        Ball { mid, rad }
    }

    /// Adds `extra >= 0` to the radius.
    #[inline]
    pub fn widen(self, extra: f64) -> Ball {
        if extra == 0.0 {
            self
        } else {
            Ball { mid: self.mid, rad: add_up(self.rad, extra) }
        }
    }

    /// Intersects with `[-1, 1]`, used for values known to be bounded by one.
    pub fn clamp_unit(self) -> Ball {
        let lo = self.lower().max(-1.0);
        let hi = self.upper().min(1.0);
        if lo > hi {
            return self;
        }
        let cand = Ball::from_bounds(lo, hi);
        if cand.rad < self.rad {
            cand
        } else {
            self
        }
    }

    /// Ball containing `[lo, hi]`.
    pub fn from_bounds(lo: f64, hi: f64) -> Ball {
        let mid = 0.5 * lo + 0.5 * hi;
        let rad = (hi - mid).max(mid - lo).max(0.0);
        let rad = if rad == 0.0 && lo == hi { 0.0 } else { rad.next_up() };
        Ball { mid, rad }
    }

    /// Square root of the nonnegative part of the enclosure.
    pub fn sqrt(self) -> Ball {
        let lo = self.lower().max(0.0);
        let hi = self.upper().max(0.0);
        let slo = if lo == 0.0 { 0.0 } else { libm::sqrt(lo).next_down().max(0.0) };
        let shi = if hi == 0.0 { 0.0 } else { libm::sqrt(hi).next_up() };
        Ball::from_bounds(slo, shi)
    }

    pub fn abs(self) -> Ball {
        if self.mid >= 0.0 {
            self
        } else {
            -self
        }
    }

    pub fn sqr(self) -> Ball {
        self * self
    }

    pub fn powi(self, n: u32) -> Ball {
        let mut acc = Ball::ONE;
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// Enclosure of `1 / self`; fails when `self` contains zero.
    pub fn recip(self) -> Result<Ball, BallError> {
        let a = self.mid.abs();
        if !(a > self.rad) {
            return Err(BallError::DivisionByZero);
        }
        let m = 1.0 / self.mid;
        let rad = if self.rad == 0.0 {
            mid_err(m)
        } else {
            // |1/x - 1/m| <= r / (|m| (|m| - r)) for |x - m| <= r < |m|
            let gap = (a - self.rad).next_down();
            if gap <= 0.0 {
                return Err(BallError::DivisionByZero);
            }
            let den = mul_down(a, gap);
            if den <= 0.0 {
                return Err(BallError::DivisionByZero);
            }
            add_up(div_up(self.rad, den), mid_err(m))
        };
        Ball { mid: m, rad }.check()
    }

    pub fn checked_add(self, o: Ball) -> Result<Ball, BallError> {
        (self + o).check()
    }

    pub fn checked_sub(self, o: Ball) -> Result<Ball, BallError> {
        (self - o).check()
    }

    pub fn checked_mul(self, o: Ball) -> Result<Ball, BallError> {
        (self * o).check()
    }

    pub fn checked_div(self, o: Ball) -> Result<Ball, BallError> {
        (self * o.recip()?).check()
    }
}

impl Add for Ball {
    type Output = Ball;
    #[inline]
    fn add(self, o: Ball) -> Ball {
        let mid = self.mid + o.mid;
        let rad = add_up(add_up(self.rad, o.rad), mid_err(mid));
        Ball { mid, rad }
    }
}

impl Sub for Ball {
    type Output = Ball;
    #[inline]
    fn sub(self, o: Ball) -> Ball {
        self + (-o)
    }
}

impl Neg for Ball {
    type Output = Ball;
    #[inline]
    fn neg(self) -> Ball {
        Ball { mid: -self.mid, rad: self.rad }
    }
}

impl Mul for Ball {
    type Output = Ball;
    #[inline]
    fn mul(self, o: Ball) -> Ball {
        let mid = self.mid * o.mid;
        let mut rad = mid_err(mid);
        if self.rad != 0.0 || o.rad != 0.0 {
            let cross = add_up(
                mul_up(self.mid.abs(), o.rad),
                mul_up(self.rad, o.mid.abs()),
            );
            rad = add_up(rad, add_up(cross, mul_up(self.rad, o.rad)));
        }
        Ball { mid, rad }
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} ± {:e}", self.mid, self.rad)
    }
}
