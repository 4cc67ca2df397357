//! One arithmetic contract for the two scalar modes: plain `f64` for the
//! Newton search and [`Ball`] for the certifier.

use crate::ball::Ball;
use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True when values are enclosures and error bands must be tracked.
    const RIGOROUS: bool;
    const ZERO: Self;
    const ONE: Self;

    /// Exact embedding of a representable real.
    fn from_f64(x: f64) -> Self;
    /// `p / q`, enclosed in rigorous mode and rounded otherwise.
    fn from_rational(p: i64, q: i64) -> Self;
    /// Picks the plain or the enclosure version of a tabulated constant.
    fn select(plain: f64, ball: Ball) -> Self;
    /// Upper bound on the absolute value.
    fn mag(self) -> f64;
    fn mid(self) -> f64;
    fn to_ball(self) -> Ball;
    /// Adds an uncertainty radius; a no-op for plain scalars.
    fn widen(self, r: f64) -> Self;
    /// True only for an exact zero.
    fn is_zero(self) -> bool;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    const RIGOROUS: bool = false;
    const ZERO: f64 = 0.0;
    const ONE: f64 = 1.0;

    #[inline]
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn from_rational(p: i64, q: i64) -> f64 {
        p as f64 / q as f64
    }
    #[inline]
    fn select(plain: f64, _ball: Ball) -> f64 {
        plain
    }
    #[inline]
    fn mag(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn mid(self) -> f64 {
        self
    }
    fn to_ball(self) -> Ball {
        Ball::point(self)
    }
    #[inline]
    fn widen(self, _r: f64) -> f64 {
        self
    }
    #[inline]
    fn is_zero(self) -> bool {
        self == 0.0
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Ball {
    const RIGOROUS: bool = true;
    const ZERO: Ball = Ball::ZERO;
    const ONE: Ball = Ball::ONE;

    #[inline]
    fn from_f64(x: f64) -> Ball {
        Ball::point(x)
    }
    fn from_rational(p: i64, q: i64) -> Ball {
        Ball::from_rational(p, q).expect("nonzero denominator")
    }
    #[inline]
    fn select(_plain: f64, ball: Ball) -> Ball {
        ball
    }
    #[inline]
    fn mag(self) -> f64 {
        Ball::mag(self)
    }
    #[inline]
    fn mid(self) -> f64 {
        Ball::mid(self)
    }
    fn to_ball(self) -> Ball {
        self
    }
    #[inline]
    fn widen(self, r: f64) -> Ball {
        Ball::widen(self, r)
    }
    #[inline]
    fn is_zero(self) -> bool {
        self.mid() == 0.0 && self.rad() == 0.0
    }
    fn is_finite(self) -> bool {
        Ball::is_finite(self)
    }
}
