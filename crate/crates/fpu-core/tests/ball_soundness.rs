//! Randomized containment: every result ball must contain the exact result
//! for points drawn from the operand balls.

mod common;

use common::*;
use fpu_core::Ball;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn holds(b: Ball, x: &Q) -> bool {
    abs_le(&(x - from_f64(b.mid())), &from_f64(b.rad()))
}

/// A ball with a mid of moderate exponent and a radius up to `2^-10 |mid|`.
fn ball() -> impl Strategy<Value = Ball> {
    (-1e6f64..1e6, 0u32..60, 0.0f64..1.0).prop_map(|(m, e, r)| {
        let rad = m.abs() * r * f64::powi(2.0, -(10 + e as i32));
        Ball::new(m, rad).unwrap()
    })
}

/// A point of `b` as an exact rational: `mid + t rad` for `t` in [-1, 1].
fn point(b: Ball, t: i64) -> Q {
    from_f64(b.mid()) + from_f64(b.rad()) * q(t, 64)
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 10_000, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn add_contains(a in ball(), b in ball(), s in -64i64..=64, t in -64i64..=64) {
        prop_assert!(holds(a + b, &(point(a, s) + point(b, t))));
    }

    #[test]
    fn sub_contains(a in ball(), b in ball(), s in -64i64..=64, t in -64i64..=64) {
        prop_assert!(holds(a - b, &(point(a, s) - point(b, t))));
    }

    #[test]
    fn mul_contains(a in ball(), b in ball(), s in -64i64..=64, t in -64i64..=64) {
        prop_assert!(holds(a * b, &(point(a, s) * point(b, t))));
    }

    #[test]
    fn div_contains(a in ball(), b in ball(), s in -64i64..=64, t in -64i64..=64) {
        let y = point(b, t);
        prop_assume!(!y.is_zero());
        if let Ok(c) = a.checked_div(b) {
            prop_assert!(holds(c, &(point(a, s) / y)));
        }
    }

    #[test]
    fn sqr_contains(a in ball(), s in -64i64..=64) {
        let x = point(a, s);
        prop_assert!(holds(a.sqr(), &(&x * &x)));
    }

    #[test]
    fn sqrt_brackets(a in ball(), s in -64i64..=64) {
        let a = a.abs();
        let x = point(a, s);
        prop_assume!(!x.is_negative());
        let r = a.sqrt();
        let lo = from_f64(r.lower().max(0.0));
        let hi = from_f64(r.upper());
        prop_assert!(&lo * &lo <= x && x <= &hi * &hi);
    }

    #[test]
    fn rationals_contain(p in -1_000_000i64..1_000_000, r in 1i64..1_000_000) {
        prop_assert!(holds(Ball::from_rational(p, r).unwrap(), &q(p, r)));
    }
}

#[test]
fn thirds_are_widened() {
    let b = Ball::from_rational(1, 3).unwrap();
    assert!(b.rad() > 0.0);
    assert!(holds(b, &q(1, 3)));
}
