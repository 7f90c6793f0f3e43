//! Integer scalar multiplication of a sample pair by `(q, 1/q)`.
//!
//! Three rounded lifting steps followed by a swap-and-negate:
//!
//! ```text
//! a  <- x2 - floor(q * x1)
//! b  <- x1 + floor(a / q)
//! a  <- a  - floor(q * b)
//! (x1', x2') <- (-a, b)            x1' ~ q * x1,  x2' ~ x2 / q
//! ```
//!
//! The inverse replays the same three rounded quantities in reverse order, so
//! it is exact for every integer pair regardless of `q`. Products and
//! quotients are single binary64 operations followed by `floor` (toward
//! negative infinity), which makes the rounding bit-identical on any IEEE-754
//! platform.

use crate::error::{Error, Result};

/// Largest accepted input magnitude.
pub const HEADROOM: i64 = 1 << 24;

pub const MIN_GAIN: f64 = 1.0 / 64.0;
pub const MAX_GAIN: f64 = 64.0;

/// A validated lifting gain in `[1/64, 64]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarGain(f64);

impl ScalarGain {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && (MIN_GAIN..=MAX_GAIN).contains(&q) {
            Ok(ScalarGain(q))
        } else {
            Err(Error::GainOutOfRange(q))
        }
    }

    pub const ONE: ScalarGain = ScalarGain(1.0);

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

#[inline]
fn floor_mul(q: f64, x: i64) -> i64 {
    (q * x as f64).floor() as i64
}

#[inline]
fn floor_div(x: i64, q: f64) -> i64 {
    (x as f64 / q).floor() as i64
}

fn check_headroom(v: i64) -> Result<()> {
    if v.abs() > HEADROOM {
        Err(Error::Headroom(v))
    } else {
        Ok(())
    }
}

fn to_i32(v: i64) -> Result<i32> {
    i32::try_from(v).map_err(|_| Error::Headroom(v))
}

/// Forward scalar lift: returns `(x1', x2') ~ (q * x1, x2 / q)`.
#[inline]
pub fn forward_scalar_lift(x1: i32, x2: i32, q: ScalarGain) -> Result<(i32, i32)> {
    let (x1, x2) = (x1 as i64, x2 as i64);
    check_headroom(x1)?;
    check_headroom(x2)?;
    let q = q.get();
    let mut a = x2 - floor_mul(q, x1);
    let b = x1 + floor_div(a, q);
    a -= floor_mul(q, b);
    Ok((to_i32(-a)?, to_i32(b)?))
}

/// Exact inverse of [`forward_scalar_lift`] for the same gain.
#[inline]
pub fn inverse_scalar_lift(x1p: i32, x2p: i32, q: ScalarGain) -> Result<(i32, i32)> {
    let q = q.get();
    let mut b = x2p as i64;
    let mut a = -(x1p as i64);
    a += floor_mul(q, b);
    b -= floor_div(a, q);
    a += floor_mul(q, b);
    Ok((to_i32(b)?, to_i32(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(q: f64) -> ScalarGain {
        ScalarGain::new(q).unwrap()
    }

    /// Step-by-step trace written out independently of the implementation.
    fn trace_forward(x1: i64, x2: i64, q: f64) -> (i64, i64) {
        let x2 = x2 - (q * x1 as f64).floor() as i64;
        let x1 = x1 + (x2 as f64 / q).floor() as i64;
        let x2 = x2 - (q * x1 as f64).floor() as i64;
        (-x2, x1)
    }

    #[test]
    fn identity_gain() {
        assert_eq!(
            forward_scalar_lift(10, 7, ScalarGain::ONE).unwrap(),
            (10, 7)
        );
        for (u, v) in [(-5, 3), (0, 0), (1000, -999), (-(1 << 20), 1 << 20)] {
            assert_eq!(forward_scalar_lift(u, v, ScalarGain::ONE).unwrap(), (u, v));
            assert_eq!(inverse_scalar_lift(u, v, ScalarGain::ONE).unwrap(), (u, v));
        }
    }

    #[test]
    fn hand_trace_q2() {
        // a = 7 - 20 = -13; b = 10 + floor(-6.5) = 3; a = -13 - 6 = -19
        assert_eq!(forward_scalar_lift(10, 7, g(2.0)).unwrap(), (19, 3));
        assert_eq!(trace_forward(10, 7, 2.0), (19, 3));
        // a = -19 + 6 = -13; b = 3 - floor(-6.5) = 10; a = -13 + 20 = 7
        assert_eq!(inverse_scalar_lift(19, 3, g(2.0)).unwrap(), (10, 7));
    }

    #[test]
    fn zero_fixed_point() {
        assert_eq!(forward_scalar_lift(0, 0, g(2.0)).unwrap(), (0, 0));
    }

    #[test]
    fn matches_trace_and_inverts_exhaustively() {
        for q in [0.3, 0.7, 1.5, 2.0] {
            for x1 in -100..=100 {
                for x2 in -100..=100 {
                    let (a, b) = forward_scalar_lift(x1, x2, g(q)).unwrap();
                    assert_eq!((a as i64, b as i64), trace_forward(x1 as i64, x2 as i64, q));
                    assert_eq!(inverse_scalar_lift(a, b, g(q)).unwrap(), (x1, x2));
                }
            }
        }
    }

    #[test]
    fn approximate_scaling_bound() {
        for q in [1.0 / 64.0, 0.3, 0.840896, 1.0, 1.19, 7.5, 64.0] {
            for x1 in (-3000..=3000).step_by(37) {
                for x2 in (-3000..=3000).step_by(41) {
                    let (a, b) = forward_scalar_lift(x1, x2, g(q)).unwrap();
                    assert!((a as f64 - q * x1 as f64).abs() <= 2.0 + q);
                    assert!((b as f64 - x2 as f64 / q).abs() <= 2.0 + 1.0 / q);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_gain_and_headroom() {
        assert!(matches!(
            ScalarGain::new(0.0),
            Err(Error::GainOutOfRange(_))
        ));
        assert!(ScalarGain::new(65.0).is_err());
        assert!(ScalarGain::new(f64::NAN).is_err());
        assert!(ScalarGain::new(1.0 / 64.0).is_ok());
        assert!(matches!(
            forward_scalar_lift((1 << 24) + 1, 0, g(2.0)),
            Err(Error::Headroom(_))
        ));
    }

    #[test]
    fn inverse_is_exact_on_arbitrary_pairs() {
        // the inverse also undoes pairs that forward never produced
        for q in [0.37, 3.3] {
            for x1 in -50..=50 {
                for x2 in -50..=50 {
                    let (u, v) = inverse_scalar_lift(x1, x2, g(q)).unwrap();
                    assert_eq!(forward_scalar_lift(u, v, g(q)).unwrap(), (x1, x2));
                }
            }
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn roundtrip_wide_range(
            x1 in -(1i32 << 24)..=(1 << 24),
            x2 in -(1i32 << 24)..=(1 << 24),
            q in MIN_GAIN..=MAX_GAIN,
        ) {
            let q = ScalarGain::new(q).unwrap();
            let (a, b) = forward_scalar_lift(x1, x2, q).unwrap();
            prop_assert_eq!(inverse_scalar_lift(a, b, q).unwrap(), (x1, x2));
        }
    }
}
