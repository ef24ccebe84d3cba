//! Scalar abstractions shared by the numeric parts of the crate.
//!
//! The unitary oracle is generic over [`Real`] so it can run in `f32` for
//! quick smoke checks and `f64` for the equivalence tests. Speedup ratios are
//! generic over [`SpeedupScalar`], which adds an exact rational backend so the
//! `combined = compiler * hardware` law can be checked without rounding.

use std::fmt::Debug;
use std::ops::Mul;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, ToPrimitive};

/// Floating point type usable by the statevector/unitary oracle.
pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {
    fn from_f64(value: f64) -> Self;
}

impl Real for f32 {
    fn from_f64(value: f64) -> Self {
        value as f32
    }
}

impl Real for f64 {
    fn from_f64(value: f64) -> Self {
        value
    }
}

/// A number that can represent the ratio of two cycle counts.
pub trait SpeedupScalar: Clone + PartialEq + Debug + Mul<Output = Self> {
    /// `numerator / denominator`; a zero denominator yields one (no work on
    /// either side means no speedup).
    fn from_cycles(numerator: u64, denominator: u64) -> Self;

    fn to_f64(&self) -> f64;
}

impl SpeedupScalar for f64 {
    fn from_cycles(numerator: u64, denominator: u64) -> Self {
        if denominator == 0 {
            return 1.0;
        }
        numerator as f64 / denominator as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl SpeedupScalar for f32 {
    fn from_cycles(numerator: u64, denominator: u64) -> Self {
        if denominator == 0 {
            return 1.0;
        }
        (numerator as f64 / denominator as f64) as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl SpeedupScalar for Ratio<u128> {
    fn from_cycles(numerator: u64, denominator: u64) -> Self {
        if denominator == 0 {
            return Ratio::from_integer(1);
        }
        Ratio::new(u128::from(numerator), u128::from(denominator))
    }

    fn to_f64(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }
}
