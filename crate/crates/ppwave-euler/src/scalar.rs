//! Floating-point abstraction shared by every numeric routine.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar used throughout the crate (`f32` or `f64`).
///
/// The tolerances quoted in the tests and the acceptance suite assume `f64`;
/// `f32` is supported for the pointwise formulas but the singular quadrature
/// is not expected to reach those tolerances in single precision.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Converts a small integer.
    #[inline]
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits")
    }

    /// Lossy conversion used for diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
