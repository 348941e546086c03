use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar the library is generic over: `f32` or `f64`.
///
/// Tolerances quoted throughout the crate are calibrated for `f64`; the
/// `f32` instantiation evaluates the same closed forms at single precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// 1/√2, the half-diagonal of the diamond domain.
    #[inline]
    fn half_diag() -> Self {
        Self::FRAC_1_SQRT_2()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Evaluates a polynomial with coefficients ordered from low to high degree.
pub(crate) fn horner<T: Real>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

/// Scientific notation with 17 significant digits, enough to round-trip
/// any `f64`.
pub fn sci17(x: f64) -> String {
    format!("{x:.16e}")
}
