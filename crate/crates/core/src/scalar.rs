//! The real scalar type every module is generic over.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + FromStr
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal; every `f64` is representable (possibly rounded).
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal fits the scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Default tolerance for boundary membership after composed maps.
    fn membership_tol() -> Self;
}

impl Scalar for f64 {
    fn membership_tol() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn membership_tol() -> Self {
        1e-5
    }
}
