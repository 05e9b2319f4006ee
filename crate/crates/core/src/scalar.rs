//! Scalar abstraction shared by the geodesic and skyline code.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the engine can run on: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + FromStr + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion used for constants and parsed text.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 always converts to a float scalar")
    }

    /// Whole seconds as a scalar cost value.
    fn from_seconds(s: u64) -> Self {
        Self::from_u64(s).expect("u64 always converts to a float scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
