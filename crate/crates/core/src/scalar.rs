//! Floating point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// A real scalar usable by the kinematics, guidance and integration code.
///
/// Implemented for `f32` and `f64`. Everything in this crate is written
/// against this trait; the crate root exports `f64` aliases for the common
/// case.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion used for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn of_u32(value: u32) -> Self {
        Self::from_f64(f64::from(value)).expect("u32 representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_pi<T: Scalar>(angle: T) -> T {
    let two_pi = T::TAU();
    let mut a = (angle + T::PI()) % two_pi;
    if a <= T::zero() {
        a = a + two_pi;
    }
    a - T::PI()
}

/// Wraps an angle into `[0, 2pi)`.
pub fn wrap_two_pi<T: Scalar>(angle: T) -> T {
    let two_pi = T::TAU();
    let mut a = angle % two_pi;
    if a < T::zero() {
        a = a + two_pi;
    }
    // `a + two_pi` can round up to exactly 2pi for tiny negative inputs.
    if a >= two_pi {
        a = a - two_pi;
    }
    a
}
