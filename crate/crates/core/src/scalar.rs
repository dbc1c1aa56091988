//! Scalar abstraction for the numerical kernels.
//!
//! Everything in this crate is written against a floating-point scalar
//! trait so that the same code runs in `f32` or `f64`. All shipped
//! tolerances are tuned for `f64`; the concrete aliases at the crate
//! root pin that type for downstream users.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Floating-point scalar the solvers are generic over.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Shorthand for lossy conversion of an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal conversion")
    }

    /// Lossy conversion from `usize`.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize conversion")
    }

    /// Widening conversion to `f64` (used for diagnostics and I/O).
    fn as_f64(self) -> f64 {
        self.to_f64().expect("f64 conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the crate scalar.
pub type C<T> = Complex<T>;

/// `e^{i a}` for a real angle.
pub fn cis<T: Scalar>(a: T) -> C<T> {
    C::new(a.cos(), a.sin())
}
