//! Floating point scalar abstraction.
//!
//! Everything numeric in the crate is generic over [`Scalar`], which is
//! implemented for `f32` and `f64`. Each implementation carries the
//! tolerances used for validation, so a single-precision build does not
//! inherit double-precision thresholds it can never meet.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar type used throughout the crate.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Orthonormality and Hermiticity tolerance.
    const EPS_NORM: Self;
    /// Smallest admissible pre/post overlap modulus.
    const EPS_OVERLAP: Self;
    /// Determinant magnitude at or below which a bistochastic matrix is singular.
    const EPS_DET: Self;
    /// Tolerance on probability and stochastic row/column sums.
    const EPS_SUM: Self;

    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Lossy conversion used for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EPS_NORM: Self = 1e-10;
    const EPS_OVERLAP: Self = 1e-8;
    const EPS_DET: Self = 1e-10;
    const EPS_SUM: Self = 1e-12;
}

impl Scalar for f32 {
    const EPS_NORM: Self = 1e-5;
    const EPS_OVERLAP: Self = 1e-4;
    const EPS_DET: Self = 1e-5;
    const EPS_SUM: Self = 1e-5;
}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn re<T: Scalar>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn im<T: Scalar>(x: T) -> C<T> {
    Complex::new(T::zero(), x)
}
