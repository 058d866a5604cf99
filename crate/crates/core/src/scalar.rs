//! Scalar abstraction for the numeric parts of the pipeline.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar usable by the motif matrices and the PCA.
///
/// Implemented for `f32` and `f64`. The pipeline itself always runs in `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Off-diagonal tolerance used by the Jacobi sweeps.
    fn jacobi_tolerance() -> Self;

    fn from_count(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("u64 fits in a float")
    }

    fn from_f64_lossy(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 converts to scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn jacobi_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn jacobi_tolerance() -> Self {
        // 1e-12 is below f32 resolution.
        4.0 * f32::EPSILON
    }
}
