//! Scalar abstraction shared by every module.
//!
//! All geometry in this crate is written against [`Real`], so the same code
//! runs in `f32` or `f64`. Default tolerances are attached to the scalar type
//! because a threshold like `1e-12` is meaningless at single precision.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the reduction and membership code.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Accepted deviation of a group element's determinant from 1.
    const DET_TOL: Self;
    /// Relative tolerance for recomposing a matrix from its coordinates.
    const RECOMP_TOL: Self;
    /// Absolute tolerance for reporting a point as lying on a region boundary.
    const BOUNDARY_TOL: Self;
    /// Distance from an integer below which a matrix entry is treated as integral.
    const INTEGRAL_TOL: Self;

    /// Converts an `f64` literal. Only used for constants that every
    /// floating-point type can represent approximately.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f64 {
    const DET_TOL: f64 = 1e-9;
    const RECOMP_TOL: f64 = 1e-12;
    const BOUNDARY_TOL: f64 = 1e-9;
    const INTEGRAL_TOL: f64 = 1e-6;
}

impl Real for f32 {
    const DET_TOL: f32 = 1e-4;
    const RECOMP_TOL: f32 = 1e-5;
    const BOUNDARY_TOL: f32 = 1e-4;
    const INTEGRAL_TOL: f32 = 1e-3;
}
