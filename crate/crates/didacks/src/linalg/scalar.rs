//! Real-arithmetic abstraction shared by the dense solvers and the
//! closed-form kernels.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// A real number type the solvers and kernels can be instantiated with.
///
/// Two backends ship with the crate: `f64` (about 16 significant decimal
/// digits) and [`crate::linalg::Dd`], a compensated double-double pair
/// (about 31 digits). Everything downstream of this trait is deterministic
/// for a fixed backend.
pub trait Scalar:
    Copy
    + Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    /// Round to the nearest `f64`.
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    /// Unit roundoff of the backend.
    fn epsilon() -> f64;

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn epsilon() -> f64 {
        f64::EPSILON
    }
}
