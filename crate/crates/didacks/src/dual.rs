//! First-order forward-mode dual numbers over any [`Scalar`] backend.
//!
//! Used to differentiate the closed-form kernel expressions with respect to
//! source coordinates (dipole entries) and to produce exact gradients of the
//! test functions. Nesting `Dual<Dual<S>>` yields the mixed second
//! derivatives needed for dipole-dipole Gram entries.

use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::linalg::Scalar;

/// Value plus directional derivative; arithmetic follows the chain rule
/// exactly, so no truncation error enters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<S> {
    pub val: S,
    pub der: S,
}

impl<S: Scalar> Dual<S> {
    #[inline]
    pub fn new(val: S, der: S) -> Self {
        Dual { val, der }
    }

    /// Lift a constant: derivative zero.
    #[inline]
    pub fn constant(val: S) -> Self {
        Dual {
            val,
            der: S::zero(),
        }
    }

    /// Seed a differentiation variable: derivative one.
    #[inline]
    pub fn variable(val: S) -> Self {
        Dual {
            val,
            der: S::one(),
        }
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.val, -self.der)
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.val + rhs.val, self.der + rhs.der)
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.val - rhs.val, self.der - rhs.der)
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;

    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual::new(
            self.val * rhs.val,
            self.der * rhs.val + self.val * rhs.der,
        )
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;

    #[inline]
    fn div(self, rhs: Self) -> Self {
        let val = self.val / rhs.val;
        Dual::new(val, (self.der - val * rhs.der) / rhs.val)
    }
}

impl<S: Scalar> AddAssign for Dual<S> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<S: Scalar> SubAssign for Dual<S> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<S: Scalar> MulAssign for Dual<S> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<S: Scalar> DivAssign for Dual<S> {
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl<S: Scalar> PartialOrd for Dual<S> {
    /// Ordering by value part; derivatives ride along.
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.val.partial_cmp(&other.val)
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    fn zero() -> Self {
        Dual::constant(S::zero())
    }

    fn one() -> Self {
        Dual::constant(S::one())
    }

    fn from_f64(x: f64) -> Self {
        Dual::constant(S::from_f64(x))
    }

    fn to_f64(self) -> f64 {
        self.val.to_f64()
    }

    fn sqrt(self) -> Self {
        let root = self.val.sqrt();
        let two = S::from_f64(2.0);
        Dual::new(root, self.der / (two * root))
    }

    fn abs(self) -> Self {
        if self.val < S::zero() {
            -self
        } else {
            self
        }
    }

    fn epsilon() -> f64 {
        S::epsilon()
    }
}
