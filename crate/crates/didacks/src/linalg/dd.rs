//! Compensated double-double arithmetic: an unevaluated sum of two `f64`
//! words giving roughly 31 significant decimal digits.
//!
//! All operations use the accurate (non-sloppy) error-free transforms, so
//! additive cancellation keeps full precision. Products rely on
//! `f64::mul_add`, which is correctly rounded on every supported target.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use super::scalar::Scalar;

/// Double-double number. Invariant: `hi` carries the leading bits and
/// `|lo| <= ulp(hi)/2`, with `hi + lo` the represented value.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

/// Sum and exact rounding error of `a + b`, assuming `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Sum and exact rounding error of `a + b` for arbitrary magnitudes.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Product and exact rounding error of `a * b`.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    /// Unit roundoff, 2^-104.
    pub const EPSILON: f64 = 4.930380657631324e-32;

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        assert!(self.hi > 0.0, "Dd::sqrt of negative value {self:?}");
        // One Newton step on the f64 estimate doubles its accurate digits.
        let x = self.hi.sqrt();
        let est = Dd::from_f64(x);
        (est + self / est) * Dd::from_f64(0.5)
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }
}

impl Neg for Dd {
    type Output = Dd;

    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;

    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s0, e0) = two_sum(self.hi, rhs.hi);
        let (s1, e1) = two_sum(self.lo, rhs.lo);
        let (s0, e0) = quick_two_sum(s0, e0 + s1);
        let (hi, lo) = quick_two_sum(s0, e0 + e1);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;

    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;

    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;

    fn div(self, rhs: Dd) -> Dd {
        // Long division: three f64 quotient corrections, then renormalize.
        let q1 = self.hi / rhs.hi;
        let mut r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, rhs: Dd) {
        *self = *self + rhs;
    }
}

impl SubAssign for Dd {
    #[inline]
    fn sub_assign(&mut self, rhs: Dd) {
        *self = *self - rhs;
    }
}

impl MulAssign for Dd {
    #[inline]
    fn mul_assign(&mut self, rhs: Dd) {
        *self = *self * rhs;
    }
}

impl DivAssign for Dd {
    #[inline]
    fn div_assign(&mut self, rhs: Dd) {
        *self = *self / rhs;
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl Scalar for Dd {
    fn zero() -> Self {
        Dd::ZERO
    }

    fn one() -> Self {
        Dd::ONE
    }

    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }

    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }

    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }

    fn abs(self) -> Self {
        Dd::abs(self)
    }

    fn epsilon() -> f64 {
        Dd::EPSILON
    }
}
