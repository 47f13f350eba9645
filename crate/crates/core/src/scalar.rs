//! Numeric scalar abstraction shared by the exact and floating code paths.
//!
//! The maps in [`crate::dynamics`] are generic over [`Scalar`], which is
//! implemented for `f64` (simulation) and [`BigRational`] (exactness-critical
//! work: the tree, transfer fixed points, jump identity audits).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

/// A field scalar the dynamics can be evaluated in.
///
/// Implementors must be totally ordered on the values actually reached by the
/// maps (non-negative reals), and division must be exact for the rational
/// instantiation.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(n: u64) -> Self;
    fn from_bigint(n: &BigInt) -> Self;

    /// Floor of a non-negative scalar, as an integer digit.
    fn floor_u64(&self) -> u64;

    /// Lossy conversion for reporting and diagnostics.
    fn to_f64(&self) -> f64;

    /// True when arithmetic is exact (no rounding), as for rationals.
    fn is_exact() -> bool;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::INFINITY)
    }
    fn floor_u64(&self) -> u64 {
        self.floor() as u64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_u64(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn floor_u64(&self) -> u64 {
        debug_assert!(!self.is_negative());
        self.floor().to_integer().to_u64().expect("floor fits u64")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_exact() -> bool {
        true
    }
}

/// A point of the closed triangle `{1 >= x >= y >= 0}` (or a general planar
/// point when used as an intermediate value).
#[derive(Debug, Clone, PartialEq)]
pub struct Point2<S: Scalar> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point2<S> {
    pub fn new(x: S, y: S) -> Self {
        Point2 { x, y }
    }

    /// Membership in the closed triangle.
    pub fn in_triangle(&self) -> bool {
        S::zero() <= self.y && self.y <= self.x && self.x <= S::one()
    }
}

/// A point of the strip `(0, 1] x [0, +inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StripPoint<S: Scalar> {
    pub u: S,
    pub v: S,
}

impl<S: Scalar> StripPoint<S> {
    pub fn new(u: S, v: S) -> Self {
        StripPoint { u, v }
    }

    pub fn in_strip(&self) -> bool {
        S::zero() < self.u && self.u <= S::one() && self.v >= S::zero()
    }
}
