//! The triangle map `T`, the slow map `S` and its modified version, the strip
//! map `F`, region classification, digit extraction, and inverse branches.
//!
//! All maps are generic over [`Scalar`], so the same code runs exactly on
//! rationals and fast on `f64`. Boundary conventions are strict and
//! tolerance-free:
//!
//! - `Gamma0 = {1 >= x >= y > 1 - x}`; the line `y = 1 - x` belongs to
//!   `Gamma1`;
//! - the diagonal `x = y` with `x > 1/2` belongs to `Gamma0`;
//! - the segment `Lambda = {y = 0}` belongs to `Gamma1`.

use crate::error::{Error, Result};
use crate::projective::ProjMatrix;
use crate::scalar::{Point2, Scalar, StripPoint};
use serde::Serialize;

/// A classification tag; a single query may return several compatible tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionTag {
    Gamma0,
    Gamma1,
    Lambda,
    Diagonal,
    VerticalSide,
    TriangleCell(u64),
    /// The induced-map domain `A = {p in Gamma0 : S(p) in Gamma0}`.
    SetA,
    Outside,
}

/// The full set of tags applying to a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub tags: Vec<RegionTag>,
}

impl Region {
    pub fn contains(&self, tag: RegionTag) -> bool {
        self.tags.contains(&tag)
    }
    pub fn is_outside(&self) -> bool {
        self.contains(RegionTag::Outside)
    }
    pub fn in_gamma0(&self) -> bool {
        self.contains(RegionTag::Gamma0)
    }
    pub fn on_lambda(&self) -> bool {
        self.contains(RegionTag::Lambda)
    }
    /// The index `k` with `1 - x - ky >= 0 > 1 - x - (k+1)y`, defined for
    /// `y > 0`.
    pub fn cell(&self) -> Option<u64> {
        self.tags.iter().find_map(|t| match t {
            RegionTag::TriangleCell(k) => Some(*k),
            _ => None,
        })
    }
}

/// A finite (or truncated) triangle-sequence digit string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitSequence {
    pub digits: Vec<u64>,
    /// True when the orbit reached `Lambda`, freezing the expansion.
    pub terminated: bool,
}

/// Classifies a point of the closed triangle.
///
/// Returns the `Gamma0`/`Gamma1` tag, side tags (`Lambda`, `Diagonal`,
/// `VerticalSide`), the cell index `TriangleCell(k)` when `y > 0`, and `SetA`
/// membership. Points outside the closed triangle get the single tag
/// `Outside`.
pub fn classify<S: Scalar>(p: &Point2<S>) -> Region {
    if !p.in_triangle() {
        return Region {
            tags: vec![RegionTag::Outside],
        };
    }
    let one = S::one();
    let mut tags = Vec::with_capacity(4);
    // Gamma0 iff y > 1 - x, i.e. x + y > 1.
    let gamma0 = p.x.clone() + p.y.clone() > one.clone();
    tags.push(if gamma0 {
        RegionTag::Gamma0
    } else {
        RegionTag::Gamma1
    });
    if p.y.is_zero() {
        tags.push(RegionTag::Lambda);
    }
    if p.x == p.y {
        tags.push(RegionTag::Diagonal);
    }
    if p.x == one {
        tags.push(RegionTag::VerticalSide);
    }
    if !p.y.is_zero() {
        let k = ((one.clone() - p.x.clone()) / p.y.clone()).floor_u64();
        tags.push(RegionTag::TriangleCell(k));
    }
    // S maps Gamma0 to ((y/x, (1-x)/x)); the image is again in Gamma0 iff
    // y > 2x - 1.
    if gamma0 && p.y.clone() + one.clone() > p.x.clone() + p.x.clone() {
        tags.push(RegionTag::SetA);
    }
    Region { tags }
}

/// The triangle map `T(x, y) = (y/x, (1 - x - ky)/x)` with `k` the cell index.
///
/// Undefined on `Lambda` (`y = 0`).
pub fn triangle_map<S: Scalar>(p: &Point2<S>) -> Result<Point2<S>> {
    let region = classify(p);
    if region.is_outside() {
        return Err(Error::domain("point outside the closed triangle"));
    }
    let k = region
        .cell()
        .ok_or_else(|| Error::domain("triangle map undefined on Lambda"))?;
    let ky = S::from_u64(k) * p.y.clone();
    Ok(Point2::new(
        p.y.clone() / p.x.clone(),
        (S::one() - p.x.clone() - ky) / p.x.clone(),
    ))
}

/// The slow map `S`, or its modified version `S~` when `modified` is set.
///
/// On `Gamma0`: `(y/x, (1-x)/x)`; on `Gamma1`: `(x/(1-y), y/(1-y))`. The
/// segment `Lambda` consists of fixed points of `S`; the modified map sends
/// `(x, 0)` to `(x, x)` instead.
pub fn slow_map<S: Scalar>(p: &Point2<S>, modified: bool) -> Result<Point2<S>> {
    let region = classify(p);
    if region.is_outside() {
        return Err(Error::domain("point outside the closed triangle"));
    }
    if region.on_lambda() {
        return Ok(if modified {
            Point2::new(p.x.clone(), p.x.clone())
        } else {
            p.clone()
        });
    }
    let one = S::one();
    if region.in_gamma0() {
        Ok(Point2::new(
            p.y.clone() / p.x.clone(),
            (one - p.x.clone()) / p.x.clone(),
        ))
    } else {
        let d = one - p.y.clone();
        Ok(Point2::new(p.x.clone() / d.clone(), p.y.clone() / d))
    }
}

/// The determinant of the Jacobian of `S`: `1/x^3` on `Gamma0` and
/// `1/(1-y)^3` on `Gamma1` (hence `1` at every point of `Lambda`).
pub fn slow_jacobian<S: Scalar>(p: &Point2<S>) -> Result<S> {
    let region = classify(p);
    if region.is_outside() {
        return Err(Error::domain("point outside the closed triangle"));
    }
    let one = S::one();
    let d = if region.in_gamma0() {
        p.x.clone()
    } else {
        one.clone() - p.y.clone()
    };
    Ok(one / (d.clone() * d.clone() * d))
}

/// The local inverse branches of `S` (extended to the closed triangle):
///
/// - branch 0: `phi_0(x, y) = (1/(1+y), x/(1+y))`;
/// - branch 1: `phi_1(x, y) = (x/(1+y), y/(1+y))`;
/// - branch 2: `phi_2(x, x) = (x, 0)`, diagonal points only.
pub fn local_inverse<S: Scalar>(branch: u8, p: &Point2<S>) -> Result<Point2<S>> {
    let one = S::one();
    match branch {
        0 => {
            let d = one.clone() + p.y.clone();
            Ok(Point2::new(one / d.clone(), p.x.clone() / d))
        }
        1 => {
            let d = one + p.y.clone();
            Ok(Point2::new(p.x.clone() / d.clone(), p.y.clone() / d))
        }
        2 => {
            if p.x != p.y {
                return Err(Error::domain("branch 2 applies to diagonal points only"));
            }
            Ok(Point2::new(p.x.clone(), S::zero()))
        }
        _ => Err(Error::domain("branch must be 0, 1 or 2")),
    }
}

/// The first passage time `tau(x, y) = 1 + min{k >= 0 : S^k(x, y) in Gamma0}`.
///
/// Equals `1 + alpha_1(x, y)`, one more than the cell index, which is how it
/// is computed; undefined on `Lambda`.
pub fn first_passage<S: Scalar>(p: &Point2<S>) -> Result<u64> {
    let region = classify(p);
    if region.is_outside() {
        return Err(Error::domain("point outside the closed triangle"));
    }
    let k = region
        .cell()
        .ok_or_else(|| Error::domain("first passage undefined on Lambda"))?;
    Ok(1 + k)
}

/// Verifies the jump identity `T = S^tau` at `p`: exact equality for exact
/// scalars, absolute tolerance `1e-12` per coordinate for floats.
pub fn jump_check<S: Scalar>(p: &Point2<S>) -> Result<bool> {
    let tau = first_passage(p)?;
    let fast = triangle_map(p)?;
    let mut slow = p.clone();
    for _ in 0..tau {
        slow = slow_map(&slow, false)?;
    }
    if S::is_exact() {
        Ok(fast == slow)
    } else {
        let dx = (fast.x.to_f64() - slow.x.to_f64()).abs();
        let dy = (fast.y.to_f64() - slow.y.to_f64()).abs();
        Ok(dx < 1e-12 && dy < 1e-12)
    }
}

/// The triangle sequence of `p`: `alpha_k = m` iff `T^(k-1)(p)` lies in the
/// cell with index `m`. Stops when the orbit hits `Lambda` (`terminated`) or
/// after `max_digits` digits.
pub fn triangle_sequence<S: Scalar>(p: &Point2<S>, max_digits: usize) -> Result<DigitSequence> {
    let mut q = p.clone();
    let mut digits = Vec::new();
    let mut terminated = false;
    for _ in 0..max_digits {
        let region = classify(&q);
        if region.is_outside() {
            return Err(Error::domain("orbit left the closed triangle"));
        }
        match region.cell() {
            None => {
                terminated = true;
                break;
            }
            Some(k) => {
                digits.push(k);
                q = triangle_map(&q)?;
            }
        }
    }
    if !terminated && classify(&q).on_lambda() {
        terminated = true;
    }
    Ok(DigitSequence { digits, terminated })
}

/// The strip map `F(u, v)`: `(v, (1/u - 1)/v)` when `v < 1`, `(u, v - 1)`
/// when `v >= 1`.
pub fn strip_map<S: Scalar>(s: &StripPoint<S>) -> Result<StripPoint<S>> {
    if s.u.is_zero() || s.u < S::zero() {
        return Err(Error::domain("strip map needs u > 0"));
    }
    let one = S::one();
    if s.v >= one {
        Ok(StripPoint::new(s.u.clone(), s.v.clone() - one))
    } else {
        if s.v.is_zero() {
            return Err(Error::domain("strip map singular on v = 0"));
        }
        let w = (one / s.u.clone() - S::one()) / s.v.clone();
        Ok(StripPoint::new(s.v.clone(), w))
    }
}

/// The change of coordinates `u = y/x`, `v = (1 - x)/y` onto the strip.
pub fn to_strip<S: Scalar>(p: &Point2<S>) -> Result<StripPoint<S>> {
    if p.y.is_zero() || p.x.is_zero() {
        return Err(Error::domain("strip coordinates need x, y > 0"));
    }
    Ok(StripPoint::new(
        p.y.clone() / p.x.clone(),
        (S::one() - p.x.clone()) / p.y.clone(),
    ))
}

/// Inverse of [`to_strip`]: `x = 1/(1 + uv)`, `y = u/(1 + uv)`.
pub fn from_strip<S: Scalar>(s: &StripPoint<S>) -> Result<Point2<S>> {
    if s.u.is_zero() {
        return Err(Error::domain("strip point needs u > 0"));
    }
    let d = S::one() + s.u.clone() * s.v.clone();
    Ok(Point2::new(S::one() / d.clone(), s.u.clone() / d))
}

/// The projective matrix of the digit cylinder `(alpha_1, ..., alpha_n)`:
/// the composition `phi_1^alpha_1 . phi_0 . phi_1^alpha_2 . phi_0 ...`
/// mapping the closed triangle onto the cylinder.
pub fn cylinder(digits: &[u64]) -> ProjMatrix {
    let mut word = Vec::new();
    for &alpha in digits {
        for _ in 0..alpha {
            word.push(1u8);
        }
        word.push(0u8);
    }
    ProjMatrix::of_word(&word)
}
