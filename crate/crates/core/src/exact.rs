//! Exact arbitrary-precision rational pairs on a common denominator.
//!
//! A [`RationalPair`] stores `(x, y) = (num_x/den, num_y/den)` with
//! `gcd(num_x, num_y, den) = 1`. Keeping a single shared denominator is what
//! makes the mediant of two pairs a one-line formula, so every tree
//! construction goes through this type.

use crate::error::{Error, Result};
use crate::scalar::Point2;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A pair of non-negative rationals with a shared positive denominator, in
/// canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPair {
    num_x: BigInt,
    num_y: BigInt,
    den: BigInt,
}

impl RationalPair {
    /// Canonical constructor: reduces by `gcd(px, py, q)`.
    ///
    /// Fails if `q <= 0` or a numerator is negative. Points outside the
    /// triangle are representable; see [`RationalPair::in_triangle`].
    pub fn new(px: BigInt, py: BigInt, q: BigInt) -> Result<Self> {
        if q.is_zero() || q.is_negative() {
            return Err(Error::domain("denominator must be positive"));
        }
        if px.is_negative() || py.is_negative() {
            return Err(Error::domain("numerators must be non-negative"));
        }
        let g = px.gcd(&py).gcd(&q);
        Ok(RationalPair {
            num_x: &px / &g,
            num_y: &py / &g,
            den: &q / &g,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(px: u64, py: u64, q: u64) -> Result<Self> {
        Self::new(BigInt::from(px), BigInt::from(py), BigInt::from(q))
    }

    /// Builds the pair with `x = a/b` and `y = c/d`, putting both fractions
    /// over the least common denominator first.
    pub fn from_fractions(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if b.is_zero() || b.is_negative() || d.is_zero() || d.is_negative() {
            return Err(Error::domain("denominator must be positive"));
        }
        let l = b.lcm(&d);
        let px = &a * (&l / &b);
        let py = &c * (&l / &d);
        Self::new(px, py, l)
    }

    pub fn num_x(&self) -> &BigInt {
        &self.num_x
    }
    pub fn num_y(&self) -> &BigInt {
        &self.num_y
    }
    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn x(&self) -> BigRational {
        BigRational::new(self.num_x.clone(), self.den.clone())
    }
    pub fn y(&self) -> BigRational {
        BigRational::new(self.num_y.clone(), self.den.clone())
    }

    pub fn to_point(&self) -> Point2<BigRational> {
        Point2::new(self.x(), self.y())
    }

    /// Exact conversion from a rational point; the shared denominator is the
    /// lcm of the two coordinate denominators.
    pub fn from_point(p: &Point2<BigRational>) -> Result<Self> {
        Self::from_fractions(
            p.x.numer().clone(),
            p.x.denom().clone(),
            p.y.numer().clone(),
            p.y.denom().clone(),
        )
    }

    /// Membership in the closed triangle `0 <= y <= x <= 1`.
    pub fn in_triangle(&self) -> bool {
        self.num_y <= self.num_x && self.num_x <= self.den
    }

    /// The mediant `((p + p')/(q + q'), (r + r')/(q + q'))` of two canonical
    /// pairs, re-canonicalized.
    pub fn mediant(&self, other: &Self) -> Self {
        RationalPair::new(
            &self.num_x + &other.num_x,
            &self.num_y + &other.num_y,
            &self.den + &other.den,
        )
        .expect("mediant of canonical pairs is well formed")
    }

    /// Lexicographic comparison (first coordinate, then second) by exact
    /// cross-multiplication.
    pub fn lex_compare(&self, other: &Self) -> Ordering {
        let lhs = &self.num_x * &other.den;
        let rhs = &other.num_x * &self.den;
        lhs.cmp(&rhs).then_with(|| {
            let lhs = &self.num_y * &other.den;
            let rhs = &other.num_y * &self.den;
            lhs.cmp(&rhs)
        })
    }
}

impl Ord for RationalPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_compare(other)
    }
}

impl PartialOrd for RationalPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RationalPair {
    /// Canonical textual form `px/q,py/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{},{}/{}",
            self.num_x, self.den, self.num_y, self.den
        )
    }
}

impl FromStr for RationalPair {
    type Err = Error;

    /// Parses `a/b,c/d` or `a,c`; unreduced input is accepted and
    /// canonicalized.
    fn from_str(s: &str) -> Result<Self> {
        let (xs, ys) = s
            .split_once(',')
            .ok_or_else(|| Error::parse(format!("expected 'x,y' in {s:?}")))?;
        let parse_frac = |t: &str| -> Result<(BigInt, BigInt)> {
            let t = t.trim();
            match t.split_once('/') {
                Some((n, d)) => {
                    let n = BigInt::from_str(n.trim())
                        .map_err(|e| Error::parse(format!("bad numerator {n:?}: {e}")))?;
                    let d = BigInt::from_str(d.trim())
                        .map_err(|e| Error::parse(format!("bad denominator {d:?}: {e}")))?;
                    Ok((n, d))
                }
                None => {
                    let n = BigInt::from_str(t)
                        .map_err(|e| Error::parse(format!("bad integer {t:?}: {e}")))?;
                    Ok((n, BigInt::one()))
                }
            }
        };
        let (a, b) = parse_frac(xs)?;
        let (c, d) = parse_frac(ys)?;
        Self::from_fractions(a, b, c, d)
    }
}
