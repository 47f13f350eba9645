//! 3x3 integer matrices acting as linear fractional maps.
//!
//! Compositions of the inverse branches `phi_0` and `phi_1` are linear
//! fractional maps; in projective coordinates composition becomes left
//! multiplication by the generator matrices `M0` and `M1`. The rows of such a
//! matrix are named `v = (r, s, t)`, `v1 = (r1, s1, t1)`, `v2 = (r2, s2, t2)`,
//! and the induced planar map is
//!
//! ```text
//! (x, y) -> ((r1 + s1*x + t1*y)/(r + s*x + t*y),
//!            (r2 + s2*x + t2*y)/(r + s*x + t*y))
//! ```
//!
//! Words over `{0, 1}` are stored most significant first: the word `w1..wn`
//! denotes `phi_w1 . phi_w2 . ... . phi_wn` and its matrix is the product
//! `M_w1 * M_w2 * ... * M_wn`.

use crate::error::{Error, Result};
use crate::scalar::{Point2, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A 3x3 matrix of non-negative big integers in row-major order; row 0 is the
/// denominator row `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjMatrix {
    pub rows: [[BigInt; 3]; 3],
}

fn bigint_rows(m: [[i64; 3]; 3]) -> [[BigInt; 3]; 3] {
    m.map(|row| row.map(BigInt::from))
}

impl ProjMatrix {
    pub fn identity() -> Self {
        ProjMatrix {
            rows: bigint_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        }
    }

    /// The generator of branch 0 or 1:
    /// `M0 = [[1,0,1],[1,0,0],[0,1,0]]`, `M1 = [[1,0,1],[0,1,0],[0,0,1]]`.
    pub fn generator(branch: u8) -> Self {
        match branch {
            0 => ProjMatrix {
                rows: bigint_rows([[1, 0, 1], [1, 0, 0], [0, 1, 0]]),
            },
            1 => ProjMatrix {
                rows: bigint_rows([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
            },
            _ => panic!("generator branch must be 0 or 1"),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut rows: [[BigInt; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = BigInt::zero();
                for (k, item) in other.rows.iter().enumerate() {
                    acc += &self.rows[i][k] * &item[j];
                }
                rows[i][j] = acc;
            }
        }
        ProjMatrix { rows }
    }

    /// The matrix `M_w1 * ... * M_wn` of a word over `{0, 1}`.
    pub fn of_word(word: &[u8]) -> Self {
        let mut m = Self::identity();
        for &w in word {
            m = m.mul(&Self::generator(w));
        }
        m
    }

    pub fn det(&self) -> BigInt {
        let r = &self.rows;
        &r[0][0] * (&r[1][1] * &r[2][2] - &r[1][2] * &r[2][1])
            - &r[0][1] * (&r[1][0] * &r[2][2] - &r[1][2] * &r[2][0])
            + &r[0][2] * (&r[1][0] * &r[2][1] - &r[1][1] * &r[2][0])
    }

    /// The 1-norms of the three rows, `(|v|, |v1|, |v2|)`.
    pub fn row_sums(&self) -> [BigInt; 3] {
        let sum = |i: usize| -> BigInt { self.rows[i].iter().sum() };
        [sum(0), sum(1), sum(2)]
    }

    /// Applies the linear fractional map to a point.
    pub fn apply<S: Scalar>(&self, p: &Point2<S>) -> Result<Point2<S>> {
        let form = |i: usize| -> S {
            S::from_bigint(&self.rows[i][0])
                + S::from_bigint(&self.rows[i][1]) * p.x.clone()
                + S::from_bigint(&self.rows[i][2]) * p.y.clone()
        };
        let den = form(0);
        if den.is_zero() {
            return Err(Error::domain("vanishing projective denominator"));
        }
        Ok(Point2::new(form(1) / den.clone(), form(2) / den))
    }

    /// The Jacobian determinant of the induced map, `1/(r + s*x + t*y)^3`.
    pub fn jacobian_det<S: Scalar>(&self, p: &Point2<S>) -> Result<S> {
        let den = S::from_bigint(&self.rows[0][0])
            + S::from_bigint(&self.rows[0][1]) * p.x.clone()
            + S::from_bigint(&self.rows[0][2]) * p.y.clone();
        if den.is_zero() {
            return Err(Error::domain("vanishing projective denominator"));
        }
        Ok(S::one() / (den.clone() * den.clone() * den))
    }

    /// The term `1/(|v1| * |v2| * |v|)` built from the three row sums.
    pub fn psi_term(&self) -> Result<BigRational> {
        let [a, b, c] = self.row_sums();
        let prod = &a * &b * &c;
        if prod.is_zero() || prod.is_negative() {
            return Err(Error::domain("psi term needs positive row sums"));
        }
        Ok(BigRational::new(BigInt::one(), prod))
    }
}

/// Normalizes a non-negative integer triple to the probability simplex.
pub fn normalized(v: &[BigInt; 3]) -> Result<[BigRational; 3]> {
    let sum: BigInt = v.iter().sum();
    if sum.is_zero() {
        return Err(Error::domain("cannot normalize the zero vector"));
    }
    Ok([
        BigRational::new(v[0].clone(), sum.clone()),
        BigRational::new(v[1].clone(), sum.clone()),
        BigRational::new(v[2].clone(), sum),
    ])
}

/// The first `n + 1` values `f_0..f_n` of Narayana's cows sequence:
/// `f_0 = 0, f_1 = 1, f_2 = 0, f_3 = 0`, then `f_(n+3) = f_(n+2) + f_n`.
pub fn narayana_seq(n: usize) -> Vec<BigInt> {
    let mut f = vec![
        BigInt::zero(),
        BigInt::one(),
        BigInt::zero(),
        BigInt::zero(),
    ];
    while f.len() <= n {
        let next = &f[f.len() - 1] + &f[f.len() - 3];
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

pub fn narayana(n: usize) -> BigInt {
    narayana_seq(n).pop().expect("sequence is non-empty")
}

/// The closed form of `M0^n` in terms of Narayana's cows sequence.
pub fn narayana_matrix(n: usize) -> ProjMatrix {
    let f = narayana_seq(n + 4);
    ProjMatrix {
        rows: [
            [f[n + 4].clone(), f[n + 2].clone(), f[n + 3].clone()],
            [f[n + 3].clone(), f[n + 1].clone(), f[n + 2].clone()],
            [f[n + 2].clone(), f[n].clone(), f[n + 1].clone()],
        ],
    }
}

fn euclid_dist(a: &[BigRational; 3], b: &[BigRational; 3]) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        let d = Scalar::to_f64(&(&a[i] - &b[i]));
        acc += d * d;
    }
    acc.sqrt()
}

/// The decay estimate `(d~(n), d(n))` with
/// `d~(n) = |P_v - P_v1| + |P_v - P_v2|` for the rows of `M0^n` and
/// `d(n) = 27 * sqrt(3) * d~(n)`.
pub fn decay_estimate(n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::domain("decay estimate needs n >= 1"));
    }
    let m = narayana_matrix(n);
    let pv = normalized(&m.rows[0])?;
    let pv1 = normalized(&m.rows[1])?;
    let pv2 = normalized(&m.rows[2])?;
    let d_tilde = euclid_dist(&pv, &pv1) + euclid_dist(&pv, &pv2);
    Ok((d_tilde, 27.0 * 3.0_f64.sqrt() * d_tilde))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn m(rows: [[i64; 3]; 3]) -> ProjMatrix {
        ProjMatrix {
            rows: bigint_rows(rows),
        }
    }

    fn half() -> Point2<BigRational> {
        Point2::new(
            BigRational::new(1.into(), 2.into()),
            BigRational::new(1.into(), 2.into()),
        )
    }

    #[test]
    fn generators() {
        assert_eq!(
            ProjMatrix::generator(0),
            m([[1, 0, 1], [1, 0, 0], [0, 1, 0]])
        );
        assert_eq!(
            ProjMatrix::generator(1),
            m([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
        );
        assert_eq!(ProjMatrix::generator(0).det(), BigInt::one());
        assert_eq!(ProjMatrix::generator(1).det(), BigInt::one());
    }

    #[test]
    fn words() {
        assert_eq!(ProjMatrix::of_word(&[]), ProjMatrix::identity());
        assert_eq!(
            ProjMatrix::of_word(&[0, 0]),
            m([[1, 1, 1], [1, 0, 1], [1, 0, 0]])
        );
        assert_eq!(
            ProjMatrix::of_word(&[1, 0]),
            m([[1, 1, 1], [1, 0, 0], [0, 1, 0]])
        );
    }

    #[test]
    fn word_concatenation_is_multiplication() {
        let a = ProjMatrix::of_word(&[0, 1, 1]);
        let b = ProjMatrix::of_word(&[1, 0]);
        assert_eq!(ProjMatrix::of_word(&[0, 1, 1, 1, 0]), a.mul(&b));
    }

    #[test]
    fn apply_matches_branches() {
        use crate::dynamics::local_inverse;
        let p = half();
        assert_eq!(
            ProjMatrix::generator(0).apply(&p).unwrap(),
            local_inverse(0, &p).unwrap()
        );
        let two_step = ProjMatrix::of_word(&[1, 0]).apply(&p).unwrap();
        let by_hand = local_inverse(1, &local_inverse(0, &p).unwrap()).unwrap();
        assert_eq!(two_step, by_hand);
        assert_eq!(
            two_step,
            Point2::new(
                BigRational::new(1.into(), 2.into()),
                BigRational::new(1.into(), 4.into())
            )
        );
        assert_eq!(ProjMatrix::identity().apply(&p).unwrap(), p);
    }

    #[test]
    fn jacobians() {
        let zero = Point2::new(BigRational::from_integer(0.into()), BigRational::from_integer(0.into()));
        let one = Point2::new(
            BigRational::from_integer(1.into()),
            BigRational::from_integer(1.into()),
        );
        assert_eq!(
            ProjMatrix::generator(1).jacobian_det(&zero).unwrap(),
            BigRational::from_integer(1.into())
        );
        assert_eq!(
            ProjMatrix::generator(0).jacobian_det(&one).unwrap(),
            BigRational::new(1.into(), 8.into())
        );
        assert_eq!(
            ProjMatrix::of_word(&[1, 0]).jacobian_det(&half()).unwrap(),
            BigRational::new(1.into(), 8.into())
        );
    }

    #[test]
    fn psi_terms() {
        let m1 = ProjMatrix::generator(1);
        assert_eq!(m1.psi_term().unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(
            m1.mul(&m1).psi_term().unwrap(),
            BigRational::new(1.into(), 3.into())
        );
        // The word "01" has matrix M0*M1 with row sums (3, 2, 1), while the
        // word "101" has row sums (4, 2, 1).
        let m01 = ProjMatrix::of_word(&[0, 1]);
        assert_eq!(m01.row_sums(), [3.into(), 2.into(), 1.into()]);
        assert_eq!(
            m01.psi_term().unwrap(),
            BigRational::new(1.into(), 6.into())
        );
        let m101 = ProjMatrix::of_word(&[1, 0, 1]);
        assert_eq!(m101.row_sums(), [4.into(), 2.into(), 1.into()]);
        assert_eq!(
            m101.psi_term().unwrap(),
            BigRational::new(1.into(), 8.into())
        );
    }

    #[test]
    fn normalization() {
        let v = [BigInt::from(2), BigInt::from(1), BigInt::from(1)];
        assert_eq!(
            normalized(&v).unwrap(),
            [
                BigRational::new(1.into(), 2.into()),
                BigRational::new(1.into(), 4.into()),
                BigRational::new(1.into(), 4.into()),
            ]
        );
        let e = [BigInt::one(), BigInt::zero(), BigInt::zero()];
        assert_eq!(
            normalized(&e).unwrap(),
            [BigRational::from_integer(1.into()), BigRational::from_integer(0.into()), BigRational::from_integer(0.into())]
        );
    }

    #[test]
    fn narayana_values() {
        let f = narayana_seq(10);
        let expect: Vec<BigInt> = [0i64, 1, 0, 0, 1, 1, 1, 2, 3, 4, 6]
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        assert_eq!(f, expect);
    }

    #[test]
    fn narayana_matrix_matches_powers() {
        assert_eq!(narayana_matrix(0), ProjMatrix::identity());
        assert_eq!(narayana_matrix(1), ProjMatrix::generator(0));
        for n in 2..12 {
            assert_eq!(narayana_matrix(n), ProjMatrix::of_word(&vec![0u8; n]));
        }
    }

    #[test]
    fn decay_shrinks() {
        let (d10, _) = decay_estimate(10).unwrap();
        let (d60, scaled) = decay_estimate(60).unwrap();
        assert!(d60 < d10);
        assert!((scaled - 27.0 * 3.0_f64.sqrt() * d60).abs() < 1e-15);
    }
}
