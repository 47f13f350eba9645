//! Wandering-rate numerics: admissible binary words, the vector tree
//! generated by the actions of `M1` and `M10`, the sums `lambda_k`,
//! `tau~_n`, `tau_n`, two-sided wandering bounds, and slow-variation
//! diagnostics.
//!
//! An admissible word is a binary word ending in 1 with no "00" substring;
//! the number of such words of length `k` follows the Fibonacci recurrence.
//! Exact rational sums are capped at moderate depth (denominators blow up);
//! beyond the cap everything is evaluated in `f64`.

use crate::error::{Error, Result};
use crate::projective::ProjMatrix;
use crate::quadrature::adaptive_triangle;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

/// Enumeration cap for exhaustive word lists.
pub const WORD_CAP: usize = 32;
/// Row cap for the vector tree.
pub const VECTOR_CAP: usize = 35;
/// Depth cap for exact rational sums.
pub const EXACT_CAP: usize = 16;

/// Lebesgue area of the induced-map domain `A`, the triangle with vertices
/// `(1/2, 1/2)`, `(2/3, 1/3)`, `(1, 1)`.
pub const M_A: f64 = 1.0 / 12.0;

/// A binary word ending in 1 with no "00" substring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleWord {
    pub symbols: Vec<u8>,
}

/// All admissible words of length `k`, in lexicographic order.
pub fn omega_words(k: usize) -> Result<Vec<AdmissibleWord>> {
    if k == 0 {
        return Err(Error::domain("word length must be at least 1"));
    }
    if k > WORD_CAP {
        return Err(Error::Resource(format!(
            "word length {k} exceeds the enumeration cap {WORD_CAP}"
        )));
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(k);
    fn rec(word: &mut Vec<u8>, k: usize, out: &mut Vec<AdmissibleWord>) {
        if word.len() == k {
            if *word.last().unwrap() == 1 {
                out.push(AdmissibleWord {
                    symbols: word.clone(),
                });
            }
            return;
        }
        for s in [0u8, 1u8] {
            if s == 0 && word.last() == Some(&0) {
                continue;
            }
            word.push(s);
            rec(word, k, out);
            word.pop();
        }
    }
    rec(&mut word, k, &mut out);
    Ok(out)
}

/// Small dense matrix type used during word enumeration; entries stay far
/// below `u64` for all lengths below [`WORD_CAP`].
type SmallMat = [[u64; 3]; 3];

const IDENT: SmallMat = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
const M0: SmallMat = [[1, 0, 1], [1, 0, 0], [0, 1, 0]];
const M1: SmallMat = [[1, 0, 1], [0, 1, 0], [0, 0, 1]];

fn mat_mul(a: &SmallMat, b: &SmallMat) -> SmallMat {
    let mut c = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    c
}

fn row_sums(m: &SmallMat) -> [u64; 3] {
    [
        m[0][0] + m[0][1] + m[0][2],
        m[1][0] + m[1][1] + m[1][2],
        m[2][0] + m[2][1] + m[2][2],
    ]
}

/// Walks every admissible prefix up to length `n`, reporting `(length,
/// row_sums)` for each full admissible word (prefix ending in 1).
fn walk_words<F: FnMut(usize, [u64; 3])>(n: usize, f: &mut F) {
    fn rec<F: FnMut(usize, [u64; 3])>(
        m: &SmallMat,
        last: Option<u8>,
        depth: usize,
        n: usize,
        f: &mut F,
    ) {
        if depth > 0 && last == Some(1) {
            f(depth, row_sums(m));
        }
        if depth == n {
            return;
        }
        for s in [0u8, 1u8] {
            if s == 0 && last == Some(0) {
                continue;
            }
            let next = mat_mul(m, if s == 0 { &M0 } else { &M1 });
            rec(&next, Some(s), depth + 1, n, f);
        }
    }
    rec(&IDENT, None, 0, n, f);
}

fn check_exact_cap(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("need n >= 1"));
    }
    if n > EXACT_CAP {
        return Err(Error::Resource(format!(
            "exact rational sums are capped at depth {EXACT_CAP}, got {n}"
        )));
    }
    Ok(())
}

/// The exact sums `tau_1..tau_n`, where
/// `tau_k = sum over lengths j <= k of sum over admissible words of the term
/// 1/(|v1| |v2| |v|)` built from the row sums of the word's matrix.
pub fn tau_list_exact(n: usize) -> Result<Vec<BigRational>> {
    check_exact_cap(n)?;
    let mut bins = vec![BigRational::zero(); n + 1];
    walk_words(n, &mut |k, rs| {
        let prod = BigInt::from(rs[0]) * BigInt::from(rs[1]) * BigInt::from(rs[2]);
        bins[k] += BigRational::new(BigInt::from(1), prod);
    });
    let mut out = Vec::with_capacity(n);
    let mut acc = BigRational::zero();
    for bin in bins.into_iter().skip(1) {
        acc += bin;
        out.push(acc.clone());
    }
    Ok(out)
}

/// The exact value `tau_n`.
pub fn tau_full(n: usize) -> Result<BigRational> {
    Ok(tau_list_exact(n)?.pop().unwrap())
}

/// `tau_1..tau_n` in floating point (cap [`WORD_CAP`]).
pub fn tau_list_f64(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("need n >= 1"));
    }
    if n > WORD_CAP {
        return Err(Error::Resource(format!(
            "word sums are capped at depth {WORD_CAP}, got {n}"
        )));
    }
    let mut bins = vec![0.0f64; n + 1];
    walk_words(n, &mut |k, rs| {
        let prod = rs[0] as u128 * rs[1] as u128 * rs[2] as u128;
        bins[k] += 1.0 / prod as f64;
    });
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    for bin in bins.into_iter().skip(1) {
        acc += bin;
        out.push(acc);
    }
    Ok(out)
}

/// One row of the vector tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VectorTreeRow {
    pub k: usize,
    /// Kept as a multiset: the sums range over the tree, not over distinct
    /// vectors.
    pub vectors: Vec<[u64; 3]>,
}

/// Depth-first walk of the vector tree: the root `(2, 1, 1)` sits in row 1,
/// the action `(a,b,c) -> (a+c, b, c)` of `M1` descends one row and the
/// action `(a,b,c) -> (a+b+c, a, b)` of `M10` descends two.
fn walk_tree<F: FnMut(usize, [u64; 3])>(n: usize, f: &mut F) {
    fn rec<F: FnMut(usize, [u64; 3])>(k: usize, v: [u64; 3], n: usize, f: &mut F) {
        f(k, v);
        let [a, b, c] = v;
        if k + 1 <= n {
            rec(k + 1, [a + c, b, c], n, f);
        }
        if k + 2 <= n {
            rec(k + 2, [a + b + c, a, b], n, f);
        }
    }
    if n >= 1 {
        rec(1, [2, 1, 1], n, f);
    }
}

fn check_vector_cap(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("need n >= 1"));
    }
    if n > VECTOR_CAP {
        return Err(Error::Resource(format!(
            "vector tree is capped at {VECTOR_CAP} rows, got {n}"
        )));
    }
    Ok(())
}

/// Materializes rows `1..=n` of the vector tree.
pub fn vector_tree(n: usize) -> Result<Vec<VectorTreeRow>> {
    check_vector_cap(n)?;
    let mut rows: Vec<VectorTreeRow> = (1..=n)
        .map(|k| VectorTreeRow {
            k,
            vectors: Vec::new(),
        })
        .collect();
    walk_tree(n, &mut |k, v| rows[k - 1].vectors.push(v));
    for row in &mut rows {
        row.vectors.sort_unstable();
    }
    Ok(rows)
}

/// Row sizes `|L_1|..|L_n|` without materializing the rows.
pub fn row_counts(n: usize) -> Result<Vec<u64>> {
    check_vector_cap(n)?;
    let mut counts = vec![0u64; n];
    walk_tree(n, &mut |k, _| counts[k - 1] += 1);
    Ok(counts)
}

/// Checks that row `k` contains every vector `(k+1, j, 1)` for
/// `j = 1..k-1`, for all `k <= n`.
pub fn row_contents_check(n: usize) -> Result<bool> {
    check_vector_cap(n)?;
    let mut found = vec![0u64; n + 1];
    walk_tree(n, &mut |k, v| {
        let [a, b, c] = v;
        if c == 1 && a == (k as u64) + 1 && b >= 1 && b <= (k as u64).saturating_sub(1) {
            found[k] |= 1u64 << b;
        }
    });
    for k in 2..=n {
        for j in 1..k {
            if found[k] & (1u64 << j) == 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The exact sums `(lambda_1..lambda_n, tau~_1..tau~_n)` over the vector
/// tree, with `lambda_k = sum over row k of 1/(a b c)` and `tau~` its partial
/// sums.
pub fn lambda_tau(n: usize) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    check_exact_cap(n)?;
    let mut bins = vec![BigRational::zero(); n + 1];
    walk_tree(n, &mut |k, [a, b, c]| {
        let prod = BigInt::from(a) * BigInt::from(b) * BigInt::from(c);
        bins[k] += BigRational::new(BigInt::from(1), prod);
    });
    let lambdas: Vec<BigRational> = bins[1..].to_vec();
    let mut taus = Vec::with_capacity(n);
    let mut acc = BigRational::zero();
    for l in &lambdas {
        acc += l;
        taus.push(acc.clone());
    }
    Ok((lambdas, taus))
}

/// Floating-point version of [`lambda_tau`], valid up to [`VECTOR_CAP`] rows.
pub fn lambda_tau_f64(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_vector_cap(n)?;
    let mut bins = vec![0.0f64; n + 1];
    walk_tree(n, &mut |k, [a, b, c]| {
        let prod = a as u128 * b as u128 * c as u128;
        bins[k] += 1.0 / prod as f64;
    });
    let lambdas: Vec<f64> = bins[1..].to_vec();
    let mut taus = Vec::with_capacity(n);
    let mut acc = 0.0;
    for l in &lambdas {
        acc += l;
        taus.push(acc);
    }
    Ok((lambdas, taus))
}

/// One row of a wandering report.
#[derive(Debug, Clone, Serialize)]
pub struct WanderingRow {
    pub n: u64,
    pub row_size: u64,
    /// `lambda_n` as an exact fraction string when within the exact cap.
    pub lambda_exact: Option<String>,
    pub lambda: f64,
    pub tau_tilde: f64,
    pub tau: f64,
    /// `m(A) * tau_n`.
    pub lower: f64,
    /// `27 * m(A) * tau_n`.
    pub upper: f64,
    /// `tau~_n / log^2 n` (NaN at n = 1).
    pub ratio_log2: f64,
}

/// Two-sided wandering-rate bounds up to depth `n`.
#[derive(Debug, Clone, Serialize)]
pub struct WanderingReport {
    pub rows: Vec<WanderingRow>,
}

impl WanderingReport {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("n,row_size,lambda_exact,lambda,tau_tilde,tau,lower,upper,ratio_log2\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.n,
                r.row_size,
                r.lambda_exact.as_deref().unwrap_or(""),
                r.lambda,
                r.tau_tilde,
                r.tau,
                r.lower,
                r.upper,
                r.ratio_log2
            ));
        }
        out
    }
}

/// Builds the wandering report: `lambda`, `tau~`, `tau`, the bounds
/// `m(A) tau_n <= w_n(A) <= 27 m(A) tau_n`, and the ratios `tau~_n/log^2 n`.
///
/// The full `tau` column needs the word enumeration and is therefore capped
/// at [`WORD_CAP`]; rows beyond it carry NaN there.
pub fn wandering_bounds(n: usize) -> Result<WanderingReport> {
    check_vector_cap(n)?;
    let (lambdas, tau_tildes) = lambda_tau_f64(n)?;
    let counts = row_counts(n)?;
    let taus = tau_list_f64(n.min(WORD_CAP))?;
    let exact = lambda_tau(n.min(EXACT_CAP))?.0;
    let mut rows = Vec::with_capacity(n);
    for k in 1..=n {
        let tau = taus.get(k - 1).copied().unwrap_or(f64::NAN);
        let logk = (k as f64).ln();
        rows.push(WanderingRow {
            n: k as u64,
            row_size: counts[k - 1],
            lambda_exact: exact.get(k - 1).map(|r| r.to_string()),
            lambda: lambdas[k - 1],
            tau_tilde: tau_tildes[k - 1],
            tau,
            lower: M_A * tau,
            upper: 27.0 * M_A * tau,
            ratio_log2: if k > 1 {
                tau_tildes[k - 1] / (logk * logk)
            } else {
                f64::NAN
            },
        });
    }
    Ok(WanderingReport { rows })
}

/// One row of the slow-variation diagnostic.
#[derive(Debug, Clone, Serialize)]
pub struct SlowVarRow {
    pub k: u64,
    pub lambda: f64,
    /// `k * lambda_k / log^2 k`; the sufficient criterion wants this to tend
    /// to zero.
    pub criterion: f64,
    /// `tau~_(2k) / tau~_k`; slow variation wants this to tend to one.
    pub doubling_ratio: f64,
}

/// Purely diagnostic tables for the slow-variation question; asserts nothing.
#[derive(Debug, Clone, Serialize)]
pub struct SlowVarReport {
    pub rows: Vec<SlowVarRow>,
}

impl SlowVarReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,lambda,criterion,doubling_ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.k, r.lambda, r.criterion, r.doubling_ratio
            ));
        }
        out
    }
}

/// Tables of `tau~_(2k)/tau~_k` and `k lambda_k/log^2 k` for `k <= n/2`.
pub fn slow_variation_diagnostic(n: usize) -> Result<SlowVarReport> {
    check_vector_cap(n)?;
    if n < 2 {
        return Err(Error::domain("diagnostic needs n >= 2"));
    }
    let (lambdas, tau_tildes) = lambda_tau_f64(n)?;
    let mut rows = Vec::new();
    for k in 1..=(n / 2) {
        let logk = (k as f64).ln();
        rows.push(SlowVarRow {
            k: k as u64,
            lambda: lambdas[k - 1],
            criterion: if k > 1 {
                k as f64 * lambdas[k - 1] / (logk * logk)
            } else {
                f64::NAN
            },
            doubling_ratio: tau_tildes[2 * k - 1] / tau_tildes[k - 1],
        });
    }
    Ok(SlowVarReport { rows })
}

/// The invariant measure of the image of `A` under the linear fractional map
/// of `m`, by adaptive quadrature over `A` of
/// `1/((r1+s1x+t1y)(r2+s2x+t2y)(r+sx+ty))`, to absolute tolerance `1e-8`.
pub fn mu_psi_a(m: &ProjMatrix) -> Result<f64> {
    use num_traits::ToPrimitive;
    let mut rows = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            rows[i][j] = m.rows[i][j]
                .to_f64()
                .ok_or_else(|| Error::domain("matrix entry too large for f64"))?;
        }
    }
    let lin = move |i: usize, x: f64, y: f64| rows[i][0] + rows[i][1] * x + rows[i][2] * y;
    let integrand =
        move |x: f64, y: f64| 1.0 / (lin(1, x, y) * lin(2, x, y) * lin(0, x, y));
    let verts = [[0.5, 0.5], [2.0 / 3.0, 1.0 / 3.0], [1.0, 1.0]];
    Ok(adaptive_triangle(&integrand, verts, 1e-8))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use std::f64::consts::PI;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn word(bits: &[u8]) -> AdmissibleWord {
        AdmissibleWord {
            symbols: bits.to_vec(),
        }
    }

    #[test]
    fn omega_word_lists() {
        assert_eq!(omega_words(1).unwrap(), vec![word(&[1])]);
        assert_eq!(omega_words(2).unwrap(), vec![word(&[0, 1]), word(&[1, 1])]);
        assert_eq!(
            omega_words(3).unwrap(),
            vec![word(&[0, 1, 1]), word(&[1, 0, 1]), word(&[1, 1, 1])]
        );
        assert!(omega_words(0).is_err());
        assert!(omega_words(WORD_CAP + 1).is_err());
    }

    #[test]
    fn omega_counts_fibonacci() {
        let counts: Vec<usize> = (1..=12).map(|k| omega_words(k).unwrap().len()).collect();
        for k in 2..counts.len() {
            assert_eq!(counts[k], counts[k - 1] + counts[k - 2]);
        }
        assert_eq!(&counts[..4], &[1, 2, 3, 5]);
    }

    #[test]
    fn tau_small_values() {
        let taus = tau_list_exact(2).unwrap();
        assert_eq!(taus[0], rat(1, 2));
        // tau_2 = 1/2 + t("01") + t("11") = 1/2 + 1/6 + 1/3 = 1, with
        // t("01") from M0*M1, whose row sums are (3, 2, 1).
        assert_eq!(taus[1], rat(1, 1));
    }

    #[test]
    fn vector_tree_rows() {
        let rows = vector_tree(4).unwrap();
        assert_eq!(rows[0].vectors, vec![[2, 1, 1]]);
        assert_eq!(rows[1].vectors, vec![[3, 1, 1]]);
        assert_eq!(rows[2].vectors, vec![[4, 1, 1], [4, 2, 1]]);
        assert_eq!(rows[3].vectors, vec![[5, 1, 1], [5, 2, 1], [5, 3, 1]]);
    }

    #[test]
    fn row_count_recursion() {
        let counts = row_counts(20).unwrap();
        assert_eq!(&counts[..5], &[1, 1, 2, 3, 5]);
        for k in 2..counts.len() {
            assert_eq!(counts[k], counts[k - 1] + counts[k - 2]);
        }
    }

    #[test]
    fn row_contents() {
        assert!(row_contents_check(20).unwrap());
    }

    #[test]
    fn lambda_values() {
        let (lambdas, taus) = lambda_tau(4).unwrap();
        assert_eq!(lambdas[0], rat(1, 2));
        assert_eq!(lambdas[1], rat(1, 3));
        assert_eq!(lambdas[2], rat(3, 8));
        assert_eq!(lambdas[3], rat(11, 30));
        assert_eq!(taus[1], rat(5, 6));
    }

    #[test]
    fn exact_and_float_lambdas_agree() {
        let (le, _) = lambda_tau(10).unwrap();
        let (lf, _) = lambda_tau_f64(10).unwrap();
        for (e, f) in le.iter().zip(&lf) {
            assert!((e.to_f64().unwrap() - f).abs() < 1e-12);
        }
    }

    #[test]
    fn tree_multiset_matches_words() {
        // Row k of the vector tree is exactly the multiset of row-sum
        // triples of the admissible words of length k starting with 1.
        for k in 1..=12usize {
            let mut from_words: Vec<[u64; 3]> = omega_words(k)
                .unwrap()
                .into_iter()
                .filter(|w| w.symbols[0] == 1)
                .map(|w| {
                    let m = ProjMatrix::of_word(&w.symbols);
                    let rs = m.row_sums();
                    [
                        u64::try_from(&rs[0]).unwrap(),
                        u64::try_from(&rs[1]).unwrap(),
                        u64::try_from(&rs[2]).unwrap(),
                    ]
                })
                .collect();
            from_words.sort_unstable();
            let rows = vector_tree(k).unwrap();
            assert_eq!(rows[k - 1].vectors, from_words, "row {k}");
        }
    }

    #[test]
    fn sandwich_inequality() {
        let n = 20;
        let taus = tau_list_f64(n).unwrap();
        let (_, tau_tildes) = lambda_tau_f64(n).unwrap();
        // At n = 1 no admissible word starts with 0, so the two sums agree.
        assert_eq!(taus[0], tau_tildes[0]);
        for k in 1..n {
            assert!(tau_tildes[k] < taus[k]);
            assert!(taus[k] < tau_tildes[k] + PI * PI);
        }
    }

    #[test]
    fn lower_bound_from_row_contents() {
        // tau~_n dominates sum_{k<=n} 1/(k+1) * sum_{j<k} 1/j because row k
        // contains the vectors (k+1, j, 1).
        let n = 16;
        let (_, tau_tildes) = lambda_tau_f64(n).unwrap();
        let mut bound = 0.0;
        for k in 2..=n {
            let inner: f64 = (1..k).map(|j| 1.0 / j as f64).sum();
            bound += inner / (k as f64 + 1.0);
        }
        assert!(tau_tildes[n - 1] >= bound);
    }

    #[test]
    fn wandering_report_shape() {
        let rep = wandering_bounds(10).unwrap();
        assert_eq!(rep.rows.len(), 10);
        let r3 = &rep.rows[2];
        assert_eq!(r3.lambda_exact.as_deref(), Some("3/8"));
        assert!((r3.lambda - 0.375).abs() < 1e-12);
        assert!(r3.lower < r3.upper);
        let csv = rep.to_csv();
        assert!(csv.starts_with("n,row_size"));
        assert_eq!(csv.lines().count(), 11);
    }

    #[test]
    fn slow_variation_values() {
        let rep = slow_variation_diagnostic(6).unwrap();
        // tau~_2 / tau~_1 = (1/2 + 1/3)/(1/2) = 5/3.
        assert!((rep.rows[0].doubling_ratio - 5.0 / 3.0).abs() < 1e-12);
        // 3 * lambda_3 / log^2 3.
        let k3 = &rep.rows[2];
        let expect = 3.0 * 0.375 / 3f64.ln().powi(2);
        assert!((k3.criterion - expect).abs() < 1e-9);
        assert!((expect - 0.932).abs() < 1e-3);
    }

    #[test]
    fn mu_psi_a_bounds_for_small_words() {
        for symbols in [vec![1], vec![0, 1], vec![1, 1], vec![1, 0, 1]] {
            let m = ProjMatrix::of_word(&symbols);
            let t = m.psi_term().unwrap().to_f64().unwrap();
            let mu = mu_psi_a(&m).unwrap();
            assert!(M_A * t <= mu + 1e-12, "word {symbols:?}");
            assert!(mu <= 27.0 * M_A * t + 1e-12, "word {symbols:?}");
        }
    }
}
