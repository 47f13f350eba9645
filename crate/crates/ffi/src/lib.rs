//! C ABI for the tridyn library.
//!
//! Rational pairs are exposed as opaque handles created by `td_pair_parse`
//! or `td_pair_make` and released with `td_pair_free`. Every fallible
//! function returns a `TdStatus`; outputs are written through pointers.
//! Strings returned by the library must be released with `td_string_free`.

use std::ffi::{c_char, CStr, CString};

use tridyn::dynamics;
use tridyn::exact::RationalPair;
use tridyn::tree;
use tridyn::wandering;
use tridyn::Scalar;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdStatus {
    /// Success.
    TdOk = 0,
    /// A pointer argument was null.
    TdNullPointer = 1,
    /// Text input could not be parsed.
    TdParseError = 2,
    /// The input lies outside the domain of the operation.
    TdDomainError = 3,
    /// An output buffer was too small; nothing was written.
    TdBufferTooSmall = 4,
    /// An internal resource limit was hit.
    TdResourceError = 5,
}

/// Opaque handle to an exact rational pair in the closed triangle.
pub struct TdPair {
    inner: RationalPair,
}

fn status_of(e: &tridyn::Error) -> TdStatus {
    match e {
        tridyn::Error::Parse(_) => TdStatus::TdParseError,
        tridyn::Error::Resource(_) => TdStatus::TdResourceError,
        _ => TdStatus::TdDomainError,
    }
}

/// Parses "a/b,c/d" (or "a,c") into a new pair handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_pair_parse(
    text: *const c_char,
    out: *mut *mut TdPair,
) -> TdStatus {
    if text.is_null() || out.is_null() {
        return TdStatus::TdNullPointer;
    }
    let text = match CStr::from_ptr(text).to_str() {
        Ok(t) => t,
        Err(_) => return TdStatus::TdParseError,
    };
    match text.parse::<RationalPair>() {
        Ok(pair) => {
            *out = Box::into_raw(Box::new(TdPair { inner: pair }));
            TdStatus::TdOk
        }
        Err(e) => status_of(&e),
    }
}

/// Builds the pair (px/q, py/q) from unsigned 64-bit integers.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_pair_make(
    num_x: u64,
    num_y: u64,
    den: u64,
    out: *mut *mut TdPair,
) -> TdStatus {
    if out.is_null() {
        return TdStatus::TdNullPointer;
    }
    match RationalPair::from_ints(num_x, num_y, den) {
        Ok(pair) => {
            *out = Box::into_raw(Box::new(TdPair { inner: pair }));
            TdStatus::TdOk
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a pair handle. Null is ignored.
///
/// # Safety
/// `pair` must be null or a handle produced by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn td_pair_free(pair: *mut TdPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Formats a pair as "px/q,py/q" into a newly allocated string.
///
/// # Safety
/// `pair` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_pair_format(
    pair: *const TdPair,
    out: *mut *mut c_char,
) -> TdStatus {
    if pair.is_null() || out.is_null() {
        return TdStatus::TdNullPointer;
    }
    let text = (*pair).inner.to_string();
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            TdStatus::TdOk
        }
        Err(_) => TdStatus::TdDomainError,
    }
}

/// Releases a string produced by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn td_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes the mediant of `a` and `b` into a new handle.
///
/// # Safety
/// `a` and `b` must be valid handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_pair_mediant(
    a: *const TdPair,
    b: *const TdPair,
    out: *mut *mut TdPair,
) -> TdStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return TdStatus::TdNullPointer;
    }
    let m = (*a).inner.mediant(&(*b).inner);
    *out = Box::into_raw(Box::new(TdPair { inner: m }));
    TdStatus::TdOk
}

/// Compares two pairs lexicographically; writes -1, 0, or 1.
///
/// # Safety
/// `a` and `b` must be valid handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_pair_lex_cmp(
    a: *const TdPair,
    b: *const TdPair,
    out: *mut i32,
) -> TdStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return TdStatus::TdNullPointer;
    }
    *out = match (*a).inner.cmp(&(*b).inner) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    };
    TdStatus::TdOk
}

/// Triangle-sequence digits of a pair. Writes at most `cap` digits and the
/// actual count; `terminated` is 1 when the expansion ended at the bottom
/// side within `cap` digits.
///
/// # Safety
/// `pair` must be a valid handle; `digits` must point to `cap` writable
/// elements; `len` and `terminated` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn td_triangle_digits(
    pair: *const TdPair,
    digits: *mut u64,
    cap: usize,
    len: *mut usize,
    terminated: *mut i32,
) -> TdStatus {
    if pair.is_null() || digits.is_null() || len.is_null() || terminated.is_null() {
        return TdStatus::TdNullPointer;
    }
    let point = (*pair).inner.to_point();
    match dynamics::triangle_sequence(&point, cap) {
        Ok(seq) => {
            for (i, d) in seq.digits.iter().enumerate() {
                *digits.add(i) = *d;
            }
            *len = seq.digits.len();
            *terminated = i32::from(seq.terminated);
            TdStatus::TdOk
        }
        Err(e) => status_of(&e),
    }
}

/// Level and inverse-branch word of a rational pair in the complete tree.
/// The word is written as ASCII digits '0'..'2' into `word`, which must
/// hold `word_cap` bytes including the trailing NUL.
///
/// # Safety
/// `pair` must be a valid handle; `level` a valid pointer; `word` must
/// point to `word_cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn td_locate(
    pair: *const TdPair,
    level: *mut i64,
    word: *mut c_char,
    word_cap: usize,
) -> TdStatus {
    if pair.is_null() || level.is_null() || word.is_null() {
        return TdStatus::TdNullPointer;
    }
    let loc = match tree::locate(&(*pair).inner) {
        Ok(loc) => loc,
        Err(e) => return status_of(&e),
    };
    if loc.word.len() + 1 > word_cap {
        return TdStatus::TdBufferTooSmall;
    }
    *level = loc.level;
    for (i, b) in loc.word.iter().enumerate() {
        *word.add(i) = (b'0' + b) as c_char;
    }
    *word.add(loc.word.len()) = 0;
    TdStatus::TdOk
}

/// Writes the boundary and interior cardinalities of tree level `n`.
///
/// # Safety
/// `boundary` and `interior` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn td_tree_level_counts(
    n: i64,
    boundary: *mut u64,
    interior: *mut u64,
) -> TdStatus {
    if boundary.is_null() || interior.is_null() {
        return TdStatus::TdNullPointer;
    }
    if !(0..=20).contains(&n) {
        return TdStatus::TdDomainError;
    }
    let (b, i) = tree::level_set(n);
    *boundary = b.len() as u64;
    *interior = i.len() as u64;
    TdStatus::TdOk
}

/// Writes the row sum `lambda_k` of the wandering-rate vector tree.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_lambda(k: usize, out: *mut f64) -> TdStatus {
    if out.is_null() {
        return TdStatus::TdNullPointer;
    }
    if k == 0 {
        return TdStatus::TdDomainError;
    }
    match wandering::lambda_tau_f64(k) {
        Ok((lambdas, _)) => {
            *out = lambdas[k - 1];
            TdStatus::TdOk
        }
        Err(e) => status_of(&e),
    }
}

/// Writes the invariant measure of the digit cell `k` under the fast map.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_cell_measure(k: u64, out: *mut f64) -> TdStatus {
    if out.is_null() {
        return TdStatus::TdNullPointer;
    }
    *out = tridyn::ergodic::cell_measure(k);
    TdStatus::TdOk
}

/// Writes the x and y coordinates of a pair as doubles.
///
/// # Safety
/// `pair` must be a valid handle; `x` and `y` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn td_pair_to_f64(
    pair: *const TdPair,
    x: *mut f64,
    y: *mut f64,
) -> TdStatus {
    if pair.is_null() || x.is_null() || y.is_null() {
        return TdStatus::TdNullPointer;
    }
    let p = (*pair).inner.to_point();
    *x = Scalar::to_f64(&p.x);
    *y = Scalar::to_f64(&p.y);
    TdStatus::TdOk
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    unsafe fn parse(text: &str) -> *mut TdPair {
        let c = CString::new(text).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(td_pair_parse(c.as_ptr(), &mut out), TdStatus::TdOk);
        out
    }

    #[test]
    fn parse_format_roundtrip() {
        unsafe {
            let p = parse("2/3,1/2");
            let mut s = ptr::null_mut();
            assert_eq!(td_pair_format(p, &mut s), TdStatus::TdOk);
            assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "4/6,3/6");
            td_string_free(s);
            td_pair_free(p);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        unsafe {
            let c = CString::new("not a pair").unwrap();
            let mut out = ptr::null_mut();
            assert_eq!(
                td_pair_parse(c.as_ptr(), &mut out),
                TdStatus::TdParseError
            );
            assert_eq!(td_pair_parse(ptr::null(), &mut out), TdStatus::TdNullPointer);
        }
    }

    #[test]
    fn digits_and_locate() {
        unsafe {
            let p = parse("2/3,1/2");
            let mut digits = [0u64; 16];
            let mut len = 0usize;
            let mut term = 0;
            assert_eq!(
                td_triangle_digits(p, digits.as_mut_ptr(), 16, &mut len, &mut term),
                TdStatus::TdOk
            );
            assert_eq!(&digits[..len], &[0, 0, 1]);
            assert_eq!(term, 1);

            let q = parse("3/5,2/5");
            let mut level = 0i64;
            let mut word = [0 as c_char; 16];
            assert_eq!(
                td_locate(q, &mut level, word.as_mut_ptr(), word.len()),
                TdStatus::TdOk
            );
            assert_eq!(level, 2);
            let text = CStr::from_ptr(word.as_ptr()).to_str().unwrap();
            assert_eq!(text, "1020");
            let mut tiny = [0 as c_char; 2];
            assert_eq!(
                td_locate(q, &mut level, tiny.as_mut_ptr(), tiny.len()),
                TdStatus::TdBufferTooSmall
            );
            td_pair_free(p);
            td_pair_free(q);
        }
    }

    #[test]
    fn mediant_and_compare() {
        unsafe {
            let a = parse("1/2,0");
            let b = parse("1,1/2");
            let mut m = ptr::null_mut();
            assert_eq!(td_pair_mediant(a, b, &mut m), TdStatus::TdOk);
            let mut s = ptr::null_mut();
            assert_eq!(td_pair_format(m, &mut s), TdStatus::TdOk);
            assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "3/4,1/4");
            let mut c = 0;
            assert_eq!(td_pair_lex_cmp(a, b, &mut c), TdStatus::TdOk);
            assert_eq!(c, -1);
            assert_eq!(td_pair_lex_cmp(a, a, &mut c), TdStatus::TdOk);
            assert_eq!(c, 0);
            td_string_free(s);
            td_pair_free(a);
            td_pair_free(b);
            td_pair_free(m);
        }
    }

    #[test]
    fn level_counts_and_scalars() {
        unsafe {
            let (mut b, mut i) = (0u64, 0u64);
            assert_eq!(td_tree_level_counts(3, &mut b, &mut i), TdStatus::TdOk);
            assert_eq!((b, i), (24, 12));
            assert_eq!(
                td_tree_level_counts(-1, &mut b, &mut i),
                TdStatus::TdDomainError
            );
            let mut v = 0.0;
            assert_eq!(td_lambda(1, &mut v), TdStatus::TdOk);
            assert!((v - 0.5).abs() < 1e-12);
            assert_eq!(td_lambda(0, &mut v), TdStatus::TdDomainError);
            assert_eq!(td_cell_measure(0, &mut v), TdStatus::TdOk);
            assert!((v - std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-8);
        }
    }
}
