//! C ABI for `qtk`.
//!
//! Objects are opaque heap handles released with the matching `_free` function.
//! Every fallible call returns a [`QtkStatus`]; on failure the message is available
//! from [`qtk_last_error_message`] on the same thread. Strings returned through out
//! parameters are owned by the caller and released with [`qtk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qtk::counting::{count_quadratic, count_self_reciprocal, count_sigma};
use qtk::hfactor::verify_factorization;
use qtk::moebius::{classify_sigma, reduce_canonical};
use qtk::poly::is_irreducible;
use qtk::text::{format_poly_coeffs, parse_expr, parse_field_element, parse_poly};
use qtk::transform::transform;
use qtk::{Error, Field, Poly, QuadRationalExpr};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QtkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    NotPrime = 4,
    SizeBound = 5,
    FieldMismatch = 6,
    Degenerate = 7,
    NotInvariant = 8,
    Mismatch = 9,
    Other = 10,
    Panic = 11,
}

/// A finite field GF(p^k).
pub struct QtkField(Field);

/// A polynomial over a [`QtkField`].
pub struct QtkPoly(Poly);

/// A quadratic rational expression `g/h`.
pub struct QtkExpr(QuadRationalExpr);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QtkStatus {
    match e {
        Error::Parse(_) => QtkStatus::Parse,
        Error::NotPrime(_) => QtkStatus::NotPrime,
        Error::SizeBoundExceeded(_) | Error::Overflow(_) => QtkStatus::SizeBound,
        Error::FieldMismatch(_, _) => QtkStatus::FieldMismatch,
        Error::DegenerateResult(_) | Error::SingularMap | Error::SingularTriple | Error::Char2Degenerate => {
            QtkStatus::Degenerate
        }
        Error::NotInvariant => QtkStatus::NotInvariant,
        Error::IdentityViolated(_) | Error::MismatchFound(_) => QtkStatus::Mismatch,
        Error::InvalidArgument(_) | Error::ZeroSigma | Error::RequiresNGreaterThan1 | Error::ZeroPolynomial => {
            QtkStatus::InvalidArgument
        }
        _ => QtkStatus::Other,
    }
}

/// Runs `body`, recording errors and panics for [`qtk_last_error_message`].
fn guard(body: impl FnOnce() -> Result<(), (QtkStatus, String)>) -> QtkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QtkStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QtkStatus::Panic
        }
    }
}

fn lib<T>(r: qtk::Result<T>) -> Result<T, (QtkStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (QtkStatus, String)> {
    // SAFETY: caller passes either null or a live handle from this library
    unsafe { p.as_ref() }.ok_or_else(|| (QtkStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, (QtkStatus, String)> {
    if s.is_null() {
        return Err((QtkStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: non-null, and the caller guarantees a nul-terminated string
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|_| (QtkStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), (QtkStatus, String)> {
    if out.is_null() {
        return Err((QtkStatus::NullPointer, "output pointer is null".into()));
    }
    // SAFETY: non-null out pointer supplied by the caller
    unsafe { out.write(v) };
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (QtkStatus, String)> {
    let c = CString::new(s).map_err(|_| (QtkStatus::Other, "string contains nul".into()))?;
    unsafe { put(out, c.into_raw()) }
}

/// Message of the last failed call on this thread, or null. Valid until the next
/// failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn qtk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or a string obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qtk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Creates GF(p^k).
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qtk_field_new(p: u64, k: u32, out: *mut *mut QtkField) -> QtkStatus {
    guard(|| {
        let f = lib(Field::new(p, k))?;
        unsafe { put(out, Box::into_raw(Box::new(QtkField(f)))) }
    })
}

/// Number of elements of the field, or 0 for a null handle.
///
/// # Safety
/// `f` is null or a live field handle.
#[no_mangle]
pub unsafe extern "C" fn qtk_field_order(f: *const QtkField) -> u64 {
    unsafe { f.as_ref() }.map_or(0, |f| f.0.order())
}

/// # Safety
/// `f` is null or a live field handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qtk_field_free(f: *mut QtkField) {
    if !f.is_null() {
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Parses `"c0,c1,..."` or a human form such as `"x^2+1"`.
///
/// # Safety
/// `f` is a live field handle, `s` a nul-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qtk_poly_parse(f: *const QtkField, s: *const c_char, out: *mut *mut QtkPoly) -> QtkStatus {
    guard(|| {
        let f = unsafe { deref(f, "field") }?;
        let s = unsafe { text(s, "polynomial text") }?;
        let p = lib(parse_poly(&f.0, s))?;
        unsafe { put(out, Box::into_raw(Box::new(QtkPoly(p)))) }
    })
}

/// Coefficient-list form, constant term first.
///
/// # Safety
/// `p` is a live polynomial handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qtk_poly_to_string(p: *const QtkPoly, out: *mut *mut c_char) -> QtkStatus {
    guard(|| {
        let p = unsafe { deref(p, "polynomial") }?;
        unsafe { put_string(out, format_poly_coeffs(&p.0)) }
    })
}

/// Degree, or -1 for the zero polynomial or a null handle.
///
/// # Safety
/// `p` is null or a live polynomial handle.
#[no_mangle]
pub unsafe extern "C" fn qtk_poly_degree(p: *const QtkPoly) -> i64 {
    unsafe { p.as_ref() }.and_then(|p| p.0.deg()).map_or(-1, |d| d as i64)
}

/// # Safety
/// `p` is null or a live polynomial handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qtk_poly_free(p: *mut QtkPoly) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// # Safety
/// `p` is a live polynomial handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qtk_is_irreducible(p: *const QtkPoly, out: *mut bool) -> QtkStatus {
    guard(|| {
        let p = unsafe { deref(p, "polynomial") }?;
        let v = lib(is_irreducible(&p.0))?;
        unsafe { put(out, v) }
    })
}

/// Parses `"g / h"`.
///
/// # Safety
/// `f` is a live field handle, `s` a nul-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qtk_expr_parse(f: *const QtkField, s: *const c_char, out: *mut *mut QtkExpr) -> QtkStatus {
    guard(|| {
        let f = unsafe { deref(f, "field") }?;
        let s = unsafe { text(s, "expression text") }?;
        let r = lib(parse_expr(&f.0, s))?;
        unsafe { put(out, Box::into_raw(Box::new(QtkExpr(r)))) }
    })
}

/// # Safety
/// `r` is null or a live expression handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qtk_expr_free(r: *mut QtkExpr) {
    if !r.is_null() {
        drop(unsafe { Box::from_raw(r) });
    }
}

/// `h^deg f f(g/h)`. `degree_dropped` may be null.
///
/// # Safety
/// `f` and `r` are live handles over the same field; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qtk_transform(
    f: *const QtkPoly,
    r: *const QtkExpr,
    out: *mut *mut QtkPoly,
    degree_dropped: *mut bool,
) -> QtkStatus {
    guard(|| {
        let f = unsafe { deref(f, "polynomial") }?;
        let r = unsafe { deref(r, "expression") }?;
        let t = lib(transform(&f.0, &r.0))?;
        if !degree_dropped.is_null() {
            unsafe { put(degree_dropped, t.degree_dropped) }?;
        }
        unsafe { put(out, Box::into_raw(Box::new(QtkPoly(t.result)))) }
    })
}

/// Self-reciprocal irreducible monic polynomials of degree `2n` over GF(q).
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qtk_count_self_reciprocal(q: u64, n: u64, out: *mut u64) -> QtkStatus {
    guard(|| {
        let c = lib(count_self_reciprocal(q, n))?;
        let v = u64::try_from(c.value).map_err(|_| (QtkStatus::SizeBound, "count exceeds u64".into()))?;
        unsafe { put(out, v) }
    })
}

/// Irreducible `F` of degree `2n` with `x^(2n) F(sigma/x) = sigma^n F(x)`.
///
/// # Safety
/// `f` is a live field handle, `sigma` a nul-terminated element string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qtk_count_sigma(f: *const QtkField, n: u64, sigma: *const c_char, out: *mut u64) -> QtkStatus {
    guard(|| {
        let f = unsafe { deref(f, "field") }?;
        let s = lib(parse_field_element(&f.0, unsafe { text(sigma, "sigma") }?))?;
        let c = lib(count_sigma(n, &s))?;
        let v = u64::try_from(c.value).map_err(|_| (QtkStatus::SizeBound, "count exceeds u64".into()))?;
        unsafe { put(out, v) }
    })
}

/// Monic irreducible `f` of degree `n > 1` whose transform by `r` is irreducible.
///
/// # Safety
/// `r` is a live expression handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qtk_count_expr(r: *const QtkExpr, n: u64, out: *mut u64) -> QtkStatus {
    guard(|| {
        let r = unsafe { deref(r, "expression") }?;
        let c = lib(count_quadratic(n, &r.0))?;
        let v = u64::try_from(c.value).map_err(|_| (QtkStatus::SizeBound, "count exceeds u64".into()))?;
        unsafe { put(out, v) }
    })
}

/// Canonical form, class and reduction trail as one JSON object.
///
/// # Safety
/// `r` is a live expression handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qtk_reduce_json(r: *const QtkExpr, out: *mut *mut c_char) -> QtkStatus {
    guard(|| {
        let r = unsafe { deref(r, "expression") }?;
        let (form, trail) = reduce_canonical(&r.0);
        let doc = serde_json::json!({
            "canonical": form,
            "class": classify_sigma(&r.0),
            "trail": trail,
        });
        unsafe { put_string(out, doc.to_string()) }
    })
}

/// Factorization report for `H` built from `r`, as JSON. Returns `Mismatch` (with the
/// report still written) when any check fails.
///
/// # Safety
/// `r` is a live expression handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qtk_hverify_json(r: *const QtkExpr, n: u32, out: *mut *mut c_char) -> QtkStatus {
    guard(|| {
        let r = unsafe { deref(r, "expression") }?;
        let rep = lib(verify_factorization(&r.0, n))?;
        let doc = serde_json::to_string(&rep).map_err(|e| (QtkStatus::Other, e.to_string()))?;
        unsafe { put_string(out, doc) }?;
        if rep.verified() {
            Ok(())
        } else {
            Err((QtkStatus::Mismatch, rep.mismatches.join("; ")))
        }
    })
}
