//! C ABI over `ellquad`.
//!
//! Curves are opaque handles created by [`ellquad_curve_new`] and released
//! with [`ellquad_curve_free`]. Every fallible call returns an
//! [`EllquadStatus`]; on failure [`ellquad_last_error`] describes the cause.
//! Strings handed out by the library are freed with [`ellquad_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use ellquad::curve::{parse_curve, KCurve};
use ellquad::error::Error;
use ellquad::heights::{HeightContext, Verdict, DEFAULT_TOLERANCE};
use ellquad::modp::ap_table;
use ellquad::quadfield::QuadField;
use ellquad::records::{self, VerifyOptions};
use ellquad::sieve::{mn_sum, Variant};
use ellquad::torsion::torsion_over_k;

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EllquadStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    NotOnCurve = 5,
    Indeterminate = 6,
    Failed = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EllquadVariant {
    S0 = 0,
    S1 = 1,
}

/// An elliptic curve over Q or a quadratic field.
pub struct EllquadCurve {
    inner: KCurve,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> EllquadStatus {
    match e {
        Error::Parse { .. } => EllquadStatus::Parse,
        Error::Domain(_) | Error::Singular => EllquadStatus::Domain,
        Error::NotOnCurve(_) => EllquadStatus::NotOnCurve,
        Error::Indeterminate(_) => EllquadStatus::Indeterminate,
        _ => EllquadStatus::Failed,
    }
}

struct Fail(EllquadStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, turning errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EllquadStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EllquadStatus::Ok,
        Ok(Err(Fail(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("panic inside ellquad");
            EllquadStatus::Panic
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(EllquadStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(EllquadStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn curve<'a>(c: *const EllquadCurve) -> Result<&'a KCurve, Fail> {
    c.as_ref()
        .map(|c| &c.inner)
        .ok_or_else(|| Fail(EllquadStatus::NullPointer, "curve handle is null".into()))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(EllquadStatus::NullPointer, format!("{what} is null")));
    }
    *out = v;
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail(EllquadStatus::Failed, e.to_string()))?;
    if out.is_null() {
        return Err(Fail(EllquadStatus::NullPointer, "output pointer is null".into()));
    }
    *out = c.into_raw();
    Ok(())
}

fn field(d: i64) -> Result<QuadField, Fail> {
    if d == 1 {
        Ok(QuadField::rationals())
    } else {
        Ok(QuadField::new(d)?)
    }
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn ellquad_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ellquad_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `[a1,a2,a3,a4,a6]` over Q(√field_d); `field_d = 1` means Q.
///
/// # Safety
/// `text` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ellquad_curve_new(
    text: *const c_char,
    field_d: i64,
    out: *mut *mut EllquadCurve,
) -> EllquadStatus {
    guard(|| {
        let t = c_str(text, "curve text")?;
        let e = parse_curve(t, &field(field_d)?)?;
        put(
            out,
            Box::into_raw(Box::new(EllquadCurve { inner: e })),
            "output pointer",
        )
    })
}

/// # Safety
/// `c` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ellquad_curve_free(c: *mut EllquadCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// The d of the coefficient field (1 for Q), or 0 for a null handle.
///
/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ellquad_curve_field_d(c: *const EllquadCurve) -> i64 {
    c.as_ref().map_or(0, |c| c.inner.field().d())
}

/// Writes the curve as `[a1,a2,a3,a4,a6]`.
///
/// # Safety
/// `c` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ellquad_curve_to_string(c: *const EllquadCurve, out: *mut *mut c_char) -> EllquadStatus {
    guard(|| put_string(out, curve(c)?.to_string()))
}

/// # Safety
/// `c` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ellquad_curve_discriminant(c: *const EllquadCurve, out: *mut *mut c_char) -> EllquadStatus {
    guard(|| put_string(out, curve(c)?.discriminant().to_string()))
}

/// # Safety
/// `c` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ellquad_curve_j_invariant(c: *const EllquadCurve, out: *mut *mut c_char) -> EllquadStatus {
    guard(|| put_string(out, curve(c)?.j_invariant().to_string()))
}

/// The torsion subgroup over the curve's field as Z/n1 x Z/n2 with n1 | n2
/// (n1 = 1 when cyclic).
///
/// # Safety
/// `c` is a live handle; `n1` and `n2` are writable.
#[no_mangle]
pub unsafe extern "C" fn ellquad_curve_torsion(c: *const EllquadCurve, n1: *mut u64, n2: *mut u64) -> EllquadStatus {
    guard(|| {
        let g = torsion_over_k(curve(c)?)?.group;
        put(n1, g.n1, "n1")?;
        put(n2, g.n2, "n2")
    })
}

/// The quadratic twist by `d` of a curve over Q.
///
/// # Safety
/// `c` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ellquad_curve_twist(
    c: *const EllquadCurve,
    d: i64,
    out: *mut *mut EllquadCurve,
) -> EllquadStatus {
    guard(|| {
        let e = curve(c)?
            .to_rational()
            .ok_or_else(|| Fail(EllquadStatus::Domain, "twist needs a curve over Q".into()))?;
        let t = e.quadratic_twist_i64(d)?;
        let k = t.base_change(&QuadField::rationals());
        put(
            out,
            Box::into_raw(Box::new(EllquadCurve { inner: k })),
            "output pointer",
        )
    })
}

/// Canonical height of a point written `(x;y)` or `(x;?)`, with a rigorous
/// bound on the error of `value`.
///
/// # Safety
/// `c` is a live handle, `point` NUL-terminated, `value` and `error` writable.
#[no_mangle]
pub unsafe extern "C" fn ellquad_point_height(
    c: *const EllquadCurve,
    point: *const c_char,
    value: *mut f64,
    error: *mut f64,
) -> EllquadStatus {
    guard(|| {
        let e = curve(c)?;
        let p = records::parse_point(e, c_str(point, "point")?)?;
        let h = HeightContext::new(e)?.canonical_height(&p, DEFAULT_TOLERANCE)?;
        put(value, h.value(), "value")?;
        put(error, h.error_bound(), "error")
    })
}

/// Decides whether `n` points are independent modulo torsion. `verdict`
/// receives 1 for independent and 0 for dependent; an undecided pairing
/// returns `EllquadStatus::Indeterminate`. `regulator` may be null.
///
/// # Safety
/// `points` holds `n` NUL-terminated strings; `verdict` is writable.
#[no_mangle]
pub unsafe extern "C" fn ellquad_points_independent(
    c: *const EllquadCurve,
    points: *const *const c_char,
    n: usize,
    verdict: *mut i32,
    regulator: *mut f64,
) -> EllquadStatus {
    guard(|| {
        let e = curve(c)?;
        if points.is_null() && n > 0 {
            return Err(Fail(EllquadStatus::NullPointer, "points is null".into()));
        }
        let mut pts = Vec::with_capacity(n);
        for i in 0..n {
            pts.push(records::parse_point(e, c_str(*points.add(i), "point")?)?);
        }
        let rep = HeightContext::new(e)?.independence(&pts)?;
        if !regulator.is_null() {
            *regulator = rep.gram.det.to_f64();
        }
        match rep.verdict {
            Verdict::Independent => put(verdict, 1, "verdict"),
            Verdict::Dependent(_) => put(verdict, 0, "verdict"),
            Verdict::Indeterminate(why) => Err(Fail(EllquadStatus::Indeterminate, why)),
        }
    })
}

/// Mestre-Nagao sum over primes up to `pmax` of the twist by squarefree `d`.
///
/// # Safety
/// `c` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ellquad_mn_sum(
    c: *const EllquadCurve,
    d: i64,
    pmax: u64,
    variant: EllquadVariant,
    out: *mut f64,
) -> EllquadStatus {
    guard(|| {
        let e = curve(c)?
            .to_rational()
            .ok_or_else(|| Fail(EllquadStatus::Domain, "sums need a curve over Q".into()))?;
        let v = match variant {
            EllquadVariant::S0 => Variant::S0,
            EllquadVariant::S1 => Variant::S1,
        };
        let s = mn_sum(&e, d, &ap_table(&e, pmax), v)?;
        put(out, s.sum, "output")
    })
}

/// Verifies a record file, or the built-in corpus when `path` is null.
/// `failed` receives the number of failed claims; `report` (nullable)
/// receives the text report.
///
/// # Safety
/// `path` is null or NUL-terminated; `failed` is writable.
#[no_mangle]
pub unsafe extern "C" fn ellquad_verify_records(
    path: *const c_char,
    failed: *mut u32,
    report: *mut *mut c_char,
) -> EllquadStatus {
    guard(|| {
        let corpus = if path.is_null() {
            records::parse_corpus(records::BUILTIN_CORPUS)?
        } else {
            records::ingest(Path::new(c_str(path, "path")?))?
        };
        let rep = records::verify(&corpus, &VerifyOptions::default())?;
        let s = rep.summary();
        let n = [&s.torsion, &s.j, &s.points, &s.rank, &s.conditional]
            .iter()
            .map(|c| c.failed as u32)
            .sum();
        put(failed, n, "failed")?;
        if !report.is_null() {
            put_string(report, rep.to_string())?;
        }
        Ok(())
    })
}
