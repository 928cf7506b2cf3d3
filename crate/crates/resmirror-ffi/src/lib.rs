//! C ABI over `resmirror`. Every call returns an [`RmStatus`]; results come back
//! through out-pointers, strings are NUL-terminated UTF-8 owned by the caller and
//! released with [`rm_string_free`]. The message of the last failure on the calling
//! thread is available from [`rm_last_error`].

use resmirror::exact::fmt_rational;
use resmirror::geometries::{Degree, Geometry, Insertion};
use resmirror::series::{self, Direct, GradedSeries, Truncation};
use resmirror::vsc::VscTable;
use resmirror::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    InvalidDegree = 4,
    InvalidInsertion = 5,
    Computation = 6,
    CacheCorruption = 7,
    Panic = 8,
}

/// Opaque geometry handle.
pub struct RmGeometry(Geometry);

/// Opaque graded series handle.
pub struct RmSeries {
    series: GradedSeries,
    single: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> RmStatus {
    match e {
        Error::InvalidDegree(_) => RmStatus::InvalidDegree,
        Error::InvalidInsertion(_) => RmStatus::InvalidInsertion,
        Error::InvalidArgument(_) | Error::Parse(_) | Error::InvalidComb(_) | Error::NegativeExponent(_) => {
            RmStatus::InvalidArgument
        }
        Error::CacheCorruption(_) => RmStatus::CacheCorruption,
        _ => RmStatus::Computation,
    }
}

enum Failure {
    Status(RmStatus, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Status(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RmStatus::Ok,
        Ok(Err(Failure::Status(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            RmStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(RmStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Status(RmStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

fn check_out<T>(p: *mut T) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::Status(RmStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

unsafe fn geometry<'a>(g: *const RmGeometry) -> Result<&'a Geometry, Failure> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| Failure::Status(RmStatus::NullPointer, "null geometry".into()))
}

fn out_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Status(RmStatus::Computation, "interior NUL".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn insertion(g: &Geometry, s: &str) -> Result<Insertion, Failure> {
    Ok(resmirror::cli::parse_insertion(g, s)?)
}

/// Message of the last failure on this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn rm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer previously returned through an out-parameter here.
#[no_mangle]
pub unsafe extern "C" fn rm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a geometry by name (`cpn` uses `n` and `k`, `kf0` uses `k`; other values are
/// ignored).
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rm_geometry_new(
    name: *const c_char,
    n: u32,
    k: i64,
    out: *mut *mut RmGeometry,
) -> RmStatus {
    guard(|| {
        check_out(out)?;
        let g = Geometry::from_name(text(name)?, Some(n), Some(k))?;
        *out = Box::into_raw(Box::new(RmGeometry(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from [`rm_geometry_new`], freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rm_geometry_free(g: *mut RmGeometry) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// `w(O_a O_b)_{0,d}` as an exact rational string; `degree` is `"d"` or `"da,db"`.
///
/// # Safety
/// Pointers must be valid; `out` receives a string to release with [`rm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rm_two_point(
    g: *const RmGeometry,
    degree: *const c_char,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> RmStatus {
    guard(|| {
        check_out(out)?;
        let g = geometry(g)?;
        let d: Degree = text(degree)?.parse()?;
        let a = insertion(g, text(a)?)?;
        let b = insertion(g, text(b)?)?;
        out_string(out, fmt_rational(&g.two_point(&d, &a, &b)?))
    })
}

/// Generating function of `w(O_a O_b)` through total degree `trunc`.
///
/// # Safety
/// Pointers must be valid; `out` receives a handle to release with [`rm_series_free`].
#[no_mangle]
pub unsafe extern "C" fn rm_series_generating(
    g: *const RmGeometry,
    a: *const c_char,
    b: *const c_char,
    trunc: u32,
    out: *mut *mut RmSeries,
) -> RmStatus {
    guard(|| {
        check_out(out)?;
        let g = geometry(g)?;
        let a = insertion(g, text(a)?)?;
        let b = insertion(g, text(b)?)?;
        let s = series::build_generating_function(g, &a, &b, trunc, Truncation::Total, &Direct)?;
        *out = Box::into_raw(Box::new(RmSeries { series: s, single: !g.is_bi() }));
        Ok(())
    })
}

/// Mirror-transformed generating function of `w(O_a O_b)`.
///
/// # Safety
/// As [`rm_series_generating`].
#[no_mangle]
pub unsafe extern "C" fn rm_series_gw(
    g: *const RmGeometry,
    a: *const c_char,
    b: *const c_char,
    trunc: u32,
    out: *mut *mut RmSeries,
) -> RmStatus {
    guard(|| {
        check_out(out)?;
        let g = geometry(g)?;
        let a = insertion(g, text(a)?)?;
        let b = insertion(g, text(b)?)?;
        let f = series::build_generating_function(g, &a, &b, trunc, Truncation::Total, &Direct)?;
        let m = series::mirror_map(g, trunc, Truncation::Total, &Direct)?;
        let s = series::transform(&f, &m)?;
        *out = Box::into_raw(Box::new(RmSeries { series: s, single: !g.is_bi() }));
        Ok(())
    })
}

/// Component `i` (0 or 1) of the mirror map `t(x)`.
///
/// # Safety
/// As [`rm_series_generating`].
#[no_mangle]
pub unsafe extern "C" fn rm_mirror_map(
    g: *const RmGeometry,
    i: u32,
    trunc: u32,
    out: *mut *mut RmSeries,
) -> RmStatus {
    guard(|| {
        check_out(out)?;
        let g = geometry(g)?;
        let m = series::mirror_map(g, trunc, Truncation::Total, &Direct)?;
        let s = m
            .t
            .get(i as usize)
            .cloned()
            .ok_or_else(|| Failure::Status(RmStatus::InvalidArgument, format!("no mirror map component {i}")))?;
        *out = Box::into_raw(Box::new(RmSeries { series: s, single: !g.is_bi() }));
        Ok(())
    })
}

/// Coefficient of `q_1^{da} q_2^{db}` (the constant term for `(0,0)`).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_series_coeff(s: *const RmSeries, da: u32, db: u32, out: *mut *mut c_char) -> RmStatus {
    guard(|| {
        check_out(out)?;
        let s = s.as_ref().ok_or_else(|| Failure::Status(RmStatus::NullPointer, "null series".into()))?;
        out_string(out, fmt_rational(&s.series.coeff(resmirror::partitions::BiDegree::new(da, db))))
    })
}

/// The series as JSON (`affine`, `terms`, `trunc`).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_series_json(s: *const RmSeries, out: *mut *mut c_char) -> RmStatus {
    guard(|| {
        check_out(out)?;
        let s = s.as_ref().ok_or_else(|| Failure::Status(RmStatus::NullPointer, "null series".into()))?;
        out_string(out, serde_json::to_string(&s.series.to_json()).expect("serializable"))
    })
}

/// The series in human-readable form.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_series_text(s: *const RmSeries, out: *mut *mut c_char) -> RmStatus {
    guard(|| {
        check_out(out)?;
        let s = s.as_ref().ok_or_else(|| Failure::Status(RmStatus::NullPointer, "null series".into()))?;
        out_string(out, s.series.render(s.single))
    })
}

/// # Safety
/// `s` must be null or a handle returned here, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rm_series_free(s: *mut RmSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `L̃_n^{N,k,d}` by the recursion.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_vsc(big_n: u32, k: u32, d: u32, n: i64, out: *mut *mut c_char) -> RmStatus {
    guard(|| {
        check_out(out)?;
        out_string(out, fmt_rational(&VscTable::new(k)?.value(big_n, d, n)?))
    })
}

/// `{"w":[..],"j":[..]}` for `d = 1..=dmax`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_j_coefficients(dmax: u32, out: *mut *mut c_char) -> RmStatus {
    guard(|| {
        check_out(out)?;
        let e = series::j_coefficients(dmax, &Direct)?;
        out_string(out, serde_json::to_string(&e).expect("serializable"))
    })
}

#[doc(hidden)]
pub fn null_series() -> *mut RmSeries {
    ptr::null_mut()
}
