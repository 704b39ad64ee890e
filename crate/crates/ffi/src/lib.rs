//! C interface to `folia_core`.
//!
//! Foliations and certificates are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call
//! returns a [`FoliaStatus`]; the message of the last failure on the
//! calling thread is available from [`folia_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use folia_core::classify::{classify, verify_certificate, Hints};
use folia_core::foliation::{check_integrable, radial_contraction, saturate, ChartPoint, Foliation};
use folia_core::io::cert::CertificateDocument;
use folia_core::io::parse::{parse_document, parse_point};
use folia_core::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoliaStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Math = 4,
    VerifyFailed = 5,
    Panic = 6,
}

/// Bits reported by [`folia_check`].
pub const FOLIA_CHECK_INTEGRABLE: u32 = 1;
pub const FOLIA_CHECK_RADIAL: u32 = 2;
pub const FOLIA_CHECK_SATURATED: u32 = 4;

/// A saturated foliation on projective space.
pub struct FoliaFoliation {
    inner: Foliation,
}

/// A certificate document together with its verification transcript.
pub struct FoliaCertificate {
    doc: CertificateDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn from_core(e: Error) -> FoliaStatus {
    set_error(&e.to_string());
    match e {
        Error::Syntax { .. }
        | Error::UnknownVariable(_)
        | Error::Certificate(_)
        | Error::BadChart(_)
        | Error::PointDimension { .. } => FoliaStatus::Parse,
        _ => FoliaStatus::Math,
    }
}

fn guard(f: impl FnOnce() -> Result<(), FoliaStatus>) -> FoliaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FoliaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            FoliaStatus::Panic
        }
    }
}

unsafe fn read_text<'a>(p: *const c_char) -> Result<&'a str, FoliaStatus> {
    if p.is_null() {
        set_error("null argument");
        return Err(FoliaStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        FoliaStatus::InvalidUtf8
    })
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, FoliaStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        FoliaStatus::NullArgument
    })
}

fn out_ptr<T>(p: *mut T) -> Result<(), FoliaStatus> {
    if p.is_null() {
        set_error("null output pointer");
        return Err(FoliaStatus::NullArgument);
    }
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn folia_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a form document (`vars:` and `form:` lines) and saturates it.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn folia_foliation_parse(text: *const c_char, out: *mut *mut FoliaFoliation) -> FoliaStatus {
    guard(|| {
        out_ptr(out)?;
        let doc = parse_document(read_text(text)?).map_err(from_core)?;
        let inner = Foliation::saturating(doc.form).map_err(from_core)?;
        *out = Box::into_raw(Box::new(FoliaFoliation { inner }));
        Ok(())
    })
}

/// # Safety
/// `f` must come from [`folia_foliation_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn folia_foliation_free(f: *mut FoliaFoliation) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn folia_foliation_degree(f: *const FoliaFoliation, out: *mut i64) -> FoliaStatus {
    guard(|| {
        out_ptr(out)?;
        *out = handle(f)?.inner.degree();
        Ok(())
    })
}

/// Dimension `n` of the ambient projective space.
///
/// # Safety
/// `f` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn folia_foliation_dimension(f: *const FoliaFoliation, out: *mut usize) -> FoliaStatus {
    guard(|| {
        out_ptr(out)?;
        *out = handle(f)?.inner.n();
        Ok(())
    })
}

/// Canonical rendering of the defining form; release with [`folia_string_free`].
///
/// # Safety
/// `f` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn folia_foliation_render(f: *const FoliaFoliation) -> *mut c_char {
    match handle(f) {
        Ok(f) => owned_string(f.inner.omega().render()),
        Err(_) => ptr::null_mut(),
    }
}

/// Checks a form document without saturating it first. On success `flags`
/// holds the `FOLIA_CHECK_*` bits that hold.
///
/// # Safety
/// `text` must be a NUL-terminated string and `flags` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn folia_check(text: *const c_char, flags: *mut u32) -> FoliaStatus {
    guard(|| {
        out_ptr(flags)?;
        let form = parse_document(read_text(text)?).map_err(from_core)?.form;
        let mut bits = 0;
        if check_integrable(&form).holds() {
            bits |= FOLIA_CHECK_INTEGRABLE;
        }
        if radial_contraction(&form).is_zero() {
            bits |= FOLIA_CHECK_RADIAL;
        }
        if !form.is_zero() && saturate(&form).map_err(from_core)? == form {
            bits |= FOLIA_CHECK_SATURATED;
        }
        *flags = bits;
        Ok(())
    })
}

/// Classifies a degree-four foliation. `point` is a comma-separated list of
/// affine coordinates in chart `chart`, or null to search.
///
/// # Safety
/// `f` must be a live handle, `point` null or a NUL-terminated string and
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn folia_classify(
    f: *const FoliaFoliation,
    chart: usize,
    point: *const c_char,
    out: *mut *mut FoliaCertificate,
) -> FoliaStatus {
    guard(|| {
        out_ptr(out)?;
        let f = &handle(f)?.inner;
        let p = if point.is_null() {
            None
        } else {
            Some(ChartPoint {
                chart,
                point: parse_point(read_text(point)?).map_err(from_core)?,
            })
        };
        let c = classify(f, p.as_ref(), &Hints::default()).map_err(from_core)?;
        let doc = CertificateDocument::new(c, f);
        *out = Box::into_raw(Box::new(FoliaCertificate { doc }));
        Ok(())
    })
}

/// Reads a certificate document.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn folia_certificate_parse(
    text: *const c_char,
    out: *mut *mut FoliaCertificate,
) -> FoliaStatus {
    guard(|| {
        out_ptr(out)?;
        let doc = CertificateDocument::from_text(read_text(text)?).map_err(from_core)?;
        *out = Box::into_raw(Box::new(FoliaCertificate { doc }));
        Ok(())
    })
}

/// # Safety
/// `c` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn folia_certificate_free(c: *mut FoliaCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Variant tag such as `"affine"`; a static string, never freed.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn folia_certificate_tag(c: *const FoliaCertificate) -> *const c_char {
    let Ok(c) = handle(c) else {
        return ptr::null();
    };
    let tag: &'static CStr = match c.doc.certificate.tag() {
        "first_integral_conditional" => c"first_integral_conditional",
        "linear_pullback" => c"linear_pullback",
        "affine" => c"affine",
        "pure_projective" => c"pure_projective",
        "finite_gvs" => c"finite_gvs",
        "riccati_pullback" => c"riccati_pullback",
        _ => c"case4_needs_data",
    };
    tag.as_ptr()
}

/// Serialized document; release with [`folia_string_free`].
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn folia_certificate_to_json(c: *const FoliaCertificate) -> *mut c_char {
    match handle(c) {
        Ok(c) => owned_string(c.doc.to_text()),
        Err(_) => ptr::null_mut(),
    }
}

/// Re-verifies a certificate against `f`. Returns `VerifyFailed` with the
/// failing identities in [`folia_last_error`] when a check fails.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn folia_certificate_verify(
    c: *const FoliaCertificate,
    f: *const FoliaFoliation,
) -> FoliaStatus {
    guard(|| {
        let report = verify_certificate(&handle(c)?.doc.certificate, &handle(f)?.inner);
        if report.ok() {
            Ok(())
        } else {
            set_error(&format!("failed: {}", report.failures().join(", ")));
            Err(FoliaStatus::VerifyFailed)
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn folia_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
