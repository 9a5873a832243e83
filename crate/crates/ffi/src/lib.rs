//! C ABI over the jetgroups library.
//!
//! Objects cross the boundary as opaque handles created by `jg_*_parse` or by
//! an operation and released with the matching `jg_*_free`. Every fallible
//! function returns a [`JgStatus`] and writes its result through an out
//! pointer; on failure `jg_last_error` describes the error. Strings returned
//! by the library are released with [`jg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use jetgroups::cli::{parse, parse_scalar, Shape};
use jetgroups::examples::{verify, verify_g2, verify_gn_adaptive};
use jetgroups::{Error, JetDiffeo, JetVectorField};

/// Status codes. The nonzero domain codes match the command line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JgStatus {
    Ok = 0,
    Domain = 1,
    Parse = 2,
    Verify = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// Opaque jet of a formal diffeomorphism.
pub struct JgDiffeo(JetDiffeo);

/// Opaque jet of a formal vector field.
pub struct JgField(JetVectorField);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> JgStatus {
    match e.exit_code() {
        2 => JgStatus::Parse,
        3 => JgStatus::Verify,
        _ => JgStatus::Domain,
    }
}

enum Fail {
    Lib(Error),
    Null,
    Utf8,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> JgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            JgStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument");
            JgStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8");
            JgStatus::InvalidUtf8
        }
        Err(_) => {
            set_error("internal panic");
            JgStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

/// Message for the most recent failure on this thread ("" after a success).
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn jg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn jg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a jet such as `(x + y^2, y)` in `n` variables at order `order`.
///
/// # Safety
/// `src` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_diffeo_parse(
    src: *const c_char,
    n: usize,
    order: u32,
    out: *mut *mut JgDiffeo,
) -> JgStatus {
    guard(|| {
        let shape = Shape { n, order };
        let phi = shape.to_diffeo(shape.eval(&parse(text(src)?)?)?)?;
        put(out, JgDiffeo(phi))
    })
}

/// Parses a vector field such as `(x^2)*d/dx`.
///
/// # Safety
/// `src` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_field_parse(
    src: *const c_char,
    n: usize,
    order: u32,
    out: *mut *mut JgField,
) -> JgStatus {
    guard(|| {
        let shape = Shape { n, order };
        let x = shape.to_field(shape.eval(&parse(text(src)?)?)?)?;
        put(out, JgField(x))
    })
}

/// # Safety
/// `p` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn jg_diffeo_free(p: *mut JgDiffeo) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn jg_field_free(p: *mut JgField) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `a ∘ b`.
///
/// # Safety
/// Handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_diffeo_compose(
    a: *const JgDiffeo,
    b: *const JgDiffeo,
    out: *mut *mut JgDiffeo,
) -> JgStatus {
    guard(|| {
        let c = get(a)?.0.compose(&get(b)?.0)?;
        put(out, JgDiffeo(c))
    })
}

/// # Safety
/// `a` must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_diffeo_invert(a: *const JgDiffeo, out: *mut *mut JgDiffeo) -> JgStatus {
    guard(|| {
        let c = get(a)?.0.invert()?;
        put(out, JgDiffeo(c))
    })
}

/// Logarithm of a unipotent jet.
///
/// # Safety
/// `a` must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_diffeo_log(a: *const JgDiffeo, out: *mut *mut JgField) -> JgStatus {
    guard(|| {
        let x = JetVectorField::log_unipotent(&get(a)?.0)?;
        put(out, JgField(x))
    })
}

/// Time-`t` flow of a nilpotent field; `t` is a scalar expression such as `1/2`.
///
/// # Safety
/// `x` must be live, `t` nul-terminated, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_field_exp(
    x: *const JgField,
    t: *const c_char,
    out: *mut *mut JgDiffeo,
) -> JgStatus {
    guard(|| {
        let t = parse_scalar(text(t)?)?;
        let phi = get(x)?.0.exp_nilpotent(&t)?;
        put(out, JgDiffeo(phi))
    })
}

/// Lie bracket `[a, b]`.
///
/// # Safety
/// Handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_field_bracket(
    a: *const JgField,
    b: *const JgField,
    out: *mut *mut JgField,
) -> JgStatus {
    guard(|| {
        let c = get(a)?.0.lie_bracket(&get(b)?.0)?;
        put(out, JgField(c))
    })
}

/// `Z` with `exp(Z) = exp(a) ∘ exp(b)`.
///
/// # Safety
/// Handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_field_bch(
    a: *const JgField,
    b: *const JgField,
    out: *mut *mut JgField,
) -> JgStatus {
    guard(|| {
        let c = get(a)?.0.bch_dynkin(&get(b)?.0)?;
        put(out, JgField(c))
    })
}

/// Canonical text of a jet; free with `jg_string_free`.
///
/// # Safety
/// `a` must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_diffeo_render(a: *const JgDiffeo, out: *mut *mut c_char) -> JgStatus {
    guard(|| put_string(out, get(a)?.0.to_string()))
}

/// Canonical text of a field; free with `jg_string_free`.
///
/// # Safety
/// `a` must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_field_render(a: *const JgField, out: *mut *mut c_char) -> JgStatus {
    guard(|| put_string(out, get(a)?.0.to_string()))
}

/// JSON report of the G^2 derived-length check at jet order `order`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_verify_g2(order: u32, out: *mut *mut c_char) -> JgStatus {
    guard(|| {
        let r = verify_g2(order)?;
        put_string(out, r.to_json().to_string())
    })
}

/// JSON report of the G^n derived-length check; `order = 0` picks the default start.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jg_verify_gn(n: usize, order: u32, out: *mut *mut c_char) -> JgStatus {
    guard(|| {
        let k = if order == 0 { verify::default_order(n) } else { order };
        let r = verify_gn_adaptive(n, k)?;
        put_string(out, r.to_json().to_string())
    })
}
