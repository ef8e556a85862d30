//! C interface to `scjl`.
//!
//! Matrices are passed around as opaque `ScjlMatrix` handles. Every entry
//! point returns an `ScjlStatus`; on anything but `SCJL_STATUS_OK` the
//! message is available from `scjl_last_error_message` on the same thread.
//! Strings returned by the library are released with `scjl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use scjl::oracle::{binomial_moment_exact, error_z, hypergeometric_moment_exact, BinomialSpec};
use scjl::sketch::{sample_sign_consistent, sample_sparse_jl, select_params, AnyMatrix, SketchParams, ThetaConstants};
use scjl::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScjlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    BudgetExceeded = 4,
    Parse = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScjlMatrixKind {
    SignConsistent = 0,
    SparseJl = 1,
}

/// Opaque matrix handle.
pub struct ScjlMatrix {
    inner: AnyMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> ScjlStatus {
    match err {
        Error::InvalidParameter(_)
        | Error::InvalidOrder { .. }
        | Error::BracketFailure { .. }
        | Error::IdentityViolation(_) => ScjlStatus::InvalidArgument,
        Error::DimensionMismatch { .. } => ScjlStatus::DimensionMismatch,
        Error::BudgetExceeded { .. } => ScjlStatus::BudgetExceeded,
        Error::Format(_) | Error::Parse { .. } | Error::ZeroVector { .. } | Error::Json(_) | Error::Csv(_) => {
            ScjlStatus::Parse
        }
        Error::Io(_) => ScjlStatus::Io,
    }
}

struct Fail(ScjlStatus, String);

impl From<Error> for Fail {
    fn from(err: Error) -> Self {
        Fail(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(ScjlStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> ScjlStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Fail(ScjlStatus::Panic, format!("panic: {msg}")))
    });
    match outcome {
        Ok(()) => {
            set_last_error("");
            ScjlStatus::Ok
        }
        Err(Fail(status, msg)) => {
            set_last_error(&msg);
            status
        }
    }
}

unsafe fn slice<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn deref<'a>(handle: *const ScjlMatrix) -> Result<&'a AnyMatrix, Fail> {
    handle.as_ref().map(|h| &h.inner).ok_or_else(|| null("matrix"))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn scjl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn scjl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Picks `(m, s)` for distortion `eps`, failure probability `delta` and
/// tradeoff parameter `b` in `[e, 1/delta]`.
///
/// # Safety
/// `out_m` and `out_s` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scjl_select_params(
    eps: f64,
    delta: f64,
    b: f64,
    c_s: f64,
    c_m: f64,
    out_m: *mut usize,
    out_s: *mut usize,
) -> ScjlStatus {
    guard(|| {
        if out_m.is_null() || out_s.is_null() {
            return Err(null("output pointer"));
        }
        let constants = ThetaConstants::new(c_s, c_m)?;
        let p = select_params(1, eps, delta, b, constants)?;
        put(out_m, p.m(), "out_m")?;
        put(out_s, p.s(), "out_s")
    })
}

/// Samples an `m x n` matrix with `s` nonzeros per column.
///
/// # Safety
/// `out` must be valid for writes. The handle written there is released
/// with `scjl_matrix_free`.
#[no_mangle]
pub unsafe extern "C" fn scjl_matrix_sample(
    kind: ScjlMatrixKind,
    n: usize,
    m: usize,
    s: usize,
    seed: u64,
    out: *mut *mut ScjlMatrix,
) -> ScjlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = SketchParams::new(n, m, s)?;
        let inner: AnyMatrix = match kind {
            ScjlMatrixKind::SignConsistent => sample_sign_consistent(&params, seed).into(),
            ScjlMatrixKind::SparseJl => sample_sparse_jl(&params, seed).into(),
        };
        put(out, Box::into_raw(Box::new(ScjlMatrix { inner })), "out")
    })
}

/// # Safety
/// `matrix` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn scjl_matrix_free(matrix: *mut ScjlMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// # Safety
/// `matrix` must be a live handle; each output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn scjl_matrix_dims(
    matrix: *const ScjlMatrix,
    out_n: *mut usize,
    out_m: *mut usize,
    out_s: *mut usize,
) -> ScjlStatus {
    guard(|| {
        let p = deref(matrix)?.as_sketch().params();
        for (out, v) in [(out_n, p.n()), (out_m, p.m()), (out_s, p.s())] {
            if !out.is_null() {
                out.write(v);
            }
        }
        Ok(())
    })
}

/// Writes `A x` into `y`. `x_len` must equal `n` and `y_len` must equal `m`.
///
/// # Safety
/// `x` must be readable for `x_len` values and `y` writable for `y_len`.
#[no_mangle]
pub unsafe extern "C" fn scjl_matrix_apply(
    matrix: *const ScjlMatrix,
    x: *const f64,
    x_len: usize,
    y: *mut f64,
    y_len: usize,
) -> ScjlStatus {
    guard(|| {
        let a = deref(matrix)?.as_sketch();
        let x = slice(x, x_len, "x")?;
        let m = a.params().m();
        if y_len != m {
            return Err(Error::DimensionMismatch { expected: m, found: y_len }.into());
        }
        let result = a.apply(x)?;
        if y.is_null() {
            return Err(null("y"));
        }
        std::slice::from_raw_parts_mut(y, y_len).copy_from_slice(&result);
        Ok(())
    })
}

/// `||A x||^2 - ||x||^2`.
///
/// # Safety
/// `x` must be readable for `x_len` values and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn scjl_matrix_error_z(
    matrix: *const ScjlMatrix,
    x: *const f64,
    x_len: usize,
    out: *mut f64,
) -> ScjlStatus {
    guard(|| {
        let a = deref(matrix)?;
        let z = error_z(a.as_sketch(), slice(x, x_len, "x")?)?;
        put(out, z, "out")
    })
}

/// Serializes the matrix to its JSON document. Free the string with
/// `scjl_string_free`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scjl_matrix_to_json(matrix: *const ScjlMatrix, out: *mut *mut c_char) -> ScjlStatus {
    guard(|| {
        let text = deref(matrix)?.to_json()?;
        let c = CString::new(text).map_err(|e| Fail(ScjlStatus::Parse, e.to_string()))?;
        put(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `text` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn scjl_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Parses a matrix document of either kind.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scjl_matrix_from_json(json: *const c_char, out: *mut *mut ScjlMatrix) -> ScjlStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail(ScjlStatus::Parse, format!("document is not UTF-8: {e}")))?;
        let inner = AnyMatrix::from_json(text)?;
        put(out, Box::into_raw(Box::new(ScjlMatrix { inner })), "out")
    })
}

/// Exact `||X||_q` for `X ~ Bin(n_trials, alpha)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scjl_binomial_moment(n_trials: u64, alpha: f64, q: f64, out: *mut f64) -> ScjlStatus {
    guard(|| {
        let v = binomial_moment_exact(BinomialSpec::new(n_trials, alpha)?, q)?;
        put(out, v, "out")
    })
}

/// Exact `||Q||_q` for the overlap of two uniform `s`-subsets of `[m]`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scjl_hypergeometric_moment(m: u64, s: u64, q: f64, out: *mut f64) -> ScjlStatus {
    guard(|| put(out, hypergeometric_moment_exact(m, s, q)?, "out"))
}
