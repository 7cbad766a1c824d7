//! C ABI for `grass-slice`.
//!
//! Every function returns a [`GsStatus`]; results come back through out
//! pointers. Objects are opaque handles released with their `_free`
//! function, and strings returned by the library are released with
//! [`gs_string_free`]. After a failure, [`gs_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use grass_slice::combinatorics::{kostka, Composition, Partition};
use grass_slice::dictionary::{backward, backward_with_weight, forward, DictionaryRecord, QuiverData};
use grass_slice::flags::{fiber_count_at, fit_count_polynomial, CountPolynomial};
use grass_slice::grassmannian::decomposition_check;
use grass_slice::linalg::{ExactMatrix, FieldSpec, MatrixJson, PrimeField, Rationals};
use grass_slice::quiver::{phi, QuiverPointJson};
use grass_slice::slice::count_slice_points;
use grass_slice::{Error, Field};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    DominanceViolation = 4,
    EmptyVariety = 5,
    NotNilpotent = 6,
    NotInLambda = 7,
    Overflow = 8,
    Internal = 9,
}

pub struct GsPartition(Partition);

pub struct GsRecord(DictionaryRecord);

pub struct GsMatrix(ExactMatrix);

pub struct GsPolynomial(CountPolynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> GsStatus {
    match e {
        Error::BudgetExceeded { .. } => GsStatus::BudgetExceeded,
        Error::DominanceViolation { .. } => GsStatus::DominanceViolation,
        Error::EmptyVariety { .. } => GsStatus::EmptyVariety,
        Error::NotNilpotent => GsStatus::NotNilpotent,
        Error::NotInLambda => GsStatus::NotInLambda,
        Error::Overflow => GsStatus::Overflow,
        _ => GsStatus::InvalidInput,
    }
}

struct Fail(GsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(GsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, turning errors and panics into a status and the last error.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> GsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GsStatus::Internal
        }
    }
}

unsafe fn slice_arg<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(|| null(what))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(GsStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output string"));
    }
    let c = CString::new(s).map_err(|_| Fail(GsStatus::Internal, "string with NUL".into()))?;
    out.write(c.into_raw());
    Ok(())
}

fn to_u64(x: u128) -> Result<u64, Fail> {
    u64::try_from(x).map_err(|_| Fail(GsStatus::Overflow, format!("{x} does not fit in 64 bits")))
}

/// Message for the last failed call on this thread, or null. Free with
/// [`gs_string_free`].
#[no_mangle]
pub extern "C" fn gs_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn gs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Partition from `len` parts in weakly decreasing order.
///
/// # Safety
/// `parts` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_partition_new(parts: *const usize, len: usize, out: *mut *mut GsPartition) -> GsStatus {
    guard(|| {
        let p = Partition::new(slice_arg(parts, len, "parts")?.to_vec())?;
        put_box(out, GsPartition(p))
    })
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gs_partition_free(p: *mut GsPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of parts, counting trailing zeros.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_partition_len(p: *const GsPartition, out: *mut usize) -> GsStatus {
    guard(|| put(out, handle(p, "partition")?.0.parts().len(), "out"))
}

/// Copies the parts into `buf`, which holds `cap` values.
///
/// # Safety
/// `p` must be a live handle; `buf` must hold `cap` writable values.
#[no_mangle]
pub unsafe extern "C" fn gs_partition_parts(p: *const GsPartition, buf: *mut usize, cap: usize) -> GsStatus {
    guard(|| {
        let parts = handle(p, "partition")?.0.parts();
        if parts.len() > cap {
            return Err(Fail(GsStatus::InvalidInput, format!("buffer holds {cap}, need {}", parts.len())));
        }
        if !parts.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(parts.as_ptr(), buf, parts.len());
        }
        Ok(())
    })
}

/// Number of semistandard tableaux of `shape` with the given content.
///
/// # Safety
/// `shape` must be a live handle; `content` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn gs_kostka(shape: *const GsPartition, content: *const usize, len: usize, out: *mut u64) -> GsStatus {
    guard(|| {
        let shape = &handle(shape, "shape")?.0;
        let content = Composition::new(slice_arg(content, len, "content")?.to_vec());
        put(out, to_u64(kostka(shape, &content)?)?, "out")
    })
}

/// Dictionary record of `(v, d)`; the shorter vector is padded with zeros.
///
/// # Safety
/// `v` and `d` must point to `vlen` and `dlen` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_dict_forward(
    v: *const usize,
    vlen: usize,
    d: *const usize,
    dlen: usize,
    out: *mut *mut GsRecord,
) -> GsStatus {
    guard(|| {
        let data = QuiverData::from_vectors(slice_arg(v, vlen, "v")?, slice_arg(d, dlen, "d")?)?;
        put_box(out, GsRecord(forward(&data)?))
    })
}

/// Dictionary record of `(lambda, mu)`, with the weight sorted.
///
/// # Safety
/// `lambda` and `mu` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_dict_backward(
    lambda: *const GsPartition,
    mu: *const GsPartition,
    out: *mut *mut GsRecord,
) -> GsStatus {
    guard(|| {
        let (_, rec) = backward(&handle(lambda, "lambda")?.0, &handle(mu, "mu")?.0)?;
        put_box(out, GsRecord(rec))
    })
}

/// Dictionary record of `lambda` with the weight `a` taken as given.
///
/// # Safety
/// `lambda` must be a live handle; `a` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn gs_dict_backward_weight(
    lambda: *const GsPartition,
    a: *const usize,
    len: usize,
    out: *mut *mut GsRecord,
) -> GsStatus {
    guard(|| {
        let weight = Composition::new(slice_arg(a, len, "a")?.to_vec());
        let (_, rec) = backward_with_weight(&handle(lambda, "lambda")?.0, &weight)?;
        put_box(out, GsRecord(rec))
    })
}

/// # Safety
/// `r` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gs_record_free(r: *mut GsRecord) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_record_lambda(r: *const GsRecord, out: *mut *mut GsPartition) -> GsStatus {
    guard(|| put_box(out, GsPartition(handle(r, "record")?.0.lambda())))
}

/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_record_mu(r: *const GsRecord, out: *mut *mut GsPartition) -> GsStatus {
    guard(|| put_box(out, GsPartition(handle(r, "record")?.0.mu())))
}

/// The record as a JSON object.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_record_to_json(r: *const GsRecord, out: *mut *mut c_char) -> GsStatus {
    guard(|| {
        let mut value = serde_json::to_value(&handle(r, "record")?.0).map_err(|e| Fail(GsStatus::Internal, e.to_string()))?;
        value["schema"] = serde_json::Value::from(grass_slice::SCHEMA);
        put_string(out, value.to_string())
    })
}

/// Matrix from `{"field": "Q" | "F<p>", "matrix": [[...], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_matrix_from_json(json: *const c_char, out: *mut *mut GsMatrix) -> GsStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let mj: MatrixJson =
            serde_json::from_str(text).map_err(|e| Fail(GsStatus::InvalidInput, format!("matrix: {e}")))?;
        put_box(out, GsMatrix(ExactMatrix::from_json(&mj)?))
    })
}

/// # Safety
/// `m` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gs_matrix_free(m: *mut GsMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Jordan type of a nilpotent matrix.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_matrix_jordan_type(m: *const GsMatrix, out: *mut *mut GsPartition) -> GsStatus {
    guard(|| put_box(out, GsPartition(handle(m, "matrix")?.0.jordan_type()?)))
}

/// `phi` of a point given as JSON; writes `{"matrix", "jordan_type", ...}`.
///
/// # Safety
/// `point_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_phi_json(point_json: *const c_char, out: *mut *mut c_char) -> GsStatus {
    fn run<F: Field>(pj: &QuiverPointJson, field: &F) -> Result<String, Fail> {
        let pt = pj.to_point(field)?;
        let rec = forward(&pt.data)?;
        let m = phi(&pt, &rec)?;
        let rows: Vec<Vec<String>> =
            (0..m.rows()).map(|r| (0..m.cols()).map(|c| field.render(m.get(r, c))).collect()).collect();
        Ok(serde_json::json!({
            "schema": grass_slice::SCHEMA,
            "field": field.spec(),
            "lambda": rec.lambda,
            "mu": rec.mu,
            "matrix": rows,
            "jordan_type": m.jordan_type()?.parts(),
        })
        .to_string())
    }
    guard(|| {
        let text = str_arg(point_json, "point_json")?;
        let pj: QuiverPointJson =
            serde_json::from_str(text).map_err(|e| Fail(GsStatus::InvalidInput, format!("point: {e}")))?;
        let s = match pj.field {
            FieldSpec::Rationals => run(&pj, &Rationals)?,
            FieldSpec::Prime(p) => run(&pj, &PrimeField::new(p)?)?,
        };
        put_string(out, s)
    })
}

/// `F_q`-points of the slice at `x_lambda` inside the closure of `O_mu`.
///
/// # Safety
/// `lambda` and `mu` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_slice_count(
    lambda: *const GsPartition,
    mu: *const GsPartition,
    q: u64,
    budget: u64,
    out: *mut u64,
) -> GsStatus {
    guard(|| {
        let n = count_slice_points(&handle(lambda, "lambda")?.0, &handle(mu, "mu")?.0, q, u128::from(budget))?;
        put(out, to_u64(n)?, "out")
    })
}

/// Stratification count of `closure(G_mu)` over `F_q`. Writes whether it
/// balances and the full report as JSON (`out_json` may be null).
///
/// # Safety
/// `mu` must be a live handle; `holds` must be writable; `out_json` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn gs_decompose(
    mu: *const GsPartition,
    m: usize,
    q: u64,
    budget: u64,
    holds: *mut bool,
    out_json: *mut *mut c_char,
) -> GsStatus {
    guard(|| {
        let r = decomposition_check(&handle(mu, "mu")?.0, m, q, u128::from(budget))?;
        put(holds, r.holds, "holds")?;
        if !out_json.is_null() {
            let text = serde_json::to_string(&r).map_err(|e| Fail(GsStatus::Internal, e.to_string()))?;
            put_string(out_json, text)?;
        }
        Ok(())
    })
}

/// `F_q`-points of the fiber over `x_lambda` of flags of type `a`.
///
/// # Safety
/// `lambda` must be a live handle; `a` must point to `len` values; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_fiber_count(
    lambda: *const GsPartition,
    a: *const usize,
    len: usize,
    q: u64,
    budget: u64,
    out: *mut u64,
) -> GsStatus {
    guard(|| {
        let weight = Composition::new(slice_arg(a, len, "a")?.to_vec());
        let n = fiber_count_at(&handle(lambda, "lambda")?.0, &weight, q, u128::from(budget))?;
        put(out, to_u64(n)?, "out")
    })
}

/// Polynomial through the fiber counts at `primes`, checked at the primes
/// beyond its degree.
///
/// # Safety
/// `lambda` must be a live handle; `a` and `primes` must point to `len` and
/// `nprimes` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_fiber_fit(
    lambda: *const GsPartition,
    a: *const usize,
    len: usize,
    primes: *const u64,
    nprimes: usize,
    out: *mut *mut GsPolynomial,
) -> GsStatus {
    guard(|| {
        let weight = Composition::new(slice_arg(a, len, "a")?.to_vec());
        let primes = slice_arg(primes, nprimes, "primes")?;
        put_box(out, GsPolynomial(fit_count_polynomial(&handle(lambda, "lambda")?.0, &weight, primes)?))
    })
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gs_polynomial_free(p: *mut GsPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_polynomial_degree(p: *const GsPolynomial, out: *mut usize) -> GsStatus {
    guard(|| put(out, handle(p, "polynomial")?.0.degree(), "out"))
}

/// Coefficient of `q^power` (zero above the degree).
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_polynomial_coefficient(p: *const GsPolynomial, power: usize, out: *mut i64) -> GsStatus {
    guard(|| {
        let c = handle(p, "polynomial")?.0.coefficients.get(power).copied().unwrap_or(0);
        let c = i64::try_from(c).map_err(|_| Fail(GsStatus::Overflow, format!("{c} does not fit in 64 bits")))?;
        put(out, c, "out")
    })
}

/// The polynomial as text, e.g. `2q + 1`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_polynomial_to_string(p: *const GsPolynomial, out: *mut *mut c_char) -> GsStatus {
    guard(|| put_string(out, handle(p, "polynomial")?.0.to_string()))
}
