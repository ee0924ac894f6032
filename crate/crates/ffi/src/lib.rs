//! C ABI over `ramify`.
//!
//! Every function returns a [`RamifyStatus`]; on failure a message is kept per
//! thread and can be fetched with [`ramify_last_error`]. Strings handed out by
//! the library are owned by the caller and released with
//! [`ramify_string_free`]. Polynomials are opaque [`RamifyPoly`] handles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ramify::blowup::{simulate, SimConfig};
use ramify::cli::{parse_poly, run_report, InputSpec};
use ramify::euler::{euler_delta, SurfaceConfig};
use ramify::gf::FieldCtx;
use ramify::laurent::LaurentPoly;
use ramify::polygon::{self, PointType, StairSeq};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RamifyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    Field = 5,
    Computation = 6,
    Panic = 7,
}

/// `t` arguments: one boundary branch through the point.
pub const RAMIFY_TYPE_I: i32 = 1;
/// `t` arguments: two boundary branches through the point.
pub const RAMIFY_TYPE_II: i32 = 2;

/// A Laurent polynomial over a finite field.
pub struct RamifyPoly {
    inner: LaurentPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(RamifyStatus, String);

impl Failure {
    fn new(status: RamifyStatus, msg: impl ToString) -> Self {
        Failure(status, msg.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RamifyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RamifyStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RamifyStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(RamifyStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::new(RamifyStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::new(RamifyStatus::NullPointer, format!("{name} is null")))
}

fn point_type(t: i32) -> Result<PointType, Failure> {
    match t {
        RAMIFY_TYPE_I => Ok(PointType::One),
        RAMIFY_TYPE_II => Ok(PointType::Two),
        _ => Err(Failure::new(RamifyStatus::InvalidArgument, format!("point type must be 1 or 2, got {t}"))),
    }
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

unsafe fn staircase(pairs: *const i64, n_points: usize) -> Result<StairSeq, Failure> {
    if n_points == 0 {
        return Ok(StairSeq::empty());
    }
    if pairs.is_null() {
        return Err(Failure::new(RamifyStatus::NullPointer, "pairs is null"));
    }
    let flat = std::slice::from_raw_parts(pairs, 2 * n_points);
    let pts: Vec<(i64, i64)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    StairSeq::from_pairs(&pts).map_err(|e| Failure::new(RamifyStatus::InvalidArgument, e))
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn ramify_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ramify_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `expr` (e.g. `"t1^-2*t2"`) over the field `"p"` or `"p^k"`.
///
/// # Safety
/// `field` and `expr` must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ramify_poly_parse(
    field: *const c_char,
    expr: *const c_char,
    out: *mut *mut RamifyPoly,
) -> RamifyStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let ctx = FieldCtx::parse(str_arg(field, "field")?).map_err(|e| Failure::new(RamifyStatus::Field, e))?;
        let inner = parse_poly(str_arg(expr, "expr")?, &ctx).map_err(|e| Failure::new(RamifyStatus::Parse, e))?;
        *out = Box::into_raw(Box::new(RamifyPoly { inner }));
        Ok(())
    })
}

/// # Safety
/// `poly` must come from [`ramify_poly_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ramify_poly_free(poly: *mut RamifyPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// The polynomial in the input grammar; free with [`ramify_string_free`].
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ramify_poly_to_string(poly: *const RamifyPoly, out: *mut *mut c_char) -> RamifyStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let poly = poly.as_ref().ok_or_else(|| Failure::new(RamifyStatus::NullPointer, "poly is null"))?;
        *out = owned_string(poly.inner.to_string());
        Ok(())
    })
}

/// Full report as JSON, including verdicts. `seed` drives the perturbation
/// rerun. Verdict failures are data, not errors: the status is still `Ok`.
///
/// # Safety
/// String arguments must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ramify_report_json(
    field: *const c_char,
    expr: *const c_char,
    t: i32,
    seed: u64,
    out: *mut *mut c_char,
) -> RamifyStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let spec = InputSpec {
            field: str_arg(field, "field")?.to_string(),
            t: point_type(t)?,
            expr: str_arg(expr, "expr")?.to_string(),
            sim: SimConfig::default(),
            seed,
        };
        let report = run_report(&spec).map_err(|e| Failure::new(RamifyStatus::Computation, e))?;
        *out = owned_string(report.to_json().to_string());
        Ok(())
    })
}

/// Blow-up simulation with default settings; writes `r_x` and, when
/// `tree_json` is non-null, the tree as JSON.
///
/// # Safety
/// `poly` must be a live handle; `r_x` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ramify_simulate(
    poly: *const RamifyPoly,
    t: i32,
    r_x: *mut u64,
    tree_json: *mut *mut c_char,
) -> RamifyStatus {
    guard(|| {
        let r_x = out_arg(r_x, "r_x")?;
        let poly = poly.as_ref().ok_or_else(|| Failure::new(RamifyStatus::NullPointer, "poly is null"))?;
        let result =
            simulate(&poly.inner, point_type(t)?, &SimConfig::default()).map_err(|e| Failure::new(RamifyStatus::Computation, e))?;
        *r_x = result.r_x;
        if let Some(tree) = tree_json.as_mut() {
            *tree = owned_string(result.to_json().to_string());
        }
        Ok(())
    })
}

/// The recursive invariant `r'` of a staircase given as `n_points` pairs
/// `(a, b)` laid out flat in `pairs`.
///
/// # Safety
/// `pairs` must hold `2 * n_points` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ramify_r_prime(pairs: *const i64, n_points: usize, t: i32, out: *mut u64) -> RamifyStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let seq = staircase(pairs, n_points)?;
        let t = point_type(t)?;
        *out = if seq.is_empty() {
            0
        } else {
            polygon::r_prime(&seq, t).map_err(|e| Failure::new(RamifyStatus::Computation, e))?.total
        };
        Ok(())
    })
}

/// Closed form of `r'`.
///
/// # Safety
/// As for [`ramify_r_prime`].
#[no_mangle]
pub unsafe extern "C" fn ramify_r_prime_closed(pairs: *const i64, n_points: usize, t: i32, out: *mut i64) -> RamifyStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let seq = staircase(pairs, n_points)?;
        *out = polygon::r_prime_closed(&seq, point_type(t)?);
        Ok(())
    })
}

/// Upper bound for `r_x` from the staircase.
///
/// # Safety
/// As for [`ramify_r_prime`].
#[no_mangle]
pub unsafe extern "C" fn ramify_kato_bound(pairs: *const i64, n_points: usize, t: i32, out: *mut i64) -> RamifyStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let seq = staircase(pairs, n_points)?;
        *out = polygon::kato_bound(&seq, point_type(t)?);
        Ok(())
    })
}

/// Twice the area between the staircase's polyline and the horizontal line
/// through its first vertex.
///
/// # Safety
/// As for [`ramify_r_prime`].
#[no_mangle]
pub unsafe extern "C" fn ramify_area(pairs: *const i64, n_points: usize, out: *mut i64) -> RamifyStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = polygon::area(&staircase(pairs, n_points)?);
        Ok(())
    })
}

/// Euler characteristic delta from a JSON surface config
/// `{components: [{name, sw}], intersections, klog, r_sum}`; writes the report
/// as JSON.
///
/// # Safety
/// `config_json` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ramify_euler_delta_json(config_json: *const c_char, out: *mut *mut c_char) -> RamifyStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let cfg: SurfaceConfig = serde_json::from_str(str_arg(config_json, "config_json")?)
            .map_err(|e| Failure::new(RamifyStatus::Parse, e))?;
        let report = euler_delta(&cfg).map_err(|e| Failure::new(RamifyStatus::InvalidArgument, e))?;
        *out = owned_string(serde_json::to_string(&report).expect("serializable"));
        Ok(())
    })
}
