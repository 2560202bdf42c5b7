//! C ABI over the phiconvex toolkit.
//!
//! Every fallible call returns a [`PhiconvexStatus`]. On failure the message
//! is available from [`phiconvex_last_error_message`] on the same thread
//! until the next call. Handles are opaque and must be released with their
//! matching `_free` function. Panics never cross the boundary; they are
//! reported as [`PhiconvexStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use phiconvex::cli::{self, RunOptions};
use phiconvex::theorems::{hh_geometric_margin, jensen_margin, quasi_integral_margin, IntegralOutcome};
use phiconvex::{
    falsify_membership, ConvexityClass, Error, Interval, JensenInstance, PhiMap, RealFunction,
    SearchBudget, Verdict,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiconvexStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Eval = 4,
    InvalidArgument = 5,
    /// The function violates the codomain the class requires.
    Codomain = 6,
    /// Too many search points failed to evaluate.
    PervasiveFailure = 7,
    Spec = 8,
    Io = 9,
    Panic = 10,
}

/// Parsed function `f` with its domain.
pub struct PhiconvexFunction(RealFunction);

/// Parsed self-map φ of an interval.
pub struct PhiconvexMap(PhiMap);

/// Search budget for membership falsification.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PhiconvexBudget {
    pub grid_per_axis: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub tol_margin: f64,
}

impl From<PhiconvexBudget> for SearchBudget {
    fn from(b: PhiconvexBudget) -> Self {
        SearchBudget {
            grid_per_axis: b.grid_per_axis,
            restarts: b.restarts,
            max_iterations: b.max_iterations,
            seed: b.seed,
            tol_margin: b.tol_margin,
        }
    }
}

/// Outcome of a membership search. When `falsified` is false, `margin` is
/// the smallest margin observed and `x`, `y`, `t` are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PhiconvexVerdict {
    pub falsified: bool,
    pub margin: f64,
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub points_tested: usize,
    pub eval_failures: usize,
}

/// Outcome of an integral inequality check.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PhiconvexIntegral {
    pub margin: f64,
    pub mean: f64,
    pub bound: f64,
    pub error_estimate: f64,
    pub degenerate: bool,
}

impl From<IntegralOutcome> for PhiconvexIntegral {
    fn from(o: IntegralOutcome) -> Self {
        PhiconvexIntegral {
            margin: o.margin,
            mean: o.mean,
            bound: o.bound,
            error_estimate: o.error_estimate(),
            degenerate: o.degenerate,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(PhiconvexStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) => PhiconvexStatus::Parse,
            Error::Eval(_) => PhiconvexStatus::Eval,
            Error::CodomainRequirement { .. } => PhiconvexStatus::Codomain,
            Error::PervasiveFailure { .. } => PhiconvexStatus::PervasiveFailure,
            Error::Spec(_) | Error::Json(_) => PhiconvexStatus::Spec,
            Error::Io(_) => PhiconvexStatus::Io,
            _ => PhiconvexStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PhiconvexStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PhiconvexStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PhiconvexStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PhiconvexStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PhiconvexStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

unsafe fn class_arg(name: *const c_char, s: f64) -> Result<ConvexityClass, Failure> {
    let name = str_arg(name, "class name")?;
    let s = if s.is_nan() { None } else { Some(s) };
    Ok(ConvexityClass::from_name(name, s)?)
}

unsafe fn slice_arg<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn phiconvex_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn phiconvex_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default search budget (41 points per axis, 8 restarts).
#[no_mangle]
pub extern "C" fn phiconvex_budget_default() -> PhiconvexBudget {
    let b = SearchBudget::default();
    PhiconvexBudget {
        grid_per_axis: b.grid_per_axis,
        restarts: b.restarts,
        max_iterations: b.max_iterations,
        seed: b.seed,
        tol_margin: b.tol_margin,
    }
}

/// Parses `expr` as a function on `[lo, hi]`.
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_function_new(
    expr: *const c_char,
    lo: f64,
    hi: f64,
    out: *mut *mut PhiconvexFunction,
) -> PhiconvexStatus {
    guard(|| {
        let text = str_arg(expr, "expr")?;
        let f = RealFunction::parse(text, Interval::new(lo, hi)?)?;
        write_out(out, Box::into_raw(Box::new(PhiconvexFunction(f))), "out")
    })
}

/// # Safety
/// `f` must come from `phiconvex_function_new`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_function_eval(
    f: *const PhiconvexFunction,
    x: f64,
    out: *mut f64,
) -> PhiconvexStatus {
    guard(|| {
        let f = ref_arg(f, "function")?;
        let v = f.0.eval(x).map_err(Error::from)?;
        write_out(out, v, "out")
    })
}

/// # Safety
/// `f` must come from `phiconvex_function_new` and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_function_free(f: *mut PhiconvexFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Parses `expr` as a self-map of `[lo, hi]`.
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_map_new(
    expr: *const c_char,
    lo: f64,
    hi: f64,
    out: *mut *mut PhiconvexMap,
) -> PhiconvexStatus {
    guard(|| {
        let text = str_arg(expr, "expr")?;
        let m = PhiMap::parse(text, Interval::new(lo, hi)?)?;
        write_out(out, Box::into_raw(Box::new(PhiconvexMap(m))), "out")
    })
}

/// # Safety
/// `phi` must come from `phiconvex_map_new`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_map_eval(
    phi: *const PhiconvexMap,
    x: f64,
    out: *mut f64,
) -> PhiconvexStatus {
    guard(|| {
        let phi = ref_arg(phi, "map")?;
        let v = phi.0.eval(x).map_err(Error::from)?;
        write_out(out, v, "out")
    })
}

/// # Safety
/// `phi` must come from `phiconvex_map_new` and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_map_free(phi: *mut PhiconvexMap) {
    if !phi.is_null() {
        drop(Box::from_raw(phi));
    }
}

/// Searches for a counterexample to membership of `f` in the class named
/// `class_name` (for example `"phi-s-convex"`). Pass NaN for `s` unless the
/// class needs it.
///
/// # Safety
/// Handles must be live; `class_name` NUL-terminated; `budget` and `out`
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_falsify(
    f: *const PhiconvexFunction,
    phi: *const PhiconvexMap,
    class_name: *const c_char,
    s: f64,
    budget: *const PhiconvexBudget,
    out: *mut PhiconvexVerdict,
) -> PhiconvexStatus {
    guard(|| {
        let f = ref_arg(f, "function")?;
        let phi = ref_arg(phi, "map")?;
        let class = class_arg(class_name, s)?;
        let budget: SearchBudget = (*ref_arg(budget, "budget")?).into();
        let v = falsify_membership(&f.0, &phi.0, &class, &budget)?;
        let verdict = match v {
            Verdict::Falsified {
                witness,
                points_tested,
                eval_failures,
            } => PhiconvexVerdict {
                falsified: true,
                margin: witness.margin,
                x: witness.x,
                y: witness.y,
                t: witness.t,
                points_tested,
                eval_failures,
            },
            Verdict::NotFalsified {
                min_margin_observed,
                points_tested,
                eval_failures,
                ..
            } => PhiconvexVerdict {
                falsified: false,
                margin: min_margin_observed,
                x: f64::NAN,
                y: f64::NAN,
                t: f64::NAN,
                points_tested,
                eval_failures,
            },
        };
        write_out(out, verdict, "out")
    })
}

/// n-point bound for the named class. Writes the margin and, when `chain`
/// is non-null, the `n` bound-chain values.
///
/// # Safety
/// `weights` and `points` must hold `n` values; `chain` null or room for
/// `n` values; `margin` writable.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_jensen_margin(
    f: *const PhiconvexFunction,
    phi: *const PhiconvexMap,
    class_name: *const c_char,
    s: f64,
    weights: *const f64,
    points: *const f64,
    n: usize,
    margin: *mut f64,
    chain: *mut f64,
) -> PhiconvexStatus {
    guard(|| {
        let f = ref_arg(f, "function")?;
        let phi = ref_arg(phi, "map")?;
        let class = class_arg(class_name, s)?;
        let inst = JensenInstance::new(
            slice_arg(weights, n, "weights")?.to_vec(),
            slice_arg(points, n, "points")?.to_vec(),
        )?;
        let out = jensen_margin(&class, &f.0, &phi.0, &inst)?;
        write_out(margin, out.margin, "margin")?;
        if !chain.is_null() {
            std::slice::from_raw_parts_mut(chain, n).copy_from_slice(&out.chain.0);
        }
        Ok(())
    })
}

/// Geometric-mean integral bound between `φ(a)` and `φ(b)`.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_hh_geometric_margin(
    f: *const PhiconvexFunction,
    phi: *const PhiconvexMap,
    a: f64,
    b: f64,
    tol: f64,
    out: *mut PhiconvexIntegral,
) -> PhiconvexStatus {
    guard(|| {
        let f = ref_arg(f, "function")?;
        let phi = ref_arg(phi, "map")?;
        let r = hh_geometric_margin(&f.0, &phi.0, a, b, tol)?;
        write_out(out, r.into(), "out")
    })
}

/// Integral mean of `f` between `φ(x)` and `φ(y)` against the larger
/// endpoint value. Requires `x < y`.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_quasi_integral_margin(
    f: *const PhiconvexFunction,
    phi: *const PhiconvexMap,
    x: f64,
    y: f64,
    tol: f64,
    out: *mut PhiconvexIntegral,
) -> PhiconvexStatus {
    guard(|| {
        let f = ref_arg(f, "function")?;
        let phi = ref_arg(phi, "map")?;
        let r = quasi_integral_margin(&f.0, &phi.0, x, y, tol)?;
        write_out(out, r.into(), "out")
    })
}

/// Runs a JSON analysis spec and returns the JSON report. The report must
/// be released with `phiconvex_string_free`. `exit_code` receives the
/// command-line exit code the run would produce (0, 1 or 2).
///
/// # Safety
/// `spec_json` NUL-terminated; `report` and `exit_code` writable.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_run_spec_json(
    spec_json: *const c_char,
    has_seed: bool,
    seed: u64,
    parallel: bool,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> PhiconvexStatus {
    guard(|| {
        let text = str_arg(spec_json, "spec")?;
        if report.is_null() {
            return Err(null("report"));
        }
        let options = RunOptions {
            seed: has_seed.then_some(seed),
            parallel,
        };
        let r = cli::run_text(text, &options)?;
        let json = CString::new(r.to_json()?)
            .map_err(|_| Failure(PhiconvexStatus::Spec, "report contains NUL".into()))?;
        write_out(exit_code, r.exit_code, "exit_code")?;
        report.write(json.into_raw());
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn phiconvex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        let cases = [
            (Error::Spec("x".into()), PhiconvexStatus::Spec),
            (Error::PervasiveFailure { failures: 2, total: 3 }, PhiconvexStatus::PervasiveFailure),
            (Error::WeightSum { sum: 0.5 }, PhiconvexStatus::InvalidArgument),
            (Error::UnknownClass("c".into()), PhiconvexStatus::InvalidArgument),
        ];
        for (e, want) in cases {
            assert_eq!(Failure::from(e).0, want);
        }
    }

    #[test]
    fn panic_is_contained() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, PhiconvexStatus::Panic);
        assert!(!phiconvex_last_error_message().is_null());
    }

    #[test]
    fn success_clears_message() {
        guard(|| Err(null("thing")));
        assert!(!phiconvex_last_error_message().is_null());
        guard(|| Ok(()));
        assert!(phiconvex_last_error_message().is_null());
    }
}
