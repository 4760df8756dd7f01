//! C ABI over `ratiolab`.
//!
//! Conventions:
//! - every fallible call returns a [`RatiolabStatus`] and writes results
//!   through out-pointers;
//! - on failure, [`ratiolab_last_error`] describes the most recent error
//!   on the calling thread;
//! - strings handed out by the library are freed with
//!   [`ratiolab_string_free`], instances with [`ratiolab_instance_free`];
//! - exact values cross the boundary as `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ratiolab::game::{self, Algorithm, GameConfig};
use ratiolab::optimize::brute_force_min_ratio;
use ratiolab::oracle::{Bundled, InstanceDescriptor, RatioOracle, ResolvedInstance, SetFunction};
use ratiolab::setcore::SubsetSpec;
use ratiolab::verify::{verify_function, Direction};
use ratiolab::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatiolabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidInstance = 3,
    GuardExceeded = 4,
    UndefinedRatio = 5,
    NoConsistentPlant = 6,
    Panic = 99,
}

/// Which function of an instance to evaluate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatiolabFunction {
    /// Numerator `f`.
    F = 0,
    /// Unplanted denominator (increasing family only).
    G = 1,
    /// Planted denominator `g_R`.
    GPlanted = 2,
}

/// Query-budgeted algorithm for [`ratiolab_game`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatiolabAlgorithm {
    LocalSearch = 0,
    RandomSearch = 1,
}

/// Opaque instance handle.
pub struct RatiolabInstance {
    inner: ResolvedInstance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(RatiolabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::GuardExceeded { .. } => RatiolabStatus::GuardExceeded,
            Error::UndefinedRatio(_) => RatiolabStatus::UndefinedRatio,
            Error::NoConsistentPlant { .. } => RatiolabStatus::NoConsistentPlant,
            Error::InfeasibleParams { .. } | Error::Config(_) => RatiolabStatus::InvalidInstance,
            Error::Parameter(_) | Error::Parse(_) => RatiolabStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RatiolabStatus::NullPointer, format!("{what} is null"))
}

fn guarded<F: FnOnce() -> Result<(), Failure>>(body: F) -> RatiolabStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RatiolabStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            RatiolabStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RatiolabStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn instance<'a>(p: *const RatiolabInstance) -> Result<&'a ResolvedInstance, Failure> {
    p.as_ref().map(|i| &i.inner).ok_or_else(|| null("instance"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(RatiolabStatus::Panic, "interior nul".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn select(inst: &ResolvedInstance, which: RatiolabFunction) -> Result<Bundled, Failure> {
    Ok(match (inst, which) {
        (ResolvedInstance::Decreasing(d), RatiolabFunction::F) => d.f(),
        (ResolvedInstance::Decreasing(d), RatiolabFunction::GPlanted) => d.g_planted()?,
        (ResolvedInstance::Decreasing(_), RatiolabFunction::G) => {
            return Err(Failure(
                RatiolabStatus::InvalidArgument,
                "the decreasing family has no unplanted denominator".into(),
            ))
        }
        (ResolvedInstance::Increasing(i), RatiolabFunction::F) => i.f(),
        (ResolvedInstance::Increasing(i), RatiolabFunction::G) => i.g(),
        (ResolvedInstance::Increasing(i), RatiolabFunction::GPlanted) => i.g_planted()?,
    })
}

/// The denominator paired with `f`: planted when a plant is present.
fn denominator(inst: &ResolvedInstance) -> Result<Bundled, Failure> {
    match inst {
        ResolvedInstance::Increasing(i) if i.plant().is_none() => Ok(i.g()),
        _ => select(inst, RatiolabFunction::GPlanted),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ratiolab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Last error message on this thread, or NULL. Valid until the next call
/// into the library from the same thread.
#[no_mangle]
pub extern "C" fn ratiolab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ratiolab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds an instance from a JSON descriptor.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ratiolab_instance_from_json(
    json: *const c_char,
    out: *mut *mut RatiolabInstance,
) -> RatiolabStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let inner = InstanceDescriptor::from_json(text)
            .and_then(|d| d.resolve())
            .map_err(|e| {
                let Failure(status, msg) = Failure::from(e);
                let status = match status {
                    RatiolabStatus::InvalidArgument => RatiolabStatus::InvalidInstance,
                    s => s,
                };
                Failure(status, msg)
            })?;
        *out = Box::into_raw(Box::new(RatiolabInstance { inner }));
        Ok(())
    })
}

/// Releases an instance. NULL is ignored.
///
/// # Safety
/// `inst` must come from [`ratiolab_instance_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ratiolab_instance_free(inst: *mut RatiolabInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Ground-set size of an instance.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ratiolab_instance_n(
    inst: *const RatiolabInstance,
    out: *mut usize,
) -> RatiolabStatus {
    guarded(|| {
        let inst = instance(inst)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = inst.n().get();
        Ok(())
    })
}

unsafe fn bind_indices(
    inst: &ResolvedInstance,
    indices: *const usize,
    len: usize,
) -> Result<ratiolab::Subset, Failure> {
    let idx = if len == 0 {
        Vec::new()
    } else if indices.is_null() {
        return Err(null("indices"));
    } else {
        std::slice::from_raw_parts(indices, len).to_vec()
    };
    Ok(SubsetSpec(idx).bind(inst.n())?)
}

/// Evaluates one function at the set given by `indices[0..len]`; writes a
/// `"p/q"` string to `out`.
///
/// # Safety
/// `inst` must be live, `indices` valid for `len` reads (may be NULL when
/// `len` is 0), `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ratiolab_eval(
    inst: *const RatiolabInstance,
    which: RatiolabFunction,
    indices: *const usize,
    len: usize,
    out: *mut *mut c_char,
) -> RatiolabStatus {
    guarded(|| {
        let inst = instance(inst)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = bind_indices(inst, indices, len)?;
        let func = select(inst, which)?;
        write_string(out, func.value(s).to_string())
    })
}

/// `f(S)/g(S)` with the planted denominator when the instance has a plant.
///
/// # Safety
/// As for [`ratiolab_eval`].
#[no_mangle]
pub unsafe extern "C" fn ratiolab_ratio(
    inst: *const RatiolabInstance,
    indices: *const usize,
    len: usize,
    out: *mut *mut c_char,
) -> RatiolabStatus {
    guarded(|| {
        let inst = instance(inst)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = bind_indices(inst, indices, len)?;
        let (f, g) = (select(inst, RatiolabFunction::F)?, denominator(inst)?);
        let mut oracle = RatioOracle::new(&f, &g)?;
        write_string(out, oracle.ratio(s)?.to_string())
    })
}

/// Exhaustive structural check of one function: supermodularity,
/// monotonicity in the family's direction and nonnegativity. Writes the
/// total violation count.
///
/// # Safety
/// `inst` must be live; `violations` writable.
#[no_mangle]
pub unsafe extern "C" fn ratiolab_verify(
    inst: *const RatiolabInstance,
    which: RatiolabFunction,
    violations: *mut usize,
) -> RatiolabStatus {
    guarded(|| {
        let inst = instance(inst)?;
        if violations.is_null() {
            return Err(null("violations"));
        }
        let func = select(inst, which)?;
        let direction = match inst {
            ResolvedInstance::Decreasing(_) => Direction::Nonincreasing,
            ResolvedInstance::Increasing(_) => Direction::Nondecreasing,
        };
        let report = verify_function(func.label(), &func, Some(direction))?;
        *violations = report.violation_count();
        Ok(())
    })
}

/// Exhaustive minimum of `f/g`; writes a JSON object with `argset`,
/// `value`, `queries_used`, `method` and `sense`.
///
/// # Safety
/// `inst` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ratiolab_solve_brute(
    inst: *const RatiolabInstance,
    out: *mut *mut c_char,
) -> RatiolabStatus {
    guarded(|| {
        let inst = instance(inst)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (f, g) = (select(inst, RatiolabFunction::F)?, denominator(inst)?);
        let result = brute_force_min_ratio(&mut RatioOracle::new(&f, &g)?)?;
        write_string(out, serde_json::to_string(&result).expect("result serializes"))
    })
}

/// Runs the planted-instance game on an unplanted instance; writes a JSON
/// object `{"summary": .., "trials": [..]}`.
///
/// # Safety
/// `inst` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ratiolab_game(
    inst: *const RatiolabInstance,
    algorithm: RatiolabAlgorithm,
    budget: u64,
    trials: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> RatiolabStatus {
    guarded(|| {
        let inst = instance(inst)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = GameConfig {
            algorithm: match algorithm {
                RatiolabAlgorithm::LocalSearch => Algorithm::LocalSearch,
                RatiolabAlgorithm::RandomSearch => Algorithm::RandomSearch,
            },
            budget,
            trials,
            seed,
        };
        let (reports, guaranteed) = match inst {
            ResolvedInstance::Decreasing(d) => (
                game::run_game_decreasing(d, &cfg)?,
                d.planted_optimum().recip().expect("planted optimum is positive"),
            ),
            ResolvedInstance::Increasing(i) => (game::run_game_increasing(i, &cfg)?, i.gap_bound()),
        };
        let summary = game::summarize(&reports, &cfg, guaranteed)?;
        let json = serde_json::json!({ "summary": summary, "trials": reports });
        write_string(out, json.to_string())
    })
}

/// Exact probability that a fixed `s`-set separates `f` from `g_R` for a
/// uniform `α`-subset `R` of `n` elements; writes `"p/q"`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ratiolab_distinguish_probability(
    n: usize,
    alpha: usize,
    beta: usize,
    s: usize,
    out: *mut *mut c_char,
) -> RatiolabStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = game::distinguish_probability(n, alpha, beta, s)?;
        write_string(out, p.to_string())
    })
}
