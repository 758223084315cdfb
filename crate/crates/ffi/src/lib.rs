//! C ABI for `bivnorm`.
//!
//! Scalar functions return values directly or write through an out-pointer
//! and return a [`BivnormStatus`]. Profiling goes through two opaque handles,
//! [`BivnormProfileConfig`] and [`BivnormProfile`], each released by its own
//! `_free` function. After a non-OK status, [`bivnorm_last_error_message`]
//! describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use bivnorm::harness::{self, BucketStats, ProfileConfig, RhoFormula};
use bivnorm::Error;

/// Result code of every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BivnormStatus {
    Ok = 0,
    /// Correlation outside `[-1, 1]`.
    Domain = 1,
    NullPointer = 2,
    InvalidArgument = 3,
    /// The oracle could not certify its accuracy target.
    Accuracy = 4,
    Io = 5,
    OutOfRange = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// `rho = 2 Phi(r) - 1`
pub const BIVNORM_RHO_CORRECTED: c_int = 0;
/// `rho = 2 Phi(r) - 0.5`
pub const BIVNORM_RHO_PAPER: c_int = 1;

/// Opaque profiling configuration.
pub struct BivnormProfileConfig {
    inner: ProfileConfig,
}

/// Opaque profiling result.
pub struct BivnormProfile {
    buckets: Vec<BucketStats>,
}

/// One bucket of a profile.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BivnormBucketStats {
    pub n: u64,
    pub x_center: f64,
    pub q99_abs_err: f64,
    pub max_abs_err: f64,
    pub max_x: f64,
    pub max_y: f64,
    pub max_rho: f64,
    pub evaluated: u64,
}

impl From<&BucketStats> for BivnormBucketStats {
    fn from(s: &BucketStats) -> Self {
        Self {
            n: s.n as u64,
            x_center: s.x_center,
            q99_abs_err: s.q99_abs_err,
            max_abs_err: s.max_abs_err,
            max_x: s.max_err_input.x,
            max_y: s.max_err_input.y,
            max_rho: s.max_err_input.rho,
            evaluated: s.evaluated as u64,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> BivnormStatus {
    match err {
        Error::Domain(_) => BivnormStatus::Domain,
        Error::Accuracy { .. } | Error::Profile { .. } => BivnormStatus::Accuracy,
        Error::Io { .. } => BivnormStatus::Io,
        Error::InvalidArgument(_) | Error::EmptyProfile | Error::Parse { .. } => {
            BivnormStatus::InvalidArgument
        }
    }
}

fn fail(err: Error) -> BivnormStatus {
    let status = status_of(&err);
    set_last_error(err.to_string());
    status
}

fn null(what: &str) -> BivnormStatus {
    set_last_error(format!("{what} is NULL"));
    BivnormStatus::NullPointer
}

/// Runs `f`, turning a panic into [`BivnormStatus::Panic`].
fn guarded(f: impl FnOnce() -> BivnormStatus) -> BivnormStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_last_error("panic inside bivnorm");
        BivnormStatus::Panic
    })
}

/// Static description of a status code. Never NULL.
#[no_mangle]
pub extern "C" fn bivnorm_status_string(status: c_int) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"correlation outside [-1, 1]",
        2 => c"null pointer argument",
        3 => c"invalid argument",
        4 => c"accuracy target not reached",
        5 => c"i/o error",
        6 => c"index out of range",
        7 => c"internal panic",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Message for the last failure on this thread, or NULL if there was none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bivnorm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

#[no_mangle]
pub extern "C" fn bivnorm_density(x: f64) -> f64 {
    bivnorm::density(x)
}

#[no_mangle]
pub extern "C" fn bivnorm_cdf(x: f64) -> f64 {
    bivnorm::cdf(x)
}

/// `Phi2(x, x; 1 - a)` for `x <= 0`, `0 <= a <= 1` with caller-supplied
/// `px = Phi(x)` and `pxs = Phi(lambda x)`.
#[no_mangle]
pub extern "C" fn bivnorm_phi2_diagonal(x: f64, a: f64, px: f64, pxs: f64) -> f64 {
    bivnorm::phi2_diagonal(bivnorm::DiagonalInput { x, a, px, pxs })
}

/// `Phi2(x, y; rho)` written to `*out`.
///
/// # Safety
/// `out` must be NULL or valid for a write of one `double`.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_phi2(x: f64, y: f64, rho: f64, out: *mut f64) -> BivnormStatus {
    if out.is_null() {
        return null("out");
    }
    guarded(|| match bivnorm::phi2(x, y, rho) {
        Ok(v) => {
            // SAFETY: checked non-null above; validity is the caller's contract.
            unsafe { out.write(v) };
            BivnormStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// `Phi2(x, x; rho)` for any `x` and `rho` in `[-1, 1]`, written to `*out`.
///
/// # Safety
/// `out` must be NULL or valid for a write of one `double`.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_phi2_on_diagonal(
    x: f64,
    rho: f64,
    out: *mut f64,
) -> BivnormStatus {
    if out.is_null() {
        return null("out");
    }
    guarded(|| match bivnorm::phi2_on_diagonal(x, rho) {
        Ok(v) => {
            // SAFETY: checked non-null above.
            unsafe { out.write(v) };
            BivnormStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Oracle value as the unevaluated sum `*hi + *lo`.
///
/// # Safety
/// `hi` and `lo` must be NULL or each valid for a write of one `double`.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_oracle(
    x: f64,
    y: f64,
    rho: f64,
    hi: *mut f64,
    lo: *mut f64,
) -> BivnormStatus {
    if hi.is_null() {
        return null("hi");
    }
    if lo.is_null() {
        return null("lo");
    }
    guarded(|| match bivnorm::oracle::oracle_value(x, y, rho) {
        Ok(v) => {
            // SAFETY: both checked non-null above.
            unsafe {
                hi.write(v.hi);
                lo.write(v.lo);
            }
            BivnormStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// New configuration with the defaults (201 buckets, 10^4 samples, seed 42).
/// Release with [`bivnorm_profile_config_free`].
#[no_mangle]
pub extern "C" fn bivnorm_profile_config_new() -> *mut BivnormProfileConfig {
    Box::into_raw(Box::new(BivnormProfileConfig {
        inner: ProfileConfig::default(),
    }))
}

/// # Safety
/// `config` must be NULL or a handle from [`bivnorm_profile_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_config_free(config: *mut BivnormProfileConfig) {
    if !config.is_null() {
        // SAFETY: the handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(config) });
    }
}

/// # Safety
/// `config` must be NULL or a live configuration handle.
unsafe fn with_config(
    config: *mut BivnormProfileConfig,
    f: impl FnOnce(&mut ProfileConfig) -> BivnormStatus,
) -> BivnormStatus {
    // SAFETY: forwarded from the caller.
    match unsafe { config.as_mut() } {
        Some(c) => f(&mut c.inner),
        None => null("config"),
    }
}

/// # Safety
/// `config` must be NULL or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_config_set_buckets(
    config: *mut BivnormProfileConfig,
    buckets: usize,
) -> BivnormStatus {
    unsafe {
        with_config(config, |c| {
            c.buckets = buckets;
            BivnormStatus::Ok
        })
    }
}

/// # Safety
/// `config` must be NULL or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_config_set_samples(
    config: *mut BivnormProfileConfig,
    samples_per_bucket: usize,
) -> BivnormStatus {
    unsafe {
        with_config(config, |c| {
            c.samples_per_bucket = samples_per_bucket;
            BivnormStatus::Ok
        })
    }
}

/// # Safety
/// `config` must be NULL or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_config_set_seed(
    config: *mut BivnormProfileConfig,
    seed: u64,
) -> BivnormStatus {
    unsafe {
        with_config(config, |c| {
            c.seed = seed;
            BivnormStatus::Ok
        })
    }
}

/// `threads == 0` selects the global pool.
///
/// # Safety
/// `config` must be NULL or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_config_set_threads(
    config: *mut BivnormProfileConfig,
    threads: usize,
) -> BivnormStatus {
    unsafe {
        with_config(config, |c| {
            c.threads = (threads > 0).then_some(threads);
            BivnormStatus::Ok
        })
    }
}

/// `formula` is [`BIVNORM_RHO_CORRECTED`] or [`BIVNORM_RHO_PAPER`].
///
/// # Safety
/// `config` must be NULL or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_config_set_rho_formula(
    config: *mut BivnormProfileConfig,
    formula: c_int,
) -> BivnormStatus {
    unsafe {
        with_config(config, |c| {
            c.rho_formula = match formula {
                BIVNORM_RHO_CORRECTED => RhoFormula::Corrected,
                BIVNORM_RHO_PAPER => RhoFormula::Paper,
                other => {
                    set_last_error(format!("unknown rho formula {other}"));
                    return BivnormStatus::InvalidArgument;
                }
            };
            BivnormStatus::Ok
        })
    }
}

/// Runs the study; on success `*out` receives a handle to release with
/// [`bivnorm_profile_free`].
///
/// # Safety
/// `config` must be NULL or a live configuration handle; `out` must be NULL or
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_run(
    config: *const BivnormProfileConfig,
    out: *mut *mut BivnormProfile,
) -> BivnormStatus {
    if out.is_null() {
        return null("out");
    }
    // SAFETY: forwarded from the caller.
    let Some(config) = (unsafe { config.as_ref() }) else {
        return null("config");
    };
    guarded(|| match harness::run_profile(&config.inner) {
        Ok(buckets) => {
            let handle = Box::into_raw(Box::new(BivnormProfile { buckets }));
            // SAFETY: checked non-null above.
            unsafe { out.write(handle) };
            BivnormStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Number of buckets, 0 for NULL.
///
/// # Safety
/// `profile` must be NULL or a live profile handle.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_len(profile: *const BivnormProfile) -> usize {
    // SAFETY: forwarded from the caller.
    unsafe { profile.as_ref() }.map_or(0, |p| p.buckets.len())
}

/// # Safety
/// `profile` must be NULL or a live profile handle; `out` must be NULL or
/// valid for a write of one `BivnormBucketStats`.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_bucket(
    profile: *const BivnormProfile,
    index: usize,
    out: *mut BivnormBucketStats,
) -> BivnormStatus {
    // SAFETY: forwarded from the caller.
    let Some(profile) = (unsafe { profile.as_ref() }) else {
        return null("profile");
    };
    if out.is_null() {
        return null("out");
    }
    match profile.buckets.get(index) {
        Some(s) => {
            // SAFETY: checked non-null above.
            unsafe { out.write(s.into()) };
            BivnormStatus::Ok
        }
        None => {
            set_last_error(format!(
                "bucket {index} out of range (profile has {})",
                profile.buckets.len()
            ));
            BivnormStatus::OutOfRange
        }
    }
}

/// Writes the profile CSV to the UTF-8 path `path`.
///
/// # Safety
/// `profile` must be NULL or a live profile handle; `path` must be NULL or a
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_write_csv(
    profile: *const BivnormProfile,
    path: *const c_char,
) -> BivnormStatus {
    // SAFETY: forwarded from the caller.
    let Some(profile) = (unsafe { profile.as_ref() }) else {
        return null("profile");
    };
    if path.is_null() {
        return null("path");
    }
    // SAFETY: non-null and NUL-terminated per the contract.
    let Ok(path) = unsafe { CStr::from_ptr(path) }.to_str() else {
        set_last_error("path is not valid UTF-8");
        return BivnormStatus::InvalidArgument;
    };
    guarded(
        || match harness::write_profile_csv(&profile.buckets, Path::new(path)) {
            Ok(()) => BivnormStatus::Ok,
            Err(e) => fail(e),
        },
    )
}

/// # Safety
/// `profile` must be NULL or a handle from [`bivnorm_profile_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bivnorm_profile_free(profile: *mut BivnormProfile) {
    if !profile.is_null() {
        // SAFETY: the handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(profile) });
    }
}
