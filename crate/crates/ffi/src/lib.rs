//! C ABI over `zeromass-core`.
//!
//! Configurations and runs are opaque handles owned by the caller and
//! released with the matching `_free` function. Fallible calls return a
//! [`ZmStatus`]; the message of the last failure on the calling thread is
//! available from [`zm_last_error`]. Operator matrices are written as 16
//! row-major complex entries, real and imaginary parts interleaved, into a
//! caller buffer of 32 doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use zeromass_core::config::{SuiteConfig, SUITE_NAMES};
use zeromass_core::emit::{to_json, to_markdown};
use zeromass_core::momentum::{self, Family, Momentum3, Sign, GAMMA};
use zeromass_core::suites::{self, RunReport};
use zeromass_core::{ComplexMatrix, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownSuite = 3,
    Io = 4,
    Computation = 5,
    Panic = 6,
}

/// Opaque run configuration.
pub struct ZmConfig(SuiteConfig);

/// Opaque completed run.
pub struct ZmRun(RunReport);

/// Number of doubles written by the operator functions.
pub const ZM_MATRIX_DOUBLES: usize = 32;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn fail(status: ZmStatus, msg: impl Into<String>) -> ZmStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> ZmStatus {
    let status = match e {
        Error::UnknownSuite { .. } => ZmStatus::UnknownSuite,
        Error::Io { .. } => ZmStatus::Io,
        Error::InvalidConfig(_) | Error::NullMomentum | Error::NonFiniteMomentum => ZmStatus::InvalidArgument,
        _ => ZmStatus::Computation,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> ZmStatus) -> ZmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == ZmStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(ZmStatus::Panic, "panic inside zeromass"),
    }
}

fn guard_ptr<T>(f: impl FnOnce() -> *mut T) -> *mut T {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("panic inside zeromass");
        ptr::null_mut()
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next zeromass call on this thread.
#[no_mangle]
pub extern "C" fn zm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn zm_config_new() -> *mut ZmConfig {
    guard_ptr(|| Box::into_raw(Box::new(ZmConfig(SuiteConfig::default()))))
}

/// # Safety
/// `cfg` must be null or a pointer from `zm_config_new`/`zm_config_load_file`
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zm_config_free(cfg: *mut ZmConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

unsafe fn with_config(cfg: *mut ZmConfig, f: impl FnOnce(&mut SuiteConfig) -> ZmStatus) -> ZmStatus {
    guard(|| match cfg.as_mut() {
        Some(c) => f(&mut c.0),
        None => fail(ZmStatus::NullPointer, "null config"),
    })
}

/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn zm_config_set_seed(cfg: *mut ZmConfig, seed: u64) -> ZmStatus {
    with_config(cfg, |c| {
        c.seed = seed;
        ZmStatus::Ok
    })
}

/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn zm_config_set_samples(cfg: *mut ZmConfig, samples: usize) -> ZmStatus {
    with_config(cfg, |c| {
        if samples == 0 {
            return fail(ZmStatus::InvalidArgument, "samples must be at least 1");
        }
        c.samples = samples;
        ZmStatus::Ok
    })
}

/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn zm_config_set_tolerances(
    cfg: *mut ZmConfig,
    tol_exact: f64,
    tol_fd: f64,
    fd_step: f64,
) -> ZmStatus {
    with_config(cfg, |c| {
        let next = SuiteConfig {
            tol_exact,
            tol_fd,
            fd_step,
            ..c.clone()
        };
        if let Err(e) = next.validate() {
            return from_error(&e);
        }
        *c = next;
        ZmStatus::Ok
    })
}

/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn zm_config_set_momentum_range(cfg: *mut ZmConfig, min: f64, max: f64) -> ZmStatus {
    with_config(cfg, |c| {
        let next = SuiteConfig {
            momentum_min: min,
            momentum_max: max,
            ..c.clone()
        };
        if let Err(e) = next.validate() {
            return from_error(&e);
        }
        *c = next;
        ZmStatus::Ok
    })
}

/// Empty the suite selection; add suites back with `zm_config_add_suite`.
///
/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn zm_config_clear_suites(cfg: *mut ZmConfig) -> ZmStatus {
    with_config(cfg, |c| {
        c.suites.clear();
        ZmStatus::Ok
    })
}

/// # Safety
/// `cfg` must be a live config handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn zm_config_add_suite(cfg: *mut ZmConfig, name: *const c_char) -> ZmStatus {
    if name.is_null() {
        return fail(ZmStatus::NullPointer, "null suite name");
    }
    let name = CStr::from_ptr(name).to_string_lossy().into_owned();
    with_config(cfg, |c| {
        if !SUITE_NAMES.contains(&name.as_str()) {
            return fail(
                ZmStatus::UnknownSuite,
                format!("unknown suite '{name}'; valid suites: {}", SUITE_NAMES.join(", ")),
            );
        }
        if !c.suites.contains(&name) {
            c.suites.push(name);
        }
        ZmStatus::Ok
    })
}

/// Parse a flat `key = value` file into a new handle stored in `*out`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zm_config_load_file(path: *const c_char, out: *mut *mut ZmConfig) -> ZmStatus {
    if path.is_null() || out.is_null() {
        return fail(ZmStatus::NullPointer, "null argument");
    }
    let path = CStr::from_ptr(path).to_string_lossy().into_owned();
    guard(|| match SuiteConfig::from_file(Path::new(&path)) {
        Ok(c) => {
            *out = Box::into_raw(Box::new(ZmConfig(c)));
            ZmStatus::Ok
        }
        Err(e) => from_error(&e),
    })
}

/// Run the configured suites. A run whose checks fail still returns
/// `Ok` with a handle; query it with `zm_run_exit_code`.
///
/// # Safety
/// `cfg` must be a live config handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zm_run(cfg: *const ZmConfig, out: *mut *mut ZmRun) -> ZmStatus {
    if cfg.is_null() || out.is_null() {
        return fail(ZmStatus::NullPointer, "null argument");
    }
    let cfg = &(*cfg).0;
    guard(|| match suites::run(cfg) {
        Ok(r) => {
            *out = Box::into_raw(Box::new(ZmRun(r)));
            ZmStatus::Ok
        }
        Err(e) => from_error(&e),
    })
}

/// 0 when every check matched its expectation, 1 otherwise, -1 for null.
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn zm_run_exit_code(run: *const ZmRun) -> i32 {
    match run.as_ref() {
        Some(r) => r.0.exit_code(),
        None => -1,
    }
}

fn into_c_string(s: String) -> *mut c_char {
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => {
            set_error("report contains NUL");
            ptr::null_mut()
        }
    }
}

/// JSON report; release with `zm_string_free`.
///
/// # Safety
/// `run` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn zm_run_json(run: *const ZmRun) -> *mut c_char {
    match run.as_ref() {
        Some(r) => guard_ptr(|| into_c_string(to_json(&r.0))),
        None => {
            set_error("null run");
            ptr::null_mut()
        }
    }
}

/// Markdown report; release with `zm_string_free`.
///
/// # Safety
/// `run` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn zm_run_markdown(run: *const ZmRun) -> *mut c_char {
    match run.as_ref() {
        Some(r) => guard_ptr(|| into_c_string(to_markdown(&r.0))),
        None => {
            set_error("null run");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn zm_run_free(run: *mut ZmRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

unsafe fn read_momentum(p: *const f64) -> Result<Momentum3, ZmStatus> {
    if p.is_null() {
        return Err(fail(ZmStatus::NullPointer, "null momentum"));
    }
    let v = std::slice::from_raw_parts(p, 3);
    Momentum3::new(v[0], v[1], v[2]).map_err(|e| from_error(&e))
}

unsafe fn write_matrix(m: &ComplexMatrix, out: *mut f64) -> ZmStatus {
    if out.is_null() {
        return fail(ZmStatus::NullPointer, "null output buffer");
    }
    let buf = std::slice::from_raw_parts_mut(out, ZM_MATRIX_DOUBLES);
    for i in 0..4 {
        for j in 0..4 {
            let z = m[(i, j)];
            buf[2 * (4 * i + j)] = z.re;
            buf[2 * (4 * i + j) + 1] = z.im;
        }
    }
    ZmStatus::Ok
}

unsafe fn momentum_op(
    p: *const f64,
    out: *mut f64,
    f: impl FnOnce(&Momentum3) -> Result<ComplexMatrix, ZmStatus>,
) -> ZmStatus {
    guard(|| {
        let p = match read_momentum(p) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match f(&p) {
            Ok(m) => write_matrix(&m, out),
            Err(s) => s,
        }
    })
}

fn sign_arg(s: i32) -> Result<Sign, ZmStatus> {
    match s {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        _ => Err(fail(
            ZmStatus::InvalidArgument,
            format!("sign must be +1 or -1, got {s}"),
        )),
    }
}

/// `H(p) = α·p`.
///
/// # Safety
/// `p` must point to 3 doubles and `out` to 32.
#[no_mangle]
pub unsafe extern "C" fn zm_hamiltonian(p: *const f64, out: *mut f64) -> ZmStatus {
    momentum_op(p, out, |p| Ok(momentum::hamiltonian(p)))
}

/// `ε̂ = H/|p|`.
///
/// # Safety
/// `p` must point to 3 doubles and `out` to 32.
#[no_mangle]
pub unsafe extern "C" fn zm_energy_sign(p: *const f64, out: *mut f64) -> ZmStatus {
    momentum_op(p, out, |p| Ok(momentum::energy_sign(p)))
}

/// `Λ̂ = iγ4ε̂`.
///
/// # Safety
/// `p` must point to 3 doubles and `out` to 32.
#[no_mangle]
pub unsafe extern "C" fn zm_helicity(p: *const f64, out: *mut f64) -> ZmStatus {
    momentum_op(p, out, |p| Ok(momentum::helicity_matrix(p)))
}

/// `Pa^sign(p)` for family 1 (chirality), 2 (helicity) or 3 (energy sign).
///
/// # Safety
/// `p` must point to 3 doubles and `out` to 32.
#[no_mangle]
pub unsafe extern "C" fn zm_projector(family: u8, sign: i32, p: *const f64, out: *mut f64) -> ZmStatus {
    momentum_op(p, out, |p| {
        let f = Family::from_number(family).ok_or_else(|| {
            fail(
                ZmStatus::InvalidArgument,
                format!("family must be 1, 2 or 3, got {family}"),
            )
        })?;
        Ok(momentum::projector(f, sign_arg(sign)?, p))
    })
}

/// Rank-1 joint projector onto energy sign `eps` and helicity `lam`.
///
/// # Safety
/// `p` must point to 3 doubles and `out` to 32.
#[no_mangle]
pub unsafe extern "C" fn zm_minimal_projector(eps: i32, lam: i32, p: *const f64, out: *mut f64) -> ZmStatus {
    momentum_op(p, out, |p| {
        Ok(momentum::minimal_projector(sign_arg(eps)?, sign_arg(lam)?, p))
    })
}

/// Unitary `W(p)` with `W H W† = γ0|p|`.
///
/// # Safety
/// `p` must point to 3 doubles and `out` to 32.
#[no_mangle]
pub unsafe extern "C" fn zm_fw_rotation(p: *const f64, out: *mut f64) -> ZmStatus {
    momentum_op(p, out, |p| Ok(momentum::fw_rotation(p)))
}

/// `γ_mu` for `mu` in 0..=3, or `γ4` for `mu = 4`.
///
/// # Safety
/// `out` must point to 32 doubles.
#[no_mangle]
pub unsafe extern "C" fn zm_gamma(mu: u32, out: *mut f64) -> ZmStatus {
    guard(|| match mu {
        0..=3 => write_matrix(&GAMMA.gamma[mu as usize], out),
        4 => write_matrix(&GAMMA.gamma4, out),
        _ => fail(
            ZmStatus::InvalidArgument,
            format!("gamma index must be 0..=4, got {mu}"),
        ),
    })
}
