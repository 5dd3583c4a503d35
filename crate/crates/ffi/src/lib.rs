//! C interface.
//!
//! Every function returns a [`TsStatus`]; on failure a message is available
//! from [`ts_last_error`] on the same thread. Strings handed out by the
//! library are released with [`ts_string_free`], datums with
//! [`ts_datum_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use twisted_satake::cli::{run_loaded, CommandError};
use twisted_satake::coweights::CoweightSpace;
use twisted_satake::galois::kottwitz_components;
use twisted_satake::presets::{self, Preset};
use twisted_satake::{input, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownPreset = 3,
    InvalidInput = 4,
    /// Bad command arguments, as for exit status 1 of the command line.
    Usage = 5,
    /// A property check failed; any report is still written.
    CheckFailed = 6,
    BufferTooSmall = 7,
    /// A value does not fit the C integer type.
    Overflow = 8,
    Panic = 9,
}

/// A validated twisted root datum, opaque to C.
pub struct TsDatum {
    preset: Preset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: TsStatus, msg: impl Into<String>) -> TsStatus {
    set_error(msg);
    status
}

fn lib_error(e: Error) -> TsStatus {
    let status = match e {
        Error::UnknownPreset(_) => TsStatus::UnknownPreset,
        Error::InvariantViolation(_) | Error::ResidualNonEmpty(_) => TsStatus::CheckFailed,
        _ => TsStatus::InvalidInput,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> TsStatus) -> TsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(TsStatus::Panic, format!("panic: {msg}"))
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TsStatus> {
    if s.is_null() {
        return Err(fail(TsStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(TsStatus::InvalidUtf8, e.to_string()))
}

unsafe fn datum<'a>(d: *const TsDatum) -> Result<&'a TsDatum, TsStatus> {
    d.as_ref().ok_or_else(|| fail(TsStatus::NullPointer, "null datum"))
}

fn hand_out(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(x) => x,
            Err(s) => return s,
        }
    };
}

/// Loads a built-in preset such as `"SU3"`.
///
/// # Safety
/// `key` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_datum_from_preset(key: *const c_char, out: *mut *mut TsDatum) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return fail(TsStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let key = try_status!(read_str(key));
        match presets::lookup(key) {
            Ok(preset) => {
                *out = Box::into_raw(Box::new(TsDatum { preset }));
                TsStatus::Ok
            }
            Err(e) => lib_error(e),
        }
    })
}

/// Parses and validates a datum in the JSON input format. `name` labels it
/// in reports and may be null.
///
/// # Safety
/// `json` and a non-null `name` must be nul-terminated strings; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_datum_from_json(
    json: *const c_char,
    name: *const c_char,
    out: *mut *mut TsDatum,
) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return fail(TsStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = try_status!(read_str(json));
        let name = if name.is_null() { "input" } else { try_status!(read_str(name)) };
        match input::parse(text).and_then(|d| d.build(name)) {
            Ok(preset) => {
                *out = Box::into_raw(Box::new(TsDatum { preset }));
                TsStatus::Ok
            }
            Err(e) => lib_error(e),
        }
    })
}

/// # Safety
/// `d` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_datum_free(d: *mut TsDatum) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Rank of `X_*(T)`.
///
/// # Safety
/// `d` must be a live datum and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_datum_rank(d: *const TsDatum, out: *mut usize) -> TsStatus {
    guard(|| {
        let d = try_status!(datum(d));
        if out.is_null() {
            return fail(TsStatus::NullPointer, "null output pointer");
        }
        *out = d.preset.twisted.rank();
        TsStatus::Ok
    })
}

/// `pi_1(G)_I` as its free rank and torsion invariant factors. `len`
/// receives the number of factors; if it exceeds `capacity` nothing is
/// written to `factors` and `TS_STATUS_BUFFER_TOO_SMALL` is returned.
/// `factors` may be null when `capacity` is 0.
///
/// # Safety
/// `factors` must point to `capacity` writable values; the other pointers
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn ts_kottwitz_components(
    d: *const TsDatum,
    free_rank: *mut usize,
    factors: *mut u64,
    capacity: usize,
    len: *mut usize,
) -> TsStatus {
    guard(|| {
        let d = try_status!(datum(d));
        if free_rank.is_null() || len.is_null() || (factors.is_null() && capacity > 0) {
            return fail(TsStatus::NullPointer, "null output pointer");
        }
        let g = match kottwitz_components(&d.preset.twisted) {
            Ok(g) => g,
            Err(e) => return lib_error(e),
        };
        let mut values = Vec::with_capacity(g.invariant_factors.len());
        for f in &g.invariant_factors {
            match f.to_u64() {
                Some(x) => values.push(x),
                None => return fail(TsStatus::Overflow, format!("invariant factor {f} exceeds 64 bits")),
            }
        }
        *free_rank = g.free_rank;
        *len = values.len();
        if values.len() > capacity {
            return fail(TsStatus::BufferTooSmall, format!("{} factors, capacity {capacity}", values.len()));
        }
        if !values.is_empty() {
            std::slice::from_raw_parts_mut(factors, values.len()).copy_from_slice(&values);
        }
        TsStatus::Ok
    })
}

/// Order of the relative Weyl group `W_0`.
///
/// # Safety
/// `d` must be a live datum and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_relative_weyl_order(d: *const TsDatum, out: *mut usize) -> TsStatus {
    guard(|| {
        let d = try_status!(datum(d));
        if out.is_null() {
            return fail(TsStatus::NullPointer, "null output pointer");
        }
        match CoweightSpace::new(&d.preset.twisted) {
            Ok(s) => {
                *out = s.weyl.order();
                TsStatus::Ok
            }
            Err(e) => lib_error(e),
        }
    })
}

/// Runs a command-line subcommand on the datum and writes its JSON report to
/// `out`. `argv` holds `argc` arguments starting with the subcommand and
/// omitting the datum, e.g. `{"mv", "-1", "1"}`. A report is also written
/// when a check fails (`TS_STATUS_CHECK_FAILED`) or when `branch` cannot decompose
/// (`TS_STATUS_INVALID_INPUT`); otherwise `*out` is null on failure.
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings and `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_run_json(
    d: *const TsDatum,
    argv: *const *const c_char,
    argc: usize,
    out: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return fail(TsStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let d = try_status!(datum(d));
        if argv.is_null() && argc > 0 {
            return fail(TsStatus::NullPointer, "null argv");
        }
        let mut args = Vec::with_capacity(argc + 2);
        for i in 0..argc {
            args.push(try_status!(read_str(*argv.add(i))).to_string());
        }
        if args.iter().any(|a| a == "--format") {
            return fail(TsStatus::Usage, "--format is fixed to json");
        }
        args.extend(["--format".to_string(), "json".to_string()]);
        match run_loaded(&d.preset, &args) {
            Ok(report) => {
                *out = hand_out(report.json.to_string());
                match report.status {
                    0 => TsStatus::Ok,
                    3 => fail(TsStatus::CheckFailed, "a check failed; see the report"),
                    _ => fail(TsStatus::InvalidInput, "the report records an error"),
                }
            }
            Err(CommandError { status, message }) => {
                let code = match status {
                    0 | 1 => TsStatus::Usage,
                    3 => TsStatus::CheckFailed,
                    _ => TsStatus::InvalidInput,
                };
                fail(code, message.trim_end())
            }
        }
    })
}

/// Number of built-in presets.
#[no_mangle]
pub extern "C" fn ts_preset_count() -> usize {
    presets::STANDARD_KEYS.len()
}

/// Key of the `i`-th built-in preset as a static string, or null.
#[no_mangle]
pub extern "C" fn ts_preset_key(i: usize) -> *const c_char {
    static KEYS: std::sync::OnceLock<Vec<CString>> = std::sync::OnceLock::new();
    let keys = KEYS.get_or_init(|| {
        presets::STANDARD_KEYS
            .iter()
            .map(|k| CString::new(*k).expect("no interior nul"))
            .collect()
    });
    keys.get(i).map_or(ptr::null(), |k| k.as_ptr())
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn ts_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Schema version of the JSON reports.
#[no_mangle]
pub extern "C" fn ts_schema_version() -> u64 {
    twisted_satake::cli::SCHEMA_VERSION
}
