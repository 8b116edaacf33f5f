//! C ABI over `skyline-core`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and released
//! with the matching `*_free` function. Fallible calls return a [`SkyStatus`];
//! on failure, `sky_last_error` gives a message for the calling thread.
//! Strings returned by the library must be released with [`sky_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use skyline_core::analysis::{analyze, BoundKind, F1Analysis, GapDirection, UavConfiguration};
use skyline_core::catalog::{builtin_presets, load_config, PresetDocument, PresetStore};
use skyline_core::model::{
    action_period_for_velocity, calibrate_a_max, knee_point, safe_velocity, BodyDynamics,
};
use skyline_core::units::{Meters, MetersPerSecond, MetersPerSecondSquared, Seconds};
use skyline_core::{report, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Validation = 3,
    CannotClimb = 4,
    Model = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkyBound {
    Physics = 0,
    Compute = 1,
    Sensor = 2,
    Control = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkyGapDirection {
    UnderProvisioned = 0,
    OverProvisioned = 1,
    Balanced = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkyKnee {
    pub knee_throughput_hz: f64,
    pub knee_velocity_mps: f64,
    pub asymptote_velocity_mps: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkySummary {
    pub f_action_hz: f64,
    pub v_safe_mps: f64,
    pub knee: SkyKnee,
    pub bound: SkyBound,
    pub ceiling_velocity_mps: f64,
    pub gap_ratio: f64,
    pub gap_direction: SkyGapDirection,
    pub a_max_mps2: f64,
    pub thrust_to_weight: f64,
}

/// Catalog of presets.
pub struct SkyStore(PresetStore);

/// Resolved UAV configuration.
pub struct SkyConfig(UavConfiguration);

/// Result of an analysis.
pub struct SkyAnalysis(F1Analysis);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: SkyStatus, msg: impl Into<String>) -> SkyStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> SkyStatus {
    let status = match e {
        Error::CannotClimb { .. } => SkyStatus::CannotClimb,
        e if e.is_validation() => SkyStatus::Validation,
        _ => SkyStatus::Model,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> SkyStatus) -> SkyStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(SkyStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, SkyStatus> {
    if p.is_null() {
        return Err(fail(SkyStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SkyStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn dynamics(a_max: f64, range: f64) -> Result<BodyDynamics, SkyStatus> {
    BodyDynamics::new(MetersPerSecondSquared(a_max), Meters(range)).map_err(|e| from_error(&e))
}

macro_rules! out_ptr {
    ($p:expr) => {
        if $p.is_null() {
            return fail(SkyStatus::NullPointer, concat!(stringify!($p), " is null"));
        }
    };
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sky_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Free with `sky_string_free`.
#[no_mangle]
pub extern "C" fn sky_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(m) => m.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sky_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn sky_safe_velocity(
    a_max_mps2: f64,
    sense_range_m: f64,
    action_period_s: f64,
    out: *mut f64,
) -> SkyStatus {
    guard(|| {
        out_ptr!(out);
        let d = try_status!(dynamics(a_max_mps2, sense_range_m));
        match safe_velocity(&d, Seconds(action_period_s)) {
            Ok(v) => {
                *out = v.value();
                SkyStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `out` must be a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn sky_action_period_for_velocity(
    a_max_mps2: f64,
    sense_range_m: f64,
    velocity_mps: f64,
    out: *mut f64,
) -> SkyStatus {
    guard(|| {
        out_ptr!(out);
        let d = try_status!(dynamics(a_max_mps2, sense_range_m));
        match action_period_for_velocity(&d, MetersPerSecond(velocity_mps)) {
            Ok(t) => {
                *out = t.value();
                SkyStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `out` must be a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn sky_calibrate_a_max(
    velocity_mps: f64,
    action_period_s: f64,
    sense_range_m: f64,
    out: *mut f64,
) -> SkyStatus {
    guard(|| {
        out_ptr!(out);
        match calibrate_a_max(
            MetersPerSecond(velocity_mps),
            Seconds(action_period_s),
            Meters(sense_range_m),
        ) {
            Ok(a) => {
                *out = a.value();
                SkyStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `out` must be a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn sky_knee_point(
    a_max_mps2: f64,
    sense_range_m: f64,
    threshold: f64,
    out: *mut SkyKnee,
) -> SkyStatus {
    guard(|| {
        out_ptr!(out);
        let d = try_status!(dynamics(a_max_mps2, sense_range_m));
        match knee_point(&d, threshold) {
            Ok(k) => {
                *out = SkyKnee {
                    knee_throughput_hz: k.knee_throughput.value(),
                    knee_velocity_mps: k.knee_velocity.value(),
                    asymptote_velocity_mps: k.asymptote_velocity.value(),
                };
                SkyStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Builtin catalog. Never NULL.
#[no_mangle]
pub extern "C" fn sky_store_builtin() -> *mut SkyStore {
    Box::into_raw(Box::new(SkyStore(builtin_presets())))
}

/// Merges a TOML or JSON preset document over `base` into a new store.
///
/// # Safety
/// `base` must be a live store handle, `document` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sky_store_with_overlay(
    base: *const SkyStore,
    document: *const c_char,
    out: *mut *mut SkyStore,
) -> SkyStatus {
    guard(|| {
        out_ptr!(out);
        out_ptr!(base);
        let text = try_status!(str_arg(document, "document"));
        let merged = PresetDocument::parse(text).and_then(|doc| (*base).0.with_overlay(&doc));
        match merged {
            Ok(store) => {
                *out = Box::into_raw(Box::new(SkyStore(store)));
                SkyStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `store` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sky_store_free(store: *mut SkyStore) {
    if !store.is_null() {
        drop(Box::from_raw(store));
    }
}

/// Resolves a TOML or JSON configuration document.
///
/// # Safety
/// `store` must be a live store handle, `document` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sky_config_load(
    store: *const SkyStore,
    document: *const c_char,
    out: *mut *mut SkyConfig,
) -> SkyStatus {
    guard(|| {
        out_ptr!(out);
        out_ptr!(store);
        let text = try_status!(str_arg(document, "document"));
        match load_config(text, &(*store).0) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(SkyConfig(cfg)));
                SkyStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `config` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sky_config_free(config: *mut SkyConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `config` must be a live configuration handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sky_analyze(
    config: *const SkyConfig,
    out: *mut *mut SkyAnalysis,
) -> SkyStatus {
    guard(|| {
        out_ptr!(out);
        out_ptr!(config);
        match analyze(&(*config).0) {
            Ok(a) => {
                *out = Box::into_raw(Box::new(SkyAnalysis(a)));
                SkyStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `analysis` must be a live analysis handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sky_analysis_summary(
    analysis: *const SkyAnalysis,
    out: *mut SkySummary,
) -> SkyStatus {
    guard(|| {
        out_ptr!(out);
        out_ptr!(analysis);
        let a = &(*analysis).0;
        *out = SkySummary {
            f_action_hz: a.f_action.value(),
            v_safe_mps: a.v_safe.value(),
            knee: SkyKnee {
                knee_throughput_hz: a.knee.knee_throughput.value(),
                knee_velocity_mps: a.knee.knee_velocity.value(),
                asymptote_velocity_mps: a.knee.asymptote_velocity.value(),
            },
            bound: match a.bound.kind {
                BoundKind::PhysicsBound => SkyBound::Physics,
                BoundKind::ComputeBound => SkyBound::Compute,
                BoundKind::SensorBound => SkyBound::Sensor,
                BoundKind::ControlBound => SkyBound::Control,
            },
            ceiling_velocity_mps: a.bound.ceiling_velocity.value(),
            gap_ratio: a.gap.ratio,
            gap_direction: match a.gap.direction {
                GapDirection::UnderProvisioned => SkyGapDirection::UnderProvisioned,
                GapDirection::OverProvisioned => SkyGapDirection::OverProvisioned,
                GapDirection::Balanced => SkyGapDirection::Balanced,
            },
            a_max_mps2: a.a_max.value(),
            thrust_to_weight: a.thrust_to_weight,
        };
        SkyStatus::Ok
    })
}

/// Full analysis as JSON, or NULL on a NULL handle. Free with `sky_string_free`.
///
/// # Safety
/// `analysis` must be NULL or a live analysis handle.
#[no_mangle]
pub unsafe extern "C" fn sky_analysis_to_json(analysis: *const SkyAnalysis) -> *mut c_char {
    if analysis.is_null() {
        set_error("analysis is null");
        return ptr::null_mut();
    }
    let json = report::to_json(&(*analysis).0);
    CString::new(json)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// # Safety
/// `analysis` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sky_analysis_free(analysis: *mut SkyAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}
