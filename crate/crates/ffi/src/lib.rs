//! C ABI over the oscillodx library.
//!
//! Conventions, mirrored in the generated `include/oscillodx.h`:
//!
//! * Every fallible call returns an [`OxStatus`]; `OX_STATUS_OK` is 0.
//!   On failure, [`ox_last_error_message`] returns a thread-local,
//!   NUL-terminated description of what went wrong.
//! * Objects cross the boundary as opaque handles created and destroyed by
//!   paired `ox_*_new`/`ox_*_free` calls. Accessors borrow; borrowed
//!   pointers stay valid until the owning handle is freed.
//! * Strings returned through `char **` are owned by the caller and must be
//!   released with [`ox_string_free`].
//! * No call unwinds across the boundary: panics are caught and reported as
//!   `OX_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use oscillodx::classifier::{classify, DiagnosisConfig};
use oscillodx::models::{
    simulate_forced, simulate_limit_cycle, simulate_ornstein_uhlenbeck, simulate_weakly_damped,
    ForcedParams, LimitCycleParams, OrnsteinUhlenbeckParams, SimConfig, WeaklyDampedParams,
};
use oscillodx::stats::{excess_kurtosis, welch_psd, SpectrumEstimate, Taper};
use oscillodx::{Error, TimeSeries};

/// Outcome of an FFI call. Zero is success; nonzero values classify the
/// failure, with detail available from `ox_last_error_message`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OxStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A parameter lies outside its documented domain.
    InvalidParameter = 2,
    /// Too few samples for the requested statistic.
    InsufficientData = 3,
    /// Sample variance is (numerically) zero; moment ratios are undefined.
    DegenerateVariance = 4,
    /// A NaN or infinity appeared where a finite value is required.
    NonFinite = 5,
    /// The step size cannot resolve the fastest decay in the model.
    UnstableIntegration = 6,
    /// Malformed content: CSV shape, timebase, channel name, window, JSON.
    Format = 7,
    /// Operating-system I/O failure.
    Io = 8,
    /// A string argument was not valid UTF-8.
    Utf8 = 9,
    /// An internal invariant failed (a bug worth reporting).
    Internal = 10,
}

/// Taper applied to each Welch segment.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OxTaper {
    /// Periodic Hann window (the library default).
    Hann = 0,
    /// No taper.
    Rectangular = 1,
}

/// Integration and recording plan for the simulators (passed by value).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OxSimPlan {
    /// Integrator step, seconds.
    pub dt: f64,
    /// Recorded span, seconds (after burn-in).
    pub duration: f64,
    /// Span integrated and discarded before recording, seconds.
    pub burn_in: f64,
    /// Record every `stride`-th step.
    pub stride: usize,
    /// Base RNG seed.
    pub seed: u64,
    /// Replicate index; (seed, stream) fully determines the noise path.
    pub stream: u64,
}

/// One uniformly sampled channel (opaque).
pub struct OxSeries(TimeSeries);

/// A one-sided Welch spectrum (opaque).
pub struct OxSpectrum(SpectrumEstimate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', "␀"))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &Error) -> OxStatus {
    match err {
        Error::InvalidParameter(_) => OxStatus::InvalidParameter,
        Error::UnstableIntegration(_) => OxStatus::UnstableIntegration,
        Error::InsufficientData(_) => OxStatus::InsufficientData,
        Error::DegenerateVariance(_) => OxStatus::DegenerateVariance,
        Error::NonFinite(_) => OxStatus::NonFinite,
        Error::CsvFormat { .. }
        | Error::IrregularTimebase(_)
        | Error::UnknownChannel(_)
        | Error::WindowOutOfRange(_)
        | Error::Json(_) => OxStatus::Format,
        Error::Io { .. } => OxStatus::Io,
    }
}

fn fail(err: Error) -> OxStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn fail_null(what: &str) -> OxStatus {
    set_error(format!("{what} must not be NULL"));
    OxStatus::NullPointer
}

/// Runs `body` with panics converted to `OX_STATUS_INTERNAL` and clears the
/// thread-local error on success.
fn guarded(body: impl FnOnce() -> OxStatus) -> OxStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => {
            if status == OxStatus::Ok {
                clear_error();
            }
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".into());
            set_error(format!("internal panic: {msg}"));
            OxStatus::Internal
        }
    }
}

fn plan_to_config(plan: &OxSimPlan) -> SimConfig {
    SimConfig {
        dt: plan.dt,
        duration: plan.duration,
        burn_in: plan.burn_in,
        stride: plan.stride,
        seed: plan.seed,
        stream: plan.stream,
    }
}

/// Writes the first channel of a simulation into a fresh handle.
fn emit_series(
    result: oscillodx::Result<oscillodx::MultiChannelRecord>,
    out: *mut *mut OxSeries,
) -> OxStatus {
    match result {
        Ok(record) => {
            let first = record.channels()[0].clone();
            unsafe { *out = Box::into_raw(Box::new(OxSeries(first))) };
            OxStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ox_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Description of the most recent failure on this thread, or an empty
/// string if the last call succeeded. The pointer stays valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ox_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(c) => c.as_ptr(),
        None => b"\0".as_ptr() as *const c_char,
    })
}

/// Builds a series from caller-owned samples (copied), with `label` naming
/// the channel, first sample at time `t0`, and spacing `dt` seconds.
///
/// # Safety
/// `label` must be a NUL-terminated string, `data` must point to `len`
/// readable doubles, and `out` must be a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn ox_series_from_data(
    label: *const c_char,
    t0: f64,
    dt: f64,
    data: *const f64,
    len: usize,
    out: *mut *mut OxSeries,
) -> OxStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null("out");
        }
        if label.is_null() {
            return fail_null("label");
        }
        if data.is_null() && len > 0 {
            return fail_null("data");
        }
        let label = match unsafe { CStr::from_ptr(label) }.to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("label is not valid UTF-8".into());
                return OxStatus::Utf8;
            }
        };
        let samples = if len == 0 {
            Vec::new()
        } else {
            unsafe { std::slice::from_raw_parts(data, len) }.to_vec()
        };
        match TimeSeries::new(label, t0, dt, samples) {
            Ok(series) => {
                unsafe { *out = Box::into_raw(Box::new(OxSeries(series))) };
                OxStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a series handle. NULL is a no-op.
///
/// # Safety
/// `series` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ox_series_free(series: *mut OxSeries) {
    if !series.is_null() {
        drop(unsafe { Box::from_raw(series) });
    }
}

/// Sample count of the series.
///
/// # Safety
/// `series` must be a live handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ox_series_len(series: *const OxSeries, out: *mut usize) -> OxStatus {
    guarded(|| {
        if series.is_null() {
            return fail_null("series");
        }
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { *out = (*series).0.len() };
        OxStatus::Ok
    })
}

/// Time of the first sample, seconds.
///
/// # Safety
/// `series` must be a live handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ox_series_t0(series: *const OxSeries, out: *mut f64) -> OxStatus {
    guarded(|| {
        if series.is_null() {
            return fail_null("series");
        }
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { *out = (*series).0.t0 };
        OxStatus::Ok
    })
}

/// Sample spacing, seconds.
///
/// # Safety
/// `series` must be a live handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ox_series_dt(series: *const OxSeries, out: *mut f64) -> OxStatus {
    guarded(|| {
        if series.is_null() {
            return fail_null("series");
        }
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { *out = (*series).0.dt };
        OxStatus::Ok
    })
}

/// Borrows the sample buffer. The pointer is valid until the series is
/// freed and must not be written through.
///
/// # Safety
/// `series` must be a live handle; `out_data` and `out_len` must be valid
/// destinations.
#[no_mangle]
pub unsafe extern "C" fn ox_series_samples(
    series: *const OxSeries,
    out_data: *mut *const f64,
    out_len: *mut usize,
) -> OxStatus {
    guarded(|| {
        if series.is_null() {
            return fail_null("series");
        }
        if out_data.is_null() || out_len.is_null() {
            return fail_null("out_data/out_len");
        }
        let samples = &unsafe { &*series }.0.samples;
        unsafe {
            *out_data = samples.as_ptr();
            *out_len = samples.len();
        }
        OxStatus::Ok
    })
}

/// Simulates the noise-sustained ringing of a damped linear mode and
/// returns its first channel.
///
/// # Safety
/// `out` must be a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn ox_simulate_weakly_damped(
    damping: f64,
    natural_freq: f64,
    noise_intensity: f64,
    plan: OxSimPlan,
    out: *mut *mut OxSeries,
) -> OxStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null("out");
        }
        let params = WeaklyDampedParams {
            damping,
            natural_freq,
            noise_intensity,
        };
        emit_series(simulate_weakly_damped(&params, &plan_to_config(&plan)), out)
    })
}

/// Simulates a stochastic limit cycle (orbit radius √growth_rate) and
/// returns its first channel.
///
/// # Safety
/// `out` must be a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn ox_simulate_limit_cycle(
    growth_rate: f64,
    frequency: f64,
    noise_intensity: f64,
    plan: OxSimPlan,
    out: *mut *mut OxSeries,
) -> OxStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null("out");
        }
        let params = LimitCycleParams {
            growth_rate,
            frequency,
            noise_intensity,
        };
        emit_series(simulate_limit_cycle(&params, &plan_to_config(&plan)), out)
    })
}

/// Simulates a damped mode under a periodic drive and returns its first
/// channel.
///
/// # Safety
/// `out` must be a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn ox_simulate_forced(
    damping: f64,
    natural_freq: f64,
    forcing_amp: f64,
    forcing_freq: f64,
    noise_intensity: f64,
    plan: OxSimPlan,
    out: *mut *mut OxSeries,
) -> OxStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null("out");
        }
        let params = ForcedParams {
            damping,
            natural_freq,
            forcing_amp,
            forcing_freq,
            noise_intensity,
        };
        emit_series(simulate_forced(&params, &plan_to_config(&plan)), out)
    })
}

/// Simulates a single Ornstein–Uhlenbeck relaxation channel.
///
/// # Safety
/// `out` must be a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn ox_simulate_ornstein_uhlenbeck(
    decay_rate: f64,
    noise_intensity: f64,
    plan: OxSimPlan,
    out: *mut *mut OxSeries,
) -> OxStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null("out");
        }
        let params = OrnsteinUhlenbeckParams {
            decay_rates: vec![decay_rate],
            noise_intensity,
        };
        emit_series(
            simulate_ornstein_uhlenbeck(&params, &plan_to_config(&plan)),
            out,
        )
    })
}

/// Excess kurtosis (fourth standardized moment minus 3) of the series.
/// Needs at least 100 samples.
///
/// # Safety
/// `series` must be a live handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ox_excess_kurtosis(
    series: *const OxSeries,
    out: *mut f64,
) -> OxStatus {
    guarded(|| {
        if series.is_null() {
            return fail_null("series");
        }
        if out.is_null() {
            return fail_null("out");
        }
        match excess_kurtosis(&unsafe { &*series }.0.samples) {
            Ok(k) => {
                unsafe { *out = k };
                OxStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Welch power spectral density of the series: segments of `segment_len`
/// samples advancing by `segment_len·(1 − overlap)`, tapered and averaged.
///
/// # Safety
/// `series` must be a live handle and `out` a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn ox_welch_psd(
    series: *const OxSeries,
    segment_len: usize,
    overlap: f64,
    taper: OxTaper,
    out: *mut *mut OxSpectrum,
) -> OxStatus {
    guarded(|| {
        if series.is_null() {
            return fail_null("series");
        }
        if out.is_null() {
            return fail_null("out");
        }
        let taper = match taper {
            OxTaper::Hann => Taper::Hann,
            OxTaper::Rectangular => Taper::Rectangular,
        };
        match welch_psd(&unsafe { &*series }.0, segment_len, overlap, taper) {
            Ok(spectrum) => {
                unsafe { *out = Box::into_raw(Box::new(OxSpectrum(spectrum))) };
                OxStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a spectrum handle. NULL is a no-op.
///
/// # Safety
/// `spectrum` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ox_spectrum_free(spectrum: *mut OxSpectrum) {
    if !spectrum.is_null() {
        drop(unsafe { Box::from_raw(spectrum) });
    }
}

/// Number of frequency bins (`segment_len/2 + 1`).
///
/// # Safety
/// `spectrum` must be a live handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ox_spectrum_len(
    spectrum: *const OxSpectrum,
    out: *mut usize,
) -> OxStatus {
    guarded(|| {
        if spectrum.is_null() {
            return fail_null("spectrum");
        }
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { *out = (*spectrum).0.freqs.len() };
        OxStatus::Ok
    })
}

/// Borrows the bin-frequency array (Hz). Valid until the spectrum is freed.
///
/// # Safety
/// `spectrum` must be a live handle; `out_data` and `out_len` valid
/// destinations.
#[no_mangle]
pub unsafe extern "C" fn ox_spectrum_freqs(
    spectrum: *const OxSpectrum,
    out_data: *mut *const f64,
    out_len: *mut usize,
) -> OxStatus {
    guarded(|| {
        if spectrum.is_null() {
            return fail_null("spectrum");
        }
        if out_data.is_null() || out_len.is_null() {
            return fail_null("out_data/out_len");
        }
        let freqs = &unsafe { &*spectrum }.0.freqs;
        unsafe {
            *out_data = freqs.as_ptr();
            *out_len = freqs.len();
        }
        OxStatus::Ok
    })
}

/// Borrows the one-sided density array (power per Hz). Valid until the
/// spectrum is freed.
///
/// # Safety
/// `spectrum` must be a live handle; `out_data` and `out_len` valid
/// destinations.
#[no_mangle]
pub unsafe extern "C" fn ox_spectrum_psd(
    spectrum: *const OxSpectrum,
    out_data: *mut *const f64,
    out_len: *mut usize,
) -> OxStatus {
    guarded(|| {
        if spectrum.is_null() {
            return fail_null("spectrum");
        }
        if out_data.is_null() || out_len.is_null() {
            return fail_null("out_data/out_len");
        }
        let psd = &unsafe { &*spectrum }.0.psd;
        unsafe {
            *out_data = psd.as_ptr();
            *out_len = psd.len();
        }
        OxStatus::Ok
    })
}

/// Equivalent noise bandwidth of the taper, Hz — the width a pure tone
/// smears to.
///
/// # Safety
/// `spectrum` must be a live handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ox_spectrum_resolution_bw(
    spectrum: *const OxSpectrum,
    out: *mut f64,
) -> OxStatus {
    guarded(|| {
        if spectrum.is_null() {
            return fail_null("spectrum");
        }
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { *out = (*spectrum).0.resolution_bw };
        OxStatus::Ok
    })
}

/// Number of averaged segments.
///
/// # Safety
/// `spectrum` must be a live handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ox_spectrum_segments(
    spectrum: *const OxSpectrum,
    out: *mut usize,
) -> OxStatus {
    guarded(|| {
        if spectrum.is_null() {
            return fail_null("spectrum");
        }
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { *out = (*spectrum).0.segments };
        OxStatus::Ok
    })
}

/// Classifies the series by oscillation mechanism with the default
/// thresholds and writes the full report as a JSON document (schema
/// `diagnosis-report/v1`). Needs at least 1000 samples. Release the string
/// with `ox_string_free`.
///
/// # Safety
/// `series` must be a live handle and `out_json` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn ox_classify_json(
    series: *const OxSeries,
    out_json: *mut *mut c_char,
) -> OxStatus {
    guarded(|| {
        if series.is_null() {
            return fail_null("series");
        }
        if out_json.is_null() {
            return fail_null("out_json");
        }
        let report = match classify(&unsafe { &*series }.0, &DiagnosisConfig::default()) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        let json = match serde_json::to_string_pretty(&report) {
            Ok(j) => j,
            Err(e) => return fail(Error::Json(e)),
        };
        match CString::new(json) {
            Ok(c) => {
                unsafe { *out_json = c.into_raw() };
                OxStatus::Ok
            }
            Err(_) => {
                set_error("report contained an interior NUL byte".into());
                OxStatus::Internal
            }
        }
    })
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ox_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
