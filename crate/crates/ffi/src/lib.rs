//! C ABI over `gic-core`.
//!
//! Every fallible call returns a [`GicStatus`]; on anything other than
//! `GIC_STATUS_OK` a description is available from [`gic_last_error`] on the
//! same thread. Channels and sample batches are opaque heap handles owned by
//! the caller and released with their `_free` function. Panics never cross
//! the boundary; they surface as `GIC_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gic_core::bounds::all_bounds;
use gic_core::cli::{sweep_grid, sweep_rows, write_sweep_csv};
use gic_core::gaussmi::genie_aided_sum_rate;
use gic_core::geometry::tangent_bound;
use gic_core::montecarlo::{sample, SampleBatch};
use gic_core::regime::construct_genie;
use gic_core::{ChannelParams, Error, GenieSpec, Rate, RegimeKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Unsupported = 3,
    NoCertificate = 4,
    Numerical = 5,
    UnknownVariable = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GicRegime {
    LowInterferenceExact = 0,
    AboveThreshold = 1,
}

/// Opaque channel handle.
pub struct GicChannel {
    params: ChannelParams,
}

/// Opaque handle to a block of seeded samples.
pub struct GicSampleBatch {
    batch: SampleBatch,
}

/// Every bound at once. `has_*` is 1 when the matching value is defined.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GicBounds {
    pub tin_lower: f64,
    pub has_ortho_lower: u8,
    pub ortho_lower: f64,
    pub has_onebit_upper: u8,
    pub onebit_upper: f64,
    pub has_kramer_upper: u8,
    pub kramer_upper: f64,
    pub has_tangent_upper: u8,
    pub tangent_upper: f64,
    pub has_exact_capacity: u8,
    pub exact_capacity: f64,
    pub has_genie_upper: u8,
    pub genie_upper: f64,
    pub regime: i32,
    pub condition_value: f64,
    pub threshold: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GicGenie {
    pub eta1: f64,
    pub rho1: f64,
    pub eta2: f64,
    pub rho2: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GicStatus {
    match e {
        Error::InvalidParameter { .. } | Error::EmptyBatch => GicStatus::InvalidParameter,
        Error::Unsupported(_) => GicStatus::Unsupported,
        Error::InvalidCertificate(_) | Error::Precondition(_) => GicStatus::NoCertificate,
        Error::DegenerateObservation(_)
        | Error::NoBoundary { .. }
        | Error::DegenerateLine
        | Error::DegenerateBatch(_) => GicStatus::Numerical,
        Error::UnknownVariable(_) => GicStatus::UnknownVariable,
        Error::Internal(_) => GicStatus::Internal,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (GicStatus, String)>) -> GicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            GicStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside gic");
            GicStatus::Internal
        }
    }
}

fn core<T>(r: gic_core::Result<T>) -> Result<T, (GicStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (GicStatus, String) {
    (GicStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (GicStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (GicStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

fn genie_from(g: &GicGenie) -> gic_core::Result<GenieSpec> {
    GenieSpec::new(g.eta1, g.rho1, g.eta2, g.rho2)
}

fn genie_to(g: &GenieSpec) -> GicGenie {
    GicGenie {
        eta1: g.eta1,
        rho1: g.rho1,
        eta2: g.eta2,
        rho2: g.rho2,
    }
}

/// Message for the last failing call on this thread; empty after a success.
/// The pointer stays valid until the next `gic_*` call on the same thread.
#[no_mangle]
pub extern "C" fn gic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Linear power for a value in dB.
#[no_mangle]
pub extern "C" fn gic_db_to_linear(x_db: f64) -> f64 {
    gic_core::db_to_linear(x_db)
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn gic_channel_new(
    p1: f64,
    p2: f64,
    h12: f64,
    h21: f64,
    out: *mut *mut GicChannel,
) -> GicStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let params = core(ChannelParams::new(p1, p2, h12, h21))?;
        *out = Box::into_raw(Box::new(GicChannel { params }));
        Ok(())
    })
}

/// # Safety
/// `channel` must be null or a handle from [`gic_channel_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gic_channel_free(channel: *mut GicChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// # Safety
/// `channel` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gic_bounds(channel: *const GicChannel, out: *mut GicBounds) -> GicStatus {
    guard(|| {
        let c = deref(channel, "channel")?;
        let out = out_ref(out, "out")?;
        let b = core(all_bounds(&c.params))?;
        let split = |r: Option<Rate>| r.map_or((0, f64::NAN), |r| (1, r.bits()));
        let (has_ortho_lower, ortho_lower) = split(b.ortho_lower);
        let (has_onebit_upper, onebit_upper) = split(b.onebit_upper);
        let (has_kramer_upper, kramer_upper) = split(b.kramer_upper);
        let (has_tangent_upper, tangent_upper) = split(b.tangent_upper);
        let (has_exact_capacity, exact_capacity) = split(b.exact_capacity);
        let (has_genie_upper, genie_upper) = split(b.genie_upper);
        *out = GicBounds {
            tin_lower: b.tin_lower.bits(),
            has_ortho_lower,
            ortho_lower,
            has_onebit_upper,
            onebit_upper,
            has_kramer_upper,
            kramer_upper,
            has_tangent_upper,
            tangent_upper,
            has_exact_capacity,
            exact_capacity,
            has_genie_upper,
            genie_upper,
            regime: match b.regime.kind {
                RegimeKind::LowInterferenceExact => GicRegime::LowInterferenceExact as i32,
                RegimeKind::AboveThreshold => GicRegime::AboveThreshold as i32,
            },
            condition_value: b.regime.condition_value,
            threshold: b.regime.threshold,
        };
        Ok(())
    })
}

/// Builds the low-interference genie. Returns `GIC_STATUS_NO_CERTIFICATE`
/// above the threshold or when a cross gain is zero.
///
/// # Safety
/// `channel` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gic_genie_construct(
    channel: *const GicChannel,
    out: *mut GicGenie,
) -> GicStatus {
    guard(|| {
        let c = deref(channel, "channel")?;
        let out = out_ref(out, "out")?;
        let g = construct_genie(&c.params).ok_or((
            GicStatus::NoCertificate,
            "no genie certificate for this channel".to_string(),
        ))?;
        *out = genie_to(&g);
        Ok(())
    })
}

/// Sum-rate upper bound certified by a useful genie.
///
/// # Safety
/// `channel` and `genie` must be valid pointers and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gic_genie_aided_sum_rate(
    channel: *const GicChannel,
    genie: *const GicGenie,
    out: *mut f64,
) -> GicStatus {
    guard(|| {
        let c = deref(channel, "channel")?;
        let g = core(genie_from(deref(genie, "genie")?))?;
        let out = out_ref(out, "out")?;
        *out = core(genie_aided_sum_rate(&c.params, &g))?.bits();
        Ok(())
    })
}

/// Tangent-line upper bound for a symmetric channel. `genie` may be null;
/// otherwise it receives the genie that achieves the bound.
///
/// # Safety
/// `channel` must be a live handle, `rate` valid for writes, `genie` null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gic_tangent_bound(
    channel: *const GicChannel,
    rate: *mut f64,
    genie: *mut GicGenie,
) -> GicStatus {
    guard(|| {
        let c = deref(channel, "channel")?;
        let rate = out_ref(rate, "rate")?;
        let t = core(tangent_bound(&c.params))?;
        if let Some(g) = genie.as_mut() {
            *g = genie_to(&core(t.genie(&c.params))?);
        }
        *rate = t.rate.bits();
        Ok(())
    })
}

/// Draws `n` seeded samples. `genie` may be null to omit side information.
///
/// # Safety
/// `channel` must be a live handle, `genie` null or valid, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gic_sample_new(
    channel: *const GicChannel,
    genie: *const GicGenie,
    n: usize,
    seed: u64,
    out: *mut *mut GicSampleBatch,
) -> GicStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let c = deref(channel, "channel")?;
        let g = match genie.as_ref() {
            Some(g) => Some(core(genie_from(g))?),
            None => None,
        };
        let batch = core(sample(&c.params, g.as_ref(), n, seed))?;
        *out = Box::into_raw(Box::new(GicSampleBatch { batch }));
        Ok(())
    })
}

/// Borrows one column (`"X1"`, `"Y1"`, `"S1"`, ...). The data stays valid
/// until the batch is freed.
///
/// # Safety
/// `batch` must be a live handle, `name` a NUL-terminated string, `data` and
/// `len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gic_sample_column(
    batch: *const GicSampleBatch,
    name: *const c_char,
    data: *mut *const f64,
    len: *mut usize,
) -> GicStatus {
    guard(|| {
        let b = deref(batch, "batch")?;
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| (GicStatus::InvalidParameter, "name is not UTF-8".to_string()))?;
        let data = out_ref(data, "data")?;
        let len = out_ref(len, "len")?;
        let col = core(b.batch.column(name))?;
        *data = col.as_ptr();
        *len = col.len();
        Ok(())
    })
}

/// # Safety
/// `batch` must be null or a handle from [`gic_sample_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gic_sample_free(batch: *mut GicSampleBatch) {
    if !batch.is_null() {
        drop(Box::from_raw(batch));
    }
}

/// Symmetric sweep over `h` as CSV text, same layout as the `gic sweep`
/// command. Release the string with [`gic_string_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gic_sweep_csv(
    p: f64,
    h_from: f64,
    h_to: f64,
    h_step: f64,
    out: *mut *mut c_char,
) -> GicStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let grid = core(sweep_grid(h_from, h_to, h_step))?;
        let rows = core(sweep_rows((p, p), &grid, None))?;
        let mut buf = Vec::new();
        core(write_sweep_csv(&rows, true, &mut buf))?;
        let s = CString::new(buf)
            .map_err(|_| (GicStatus::Internal, "NUL in CSV output".to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
