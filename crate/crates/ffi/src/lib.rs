//! C interface to `dfrechet`.
//!
//! Curves cross the boundary as opaque [`DfCurve`] handles built from a flat,
//! row-major coordinate buffer. Every fallible call returns a [`DfStatus`] and
//! writes its result through an out-pointer; on failure a description is kept
//! per thread and can be fetched with [`df_last_error_message`]. Panics never
//! unwind into the caller.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dfrechet::{
    appr_f_backbone_with, approx_dfd_kbounded, approx_fd_continuous, dfd_dp_value,
    decision_switching, greedy_simplify, ApproxParams, Curve, DfdAlgorithm, Error, Norm,
};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    ContractViolation = 4,
    NotBackbone = 5,
    Panic = 6,
}

/// Vertex metric.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfNorm {
    L1 = 0,
    L2 = 1,
    Linf = 2,
}

impl From<DfNorm> for Norm {
    fn from(n: DfNorm) -> Norm {
        match n {
            DfNorm::L1 => Norm::L1,
            DfNorm::L2 => Norm::L2,
            DfNorm::Linf => Norm::Linf,
        }
    }
}

/// Exact algorithm run inside the continuous approximation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfInner {
    Dp = 0,
    BinarySearch = 1,
    OutputSensitive = 2,
}

impl From<DfInner> for DfdAlgorithm {
    fn from(a: DfInner) -> Self {
        match a {
            DfInner::Dp => DfdAlgorithm::Dp,
            DfInner::BinarySearch => DfdAlgorithm::BinarySearch,
            DfInner::OutputSensitive => DfdAlgorithm::OutputSensitive,
        }
    }
}

/// Opaque polygonal curve.
pub struct DfCurve {
    inner: Curve,
}

/// Tuning constants of the approximate algorithms. Obtain defaults from
/// [`df_params_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DfParams {
    pub eps: f64,
    pub kappa: f64,
    pub c1: f64,
    pub c2: f64,
    pub beta: f64,
}

impl From<DfParams> for ApproxParams {
    fn from(p: DfParams) -> Self {
        ApproxParams { eps: p.eps, kappa: p.kappa, c1: p.c1, c2: p.c2, beta: p.beta }
    }
}

/// Value and work counters of an approximate run.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct DfApproxResult {
    pub value: f64,
    pub probes: usize,
    pub max_white_cells: usize,
    /// Nonzero when the value is exact rather than approximate.
    pub exact: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: DfStatus, msg: impl Into<String>) -> DfStatus {
    set_last_error(msg.into());
    status
}

fn status_of(e: &Error) -> DfStatus {
    match e {
        Error::DimensionMismatch(..) => DfStatus::DimensionMismatch,
        Error::ContractViolation(_) => DfStatus::ContractViolation,
        Error::NotBackbone(_) => DfStatus::NotBackbone,
        _ => DfStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), DfStatus>) -> DfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DfStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(DfStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn lift<T>(r: dfrechet::Result<T>) -> Result<T, DfStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn curve_ref<'a>(c: *const DfCurve, what: &str) -> Result<&'a Curve, DfStatus> {
    // SAFETY: the caller promises that non-null handles came from this library.
    unsafe { c.as_ref() }
        .map(|c| &c.inner)
        .ok_or_else(|| fail(DfStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), DfStatus> {
    if p.is_null() {
        Err(fail(DfStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Default approximation constants.
#[no_mangle]
pub extern "C" fn df_params_default() -> DfParams {
    let p = ApproxParams::default();
    DfParams { eps: p.eps, kappa: p.kappa, c1: p.c1, c2: p.c2, beta: p.beta }
}

/// Builds a curve of `n` vertices in dimension `dim` from `n * dim`
/// row-major coordinates. The buffer is copied.
///
/// # Safety
/// `coords` must point to `n * dim` readable doubles and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn df_curve_new(
    coords: *const f64,
    n: usize,
    dim: usize,
    out: *mut *mut DfCurve,
) -> DfStatus {
    guard(|| {
        out_ptr(out, "out")?;
        if coords.is_null() {
            return Err(fail(DfStatus::NullPointer, "coords is null"));
        }
        let len = n
            .checked_mul(dim)
            .ok_or_else(|| fail(DfStatus::InvalidArgument, "n * dim overflows"))?;
        // SAFETY: guaranteed by the caller.
        let slice = unsafe { std::slice::from_raw_parts(coords, len) };
        let curve = lift(Curve::from_flat(dim, slice.to_vec()))?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(DfCurve { inner: curve })) };
        Ok(())
    })
}

/// Releases a curve. Null is ignored.
///
/// # Safety
/// `c` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn df_curve_free(c: *mut DfCurve) {
    if !c.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(c) });
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn df_curve_len(c: *const DfCurve) -> usize {
    unsafe { c.as_ref() }.map_or(0, |c| c.inner.len())
}

/// Dimension, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn df_curve_dim(c: *const DfCurve) -> usize {
    unsafe { c.as_ref() }.map_or(0, |c| c.inner.dim())
}

/// Copies the coordinates into `buf`, which holds `cap` doubles. Fails with
/// `InvalidArgument` if `cap < len * dim`.
///
/// # Safety
/// `buf` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn df_curve_coords(c: *const DfCurve, buf: *mut f64, cap: usize) -> DfStatus {
    guard(|| {
        let c = unsafe { curve_ref(c, "curve") }?;
        out_ptr(buf, "buf")?;
        let flat = c.flat();
        if cap < flat.len() {
            return Err(fail(
                DfStatus::InvalidArgument,
                format!("buffer holds {cap} values, {} needed", flat.len()),
            ));
        }
        // SAFETY: capacity checked above.
        unsafe { ptr::copy_nonoverlapping(flat.as_ptr(), buf, flat.len()) };
        Ok(())
    })
}

/// Exact discrete Fréchet distance.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_dfd_exact(
    a: *const DfCurve,
    b: *const DfCurve,
    norm: DfNorm,
    out: *mut f64,
) -> DfStatus {
    guard(|| {
        let (a, b) = unsafe { (curve_ref(a, "a")?, curve_ref(b, "b")?) };
        out_ptr(out, "out")?;
        let v = lift(dfd_dp_value(a, b, norm.into()))?;
        unsafe { *out = v };
        Ok(())
    })
}

/// Decides whether the distance is at most `delta`; writes 1 or 0.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_dfd_decide(
    a: *const DfCurve,
    b: *const DfCurve,
    delta: f64,
    norm: DfNorm,
    out: *mut i32,
) -> DfStatus {
    guard(|| {
        let (a, b) = unsafe { (curve_ref(a, "a")?, curve_ref(b, "b")?) };
        out_ptr(out, "out")?;
        let yes = lift(decision_switching(a, b, delta, norm.into()))?;
        unsafe { *out = i32::from(yes) };
        Ok(())
    })
}

fn write_outcome(out: *mut DfApproxResult, o: dfrechet::ApproxOutcome) {
    let r = DfApproxResult {
        value: o.value,
        probes: o.probes.len(),
        max_white_cells: o.max_white_cells,
        exact: i32::from(o.exact),
    };
    // SAFETY: callers check `out` first.
    unsafe { *out = r };
}

/// Approximation for a kappa-bounded second curve.
///
/// # Safety
/// `a` and `b` must be live handles, `params` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_dfd_approx_kbounded(
    a: *const DfCurve,
    b: *const DfCurve,
    params: *const DfParams,
    norm: DfNorm,
    out: *mut DfApproxResult,
) -> DfStatus {
    guard(|| {
        let (a, b) = unsafe { (curve_ref(a, "a")?, curve_ref(b, "b")?) };
        let p = unsafe { params.as_ref() }.ok_or_else(|| fail(DfStatus::NullPointer, "params is null"))?;
        out_ptr(out, "out")?;
        let o = lift(approx_dfd_kbounded(a, b, &(*p).into(), norm.into()))?;
        write_outcome(out, o);
        Ok(())
    })
}

/// Approximation for two backbone curves. Fails with `NotBackbone` when
/// either curve breaks the edge-length constraints in `params`.
///
/// # Safety
/// `a` and `b` must be live handles, `params` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_dfd_approx_backbone(
    a: *const DfCurve,
    b: *const DfCurve,
    params: *const DfParams,
    norm: DfNorm,
    out: *mut DfApproxResult,
) -> DfStatus {
    guard(|| {
        let (a, b) = unsafe { (curve_ref(a, "a")?, curve_ref(b, "b")?) };
        let p = unsafe { params.as_ref() }.ok_or_else(|| fail(DfStatus::NullPointer, "params is null"))?;
        out_ptr(out, "out")?;
        let o = lift(appr_f_backbone_with(a, b, &(*p).into(), norm.into()))?;
        write_outcome(out, o);
        Ok(())
    })
}

/// Approximates the continuous Fréchet distance by densification.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_fd_approx_continuous(
    a: *const DfCurve,
    b: *const DfCurve,
    eps: f64,
    norm: DfNorm,
    inner: DfInner,
    out: *mut f64,
) -> DfStatus {
    guard(|| {
        let (a, b) = unsafe { (curve_ref(a, "a")?, curve_ref(b, "b")?) };
        out_ptr(out, "out")?;
        let v = lift(approx_fd_continuous(a, b, eps, norm.into(), inner.into()))?;
        unsafe { *out = v };
        Ok(())
    })
}

/// Greedy `mu`-simplification; writes a new handle the caller must free.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_simplify(
    c: *const DfCurve,
    mu: f64,
    norm: DfNorm,
    out: *mut *mut DfCurve,
) -> DfStatus {
    guard(|| {
        let c = unsafe { curve_ref(c, "curve") }?;
        out_ptr(out, "out")?;
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(fail(DfStatus::InvalidArgument, format!("mu must be finite and >= 0, got {mu}")));
        }
        let s = greedy_simplify(c, mu, norm.into());
        unsafe { *out = Box::into_raw(Box::new(DfCurve { inner: s.curve })) };
        Ok(())
    })
}

/// Message of the last failure on this thread, or null if the last call
/// succeeded. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn df_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn df_status_string(s: DfStatus) -> *const c_char {
    let name: &'static CStr = match s {
        DfStatus::Ok => c"ok",
        DfStatus::NullPointer => c"null pointer",
        DfStatus::InvalidArgument => c"invalid argument",
        DfStatus::DimensionMismatch => c"dimension mismatch",
        DfStatus::ContractViolation => c"contract violation",
        DfStatus::NotBackbone => c"not a backbone curve",
        DfStatus::Panic => c"panic",
    };
    name.as_ptr()
}
