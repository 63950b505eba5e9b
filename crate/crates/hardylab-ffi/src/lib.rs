//! C ABI for hardylab.
//!
//! All functions return an [`HlStatus`] code; results come back through out
//! pointers. Sharp-constant runs yield an opaque handle that must be freed
//! with [`hl_sharp_free`]. No function panics across the FFI boundary.

use hardylab::{
    Geometry, LorentzParams, ModeProblem, RefinementPlan, SharpEstimate, StepFunction, TestFamily,
};
use std::os::raw::c_double;

/// Status codes returned by every hardylab FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HlStatus {
    /// Success.
    HlOk = 0,
    /// A required pointer argument was null.
    HlNullArgument = 1,
    /// A parameter failed validation.
    HlInvalidArgument = 2,
    /// The solver failed (bracket, convergence, or invariant violation).
    HlNumericalFailure = 3,
    /// The handle index was out of range.
    HlOutOfRange = 4,
}

/// Opaque handle to a sharp-constant estimate (value + refinement trace).
pub struct HlSharpEstimate {
    inner: SharpEstimate,
}

fn classify(err: &hardylab::Error) -> HlStatus {
    match err {
        hardylab::Error::BadParameter(_)
        | hardylab::Error::DegenerateInterval(..)
        | hardylab::Error::TooFewNodes { .. }
        | hardylab::Error::BadGradingRatio(_) => HlStatus::HlInvalidArgument,
        _ => HlStatus::HlNumericalFailure,
    }
}

fn run_sharp(geometry: Geometry, k_max: u32, out: *mut *mut HlSharpEstimate) -> HlStatus {
    if out.is_null() {
        return HlStatus::HlNullArgument;
    }
    let plan = RefinementPlan {
        k_max: k_max.max(1),
        ..RefinementPlan::default()
    };
    let result = std::panic::catch_unwind(|| {
        let problem = ModeProblem::new(geometry, 1, 2.0)?;
        hardylab::sharp_constant(&problem, &plan)
    });
    match result {
        Ok(Ok(est)) => {
            let boxed = Box::new(HlSharpEstimate { inner: est });
            unsafe { *out = Box::into_raw(boxed) };
            HlStatus::HlOk
        }
        Ok(Err(e)) => classify(&e),
        Err(_) => HlStatus::HlNumericalFailure,
    }
}

/// Sharp-constant estimate on the critical disk (weight offset `a` > 1).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_sharp_critical_disk(
    a: c_double,
    k_max: u32,
    out: *mut *mut HlSharpEstimate,
) -> HlStatus {
    run_sharp(Geometry::CriticalDisk { a }, k_max, out)
}

/// Sharp-constant estimate on the unit ball, dimension `dim` ≥ 3.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_sharp_classical_ball(
    dim: u32,
    k_max: u32,
    out: *mut *mut HlSharpEstimate,
) -> HlStatus {
    run_sharp(Geometry::ClassicalBall { dim }, k_max, out)
}

/// Sharp-constant estimate on the whole space, dimension `dim` ≥ 3.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_sharp_whole_space(
    dim: u32,
    k_max: u32,
    out: *mut *mut HlSharpEstimate,
) -> HlStatus {
    run_sharp(Geometry::ClassicalWholeSpace { dim }, k_max, out)
}

/// Final estimate value (the finest refinement level).
///
/// # Safety
/// `est` must come from a successful `hl_sharp_*` call and not be freed;
/// `out` must be valid for one double.
#[no_mangle]
pub unsafe extern "C" fn hl_sharp_value(
    est: *const HlSharpEstimate,
    out: *mut c_double,
) -> HlStatus {
    if est.is_null() || out.is_null() {
        return HlStatus::HlNullArgument;
    }
    *out = (*est).inner.value;
    HlStatus::HlOk
}

/// Minimizing angular mode (1 under mode monotonicity).
///
/// # Safety
/// `est` as in [`hl_sharp_value`]; `out` must be valid for one u32.
#[no_mangle]
pub unsafe extern "C" fn hl_sharp_mode(est: *const HlSharpEstimate, out: *mut u32) -> HlStatus {
    if est.is_null() || out.is_null() {
        return HlStatus::HlNullArgument;
    }
    *out = (*est).inner.mode;
    HlStatus::HlOk
}

/// Number of refinement-trace entries.
///
/// # Safety
/// `est` as in [`hl_sharp_value`]; `out` must be valid for one usize.
#[no_mangle]
pub unsafe extern "C" fn hl_sharp_trace_len(
    est: *const HlSharpEstimate,
    out: *mut usize,
) -> HlStatus {
    if est.is_null() || out.is_null() {
        return HlStatus::HlNullArgument;
    }
    *out = (*est).inner.trace.len();
    HlStatus::HlOk
}

/// One refinement-trace entry: truncation end, mesh size, discrete value.
///
/// # Safety
/// `est` as in [`hl_sharp_value`]; the three out pointers must each be valid
/// for one double.
#[no_mangle]
pub unsafe extern "C" fn hl_sharp_trace_entry(
    est: *const HlSharpEstimate,
    index: usize,
    out_t: *mut c_double,
    out_h: *mut c_double,
    out_value: *mut c_double,
) -> HlStatus {
    if est.is_null() || out_t.is_null() || out_h.is_null() || out_value.is_null() {
        return HlStatus::HlNullArgument;
    }
    let trace = &(*est).inner.trace;
    match trace.get(index) {
        Some(e) => {
            *out_t = e.t_end;
            *out_h = e.h;
            *out_value = e.value;
            HlStatus::HlOk
        }
        None => HlStatus::HlOutOfRange,
    }
}

/// Frees a sharp-constant handle. Null is a no-op.
///
/// # Safety
/// `est` must come from a successful `hl_sharp_*` call and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn hl_sharp_free(est: *mut HlSharpEstimate) {
    if !est.is_null() {
        drop(Box::from_raw(est));
    }
}

/// Lorentz norm ‖u‖_{p,q} of the step function given as parallel
/// value/measure arrays (q may be +∞). Divergent norms return +∞.
///
/// # Safety
/// `values` and `measures` must point to `len` readable doubles; `out` must
/// be valid for one double.
#[no_mangle]
pub unsafe extern "C" fn hl_lorentz_norm(
    values: *const c_double,
    measures: *const c_double,
    len: usize,
    p: c_double,
    q: c_double,
    out: *mut c_double,
) -> HlStatus {
    if values.is_null() || measures.is_null() || out.is_null() {
        return HlStatus::HlNullArgument;
    }
    let vs = std::slice::from_raw_parts(values, len);
    let ms = std::slice::from_raw_parts(measures, len);
    let pieces: Vec<(f64, f64)> = vs.iter().copied().zip(ms.iter().copied()).collect();
    let result = std::panic::catch_unwind(|| -> hardylab::Result<f64> {
        let step = StepFunction::new(pieces, 2)?.decreasing_rearrangement();
        let params = LorentzParams::new(p, q)?;
        step.lorentz_norm(params)
    });
    match result {
        Ok(Ok(norm)) => {
            *out = norm;
            HlStatus::HlOk
        }
        Ok(Err(e)) => classify(&e),
        Err(_) => HlStatus::HlNumericalFailure,
    }
}

/// Mode-1 quotient of the u_alpha family against the critical disk weight
/// with offset `a` ≥ 1.
///
/// # Safety
/// `out` must be valid for one double.
#[no_mangle]
pub unsafe extern "C" fn hl_quotient_u_alpha(
    alpha: c_double,
    a: c_double,
    out: *mut c_double,
) -> HlStatus {
    if out.is_null() {
        return HlStatus::HlNullArgument;
    }
    let result = std::panic::catch_unwind(|| -> hardylab::Result<f64> {
        let profile = hardylab::make_family(&TestFamily::UAlpha { alpha })?;
        let rep = hardylab::quotient(&profile, &Geometry::CriticalDisk { a })?;
        Ok(rep.quotient)
    });
    match result {
        Ok(Ok(v)) => {
            *out = v;
            HlStatus::HlOk
        }
        Ok(Err(e)) => classify(&e),
        Err(_) => HlStatus::HlNumericalFailure,
    }
}

/// Mode-1 quotient of the v_m family on the unit ball, dimension `dim` ≥ 3.
///
/// # Safety
/// `out` must be valid for one double.
#[no_mangle]
pub unsafe extern "C" fn hl_quotient_v_m(m: u32, dim: u32, out: *mut c_double) -> HlStatus {
    if out.is_null() {
        return HlStatus::HlNullArgument;
    }
    let result = std::panic::catch_unwind(|| -> hardylab::Result<f64> {
        let profile = hardylab::make_family(&TestFamily::VM { m, dim })?;
        let rep = hardylab::quotient(&profile, &Geometry::ClassicalBall { dim })?;
        Ok(rep.quotient)
    });
    match result {
        Ok(Ok(v)) => {
            *out = v;
            HlStatus::HlOk
        }
        Ok(Err(e)) => classify(&e),
        Err(_) => HlStatus::HlNumericalFailure,
    }
}
