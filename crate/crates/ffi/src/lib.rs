//! C ABI over `fatpoint-hilbert`.
//!
//! Every entry point returns an [`FphStatus`]; results go through out
//! pointers. A context carries the modulus, seed and trial count, and keeps
//! the message of the last failure, readable with [`fph_last_error`].
//! Strings handed out by the library are released with [`fph_string_free`].

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use fatpoint_hilbert::interpolation::{duality_residual, hpowlin_generic, hpts_generic, hpts_rank};
use fatpoint_hilbert::obstruction::ubda_generic;
use fatpoint_hilbert::{g, Error, FatPointConfig, Uple};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FphStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidModulus = 2,
    ModulusTooSmall = 3,
    InvalidConfig = 4,
    Precondition = 5,
    Degenerate = 6,
    Overflow = 7,
    Io = 8,
    Panic = 9,
}

/// Opaque handle.
pub struct FphContext {
    modulus: u64,
    seed: u64,
    trials: u32,
    last_error: CString,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FphUbdaSummary {
    pub bound: u64,
    pub direct: u64,
    pub only_linear: bool,
    pub steps: usize,
    pub aborts: u32,
}

fn status_of(e: &Error) -> FphStatus {
    match e {
        Error::InvalidModulus(_) => FphStatus::InvalidModulus,
        Error::ModulusTooSmall { .. } => FphStatus::ModulusTooSmall,
        Error::DimensionMismatch { .. }
        | Error::ZeroPoint(_)
        | Error::CoincidentPoints(..)
        | Error::LengthMismatch { .. }
        | Error::NonPositiveMultiplicity { .. }
        | Error::MalformedUple(_)
        | Error::PointOnSlicingHyperplane(_) => FphStatus::InvalidConfig,
        Error::DegenerateInducedConfig { .. } => FphStatus::Degenerate,
        Error::Precondition(_) | Error::CapExceeded { .. } => FphStatus::Precondition,
        Error::CacheIntegrity { .. } | Error::Io(_) | Error::Json(_) => FphStatus::Io,
    }
}

fn set_error(ctx: &mut FphContext, msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    ctx.last_error = CString::new(bytes).expect("nul bytes removed");
}

/// Runs `f` against the context, recording failures and containing panics.
unsafe fn with_ctx(
    ctx: *mut FphContext,
    f: impl FnOnce(&mut FphContext) -> Result<(), (FphStatus, String)>,
) -> FphStatus {
    let Some(ctx) = ctx.as_mut() else {
        return FphStatus::NullPointer;
    };
    match catch_unwind(AssertUnwindSafe(|| f(ctx))) {
        Ok(Ok(())) => {
            set_error(ctx, "");
            FphStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(ctx, msg);
            status
        }
        Err(_) => {
            set_error(ctx, "internal panic");
            FphStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (FphStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(what: &str) -> (FphStatus, String) {
    (FphStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_uple(entries: *const i64, len: usize) -> Result<Uple, (FphStatus, String)> {
    if len == 0 {
        return Ok(Uple::default());
    }
    if entries.is_null() {
        return Err(null_err("uple entries"));
    }
    Ok(Uple::new(slice::from_raw_parts(entries, len).to_vec()))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), (FphStatus, String)> {
    if out.is_null() {
        return Err(null_err("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Creates a context. `modulus` must be a prime below `2^32`; `trials ≥ 1`.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn fph_context_new(
    modulus: u64,
    seed: u64,
    trials: u32,
    out: *mut *mut FphContext,
) -> FphStatus {
    if out.is_null() {
        return FphStatus::NullPointer;
    }
    if fatpoint_hilbert::field::PrimeField::new(modulus).is_err() {
        return FphStatus::InvalidModulus;
    }
    if trials == 0 {
        return FphStatus::Precondition;
    }
    let ctx = Box::new(FphContext {
        modulus,
        seed,
        trials,
        last_error: CString::default(),
    });
    out.write(Box::into_raw(ctx));
    FphStatus::Ok
}

/// # Safety
/// `ctx` must come from [`fph_context_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fph_context_free(ctx: *mut FphContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Message of the last failed call on `ctx` (empty after a success). Owned
/// by the context and valid until its next call.
///
/// # Safety
/// `ctx` must be a live context or null.
#[no_mangle]
pub unsafe extern "C" fn fph_last_error(ctx: *const FphContext) -> *const c_char {
    match ctx.as_ref() {
        Some(c) => c.last_error.as_ptr(),
        None => ptr::null(),
    }
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn fph_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `G(A)_m` as a decimal string, plus whether a clamp fired.
///
/// # Safety
/// `mults` must point to `len` integers; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fph_g(
    ctx: *mut FphContext,
    n: u32,
    mults: *const i64,
    len: usize,
    m: u32,
    out_value: *mut *mut c_char,
    out_clamped: *mut bool,
) -> FphStatus {
    with_ctx(ctx, |_| {
        let a = read_uple(mults, len)?;
        if out_value.is_null() || out_clamped.is_null() {
            return Err(null_err("output pointer"));
        }
        let v = g(n, &a, m);
        out_clamped.write(v.clamped);
        out_value.write(to_c_string(v.value.to_string()));
        Ok(())
    })
}

/// `G(A)_m` when it fits in 64 bits; [`FphStatus::Overflow`] otherwise.
///
/// # Safety
/// As [`fph_g`].
#[no_mangle]
pub unsafe extern "C" fn fph_g_u64(
    ctx: *mut FphContext,
    n: u32,
    mults: *const i64,
    len: usize,
    m: u32,
    out: *mut u64,
) -> FphStatus {
    with_ctx(ctx, |_| {
        let a = read_uple(mults, len)?;
        let v = g(n, &a, m).value;
        let v = u64::try_from(&v)
            .map_err(|_| (FphStatus::Overflow, format!("G = {v} exceeds 64 bits")))?;
        write(out, v)
    })
}

/// Generic Hilbert function value (max over the context's trials).
///
/// # Safety
/// `mults` must point to `len` integers; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fph_hpts(
    ctx: *mut FphContext,
    n: u32,
    mults: *const i64,
    len: usize,
    m: u32,
    out: *mut u64,
) -> FphStatus {
    with_ctx(ctx, |c| {
        let a = read_uple(mults, len)?;
        let v = hpts_generic(n, &a, m, c.modulus, c.seed, c.trials).map_err(lib_err)?;
        write(out, v.value)
    })
}

/// Hilbert function of explicit points: `points` holds `len` rows of `n+1`
/// coordinates, row-major.
///
/// # Safety
/// `points` must point to `len * (n+1)` integers and `mults` to `len`.
#[no_mangle]
pub unsafe extern "C" fn fph_hpts_points(
    ctx: *mut FphContext,
    n: u32,
    points: *const u64,
    mults: *const i64,
    len: usize,
    m: u32,
    out: *mut u64,
) -> FphStatus {
    with_ctx(ctx, |c| {
        let a = read_uple(mults, len)?;
        let width = n as usize + 1;
        let rows = if len == 0 {
            Vec::new()
        } else if points.is_null() {
            return Err(null_err("points"));
        } else {
            slice::from_raw_parts(points, len * width)
                .chunks(width)
                .map(<[u64]>::to_vec)
                .collect()
        };
        let config = FatPointConfig::new(n, c.modulus, rows, a).map_err(lib_err)?;
        write(out, hpts_rank(&config, m).map_err(lib_err)?.value)
    })
}

/// Codimension in degree `m` of the ideal of random linear forms raised to `powers`.
///
/// # Safety
/// `powers` must point to `len` integers; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fph_hpowlin(
    ctx: *mut FphContext,
    n: u32,
    powers: *const i64,
    len: usize,
    m: u32,
    out: *mut u64,
) -> FphStatus {
    with_ctx(ctx, |c| {
        let a = read_uple(powers, len)?;
        write(
            out,
            hpowlin_generic(n, &a, m, c.modulus, c.seed)
                .map_err(lib_err)?
                .value,
        )
    })
}

/// `hpts - (dim R_m - hpowlin)` for one random point set; zero when
/// duality holds.
///
/// # Safety
/// `mults` must point to `len` integers; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fph_duality_residual(
    ctx: *mut FphContext,
    n: u32,
    mults: *const i64,
    len: usize,
    m: u32,
    out: *mut i64,
) -> FphStatus {
    with_ctx(ctx, |c| {
        let a = read_uple(mults, len)?;
        write(
            out,
            duality_residual(n, &a, m, c.modulus, c.seed)
                .map_err(lib_err)?
                .residual,
        )
    })
}

/// Obstruction bound for random points. When `out_json` is non-null it
/// receives the full report, to be released with [`fph_string_free`].
///
/// # Safety
/// `mults` must point to `len` integers; `out` must be valid; `out_json`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn fph_ubda(
    ctx: *mut FphContext,
    n: u32,
    mults: *const i64,
    len: usize,
    m: u32,
    out: *mut FphUbdaSummary,
    out_json: *mut *mut c_char,
) -> FphStatus {
    with_ctx(ctx, |c| {
        let a = read_uple(mults, len)?;
        if out.is_null() {
            return Err(null_err("output pointer"));
        }
        let r = ubda_generic(n, &a, m, c.modulus, c.seed).map_err(lib_err)?;
        if !out_json.is_null() {
            let json = serde_json::to_string(&r).map_err(|e| (FphStatus::Io, e.to_string()))?;
            out_json.write(to_c_string(json));
        }
        out.write(FphUbdaSummary {
            bound: r.bound,
            direct: r.direct_h.value,
            only_linear: r.only_linear,
            steps: r.steps.len(),
            aborts: r.aborts,
        });
        Ok(())
    })
}
