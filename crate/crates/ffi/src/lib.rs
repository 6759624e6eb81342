//! C ABI for the `pdrich` library.
//!
//! Every function returns a [`PdrichStatus`] and writes results through out
//! pointers. Models and pmfs are opaque heap handles released with their
//! `_free` function. After a failure, [`pdrich_last_error`] gives a message
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pdrich::asymptotics::{self, LimitLaw};
use pdrich::conditional::{self, IntervalMethod, PredictionQuery};
use pdrich::fit::{fit_params, FitBounds};
use pdrich::{prior, stable, Error, PDParams, PartitionData, Pmf};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdrichStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    InvalidArgument = 3,
    CapExceeded = 4,
    NumericalFailure = 5,
    SamplerStarvation = 6,
    InsufficientSample = 7,
    Unidentifiable = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// Prior parameters `(alpha, theta)`.
pub struct PdrichModel {
    params: PDParams,
}

/// A pmf on `support_min .. support_min + len`.
pub struct PdrichPmf {
    pmf: Pmf,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PdrichStatus {
    match e {
        Error::InvalidParams(_) => PdrichStatus::InvalidParams,
        Error::InvalidArgument(_) | Error::Input { .. } | Error::Io(_) => PdrichStatus::InvalidArgument,
        Error::CapExceeded { .. } => PdrichStatus::CapExceeded,
        Error::Quadrature(_) => PdrichStatus::NumericalFailure,
        Error::SamplerStarvation { .. } => PdrichStatus::SamplerStarvation,
        Error::InsufficientSample(_) => PdrichStatus::InsufficientSample,
        Error::Unidentifiable(_) => PdrichStatus::Unidentifiable,
    }
}

struct Failure(PdrichStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PdrichStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> PdrichStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PdrichStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PdrichStatus::Panic
        }
    }
}

unsafe fn model<'a>(m: *const PdrichModel) -> Result<&'a PdrichModel, Failure> {
    m.as_ref().ok_or_else(|| null("model"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message describing the last failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pdrich_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pdrich_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn pdrich_model_new(alpha: f64, theta: f64, out: *mut *mut PdrichModel) -> PdrichStatus {
    guard(|| {
        let params = PDParams::new(alpha, theta)?;
        write(out, Box::into_raw(Box::new(PdrichModel { params })))
    })
}

/// Fit `(alpha, theta)` to species counts by maximizing the partition
/// likelihood.
///
/// # Safety
/// `counts` must point to `len` readable values; `out` as in [`pdrich_model_new`].
#[no_mangle]
pub unsafe extern "C" fn pdrich_model_fit(counts: *const u64, len: usize, out: *mut *mut PdrichModel) -> PdrichStatus {
    guard(|| {
        if counts.is_null() {
            return Err(null("counts"));
        }
        let data = PartitionData::new(std::slice::from_raw_parts(counts, len).to_vec())?;
        let fit = fit_params(&data, FitBounds::default(), 1e-8)?;
        write(out, Box::into_raw(Box::new(PdrichModel { params: fit.params })))
    })
}

/// # Safety
/// `model` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pdrich_model_free(model: *mut PdrichModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle; `alpha` and `theta` writable or null.
#[no_mangle]
pub unsafe extern "C" fn pdrich_model_params(model: *const PdrichModel, alpha: *mut f64, theta: *mut f64) -> PdrichStatus {
    guard(|| {
        let m = self::model(model)?;
        write(alpha, m.params.alpha())?;
        write(theta, m.params.theta())
    })
}

unsafe fn query(model: *const PdrichModel, n: usize, k: usize, m: usize) -> Result<PredictionQuery, Failure> {
    Ok(PredictionQuery::new(self::model(model)?.params, n, k, m)?)
}

/// `E K_n`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_kn_mean(model: *const PdrichModel, n: usize, out: *mut f64) -> PdrichStatus {
    guard(|| write(out, prior::kn_mean(&self::model(model)?.params, n)?))
}

/// Expected number of new species in `m` further draws given `k` species in `n`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_km_mean(model: *const PdrichModel, n: usize, k: usize, m: usize, out: *mut f64) -> PdrichStatus {
    guard(|| write(out, conditional::km_mean(&query(model, n, k, m)?)))
}

/// `E K_m^r` given `K_n = k`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_km_moment(
    model: *const PdrichModel,
    n: usize,
    k: usize,
    m: usize,
    r: usize,
    out: *mut f64,
) -> PdrichStatus {
    guard(|| write(out, conditional::km_moment(&query(model, n, k, m)?, r)?))
}

/// Probability that the next draw is a new species.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_new_species_prob(model: *const PdrichModel, n: usize, k: usize, out: *mut f64) -> PdrichStatus {
    guard(|| write(out, conditional::new_species_prob(&query(model, n, k, 1)?)?))
}

/// Shortest interval `[lo, hi]` with exact mass at least `level`, for `m <= cap`.
///
/// # Safety
/// `model` must be a live handle and the three outputs writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_credible_interval(
    model: *const PdrichModel,
    n: usize,
    k: usize,
    m: usize,
    level: f64,
    cap: usize,
    lo: *mut usize,
    hi: *mut usize,
    coverage: *mut f64,
) -> PdrichStatus {
    guard(|| {
        let ci = conditional::credible_interval(&query(model, n, k, m)?, level, IntervalMethod::Exact { cap })?;
        write(lo, ci.lo)?;
        write(hi, ci.hi)?;
        write(coverage, ci.coverage)
    })
}

unsafe fn law(model: *const PdrichModel, n: usize, k: usize) -> Result<LimitLaw, Failure> {
    Ok(LimitLaw::new(self::model(model)?.params, n, k)?)
}

/// `r`-th moment of the limit of `K_m / m^alpha`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_limit_moment(model: *const PdrichModel, n: usize, k: usize, r: usize, out: *mut f64) -> PdrichStatus {
    guard(|| write(out, asymptotics::limit_moment(&law(model, n, k)?, r)))
}

/// Density of the limit of `K_m / m^alpha` at `z`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_limit_density(model: *const PdrichModel, n: usize, k: usize, z: f64, out: *mut f64) -> PdrichStatus {
    guard(|| write(out, asymptotics::limit_density(&law(model, n, k)?, z)?))
}

/// Fill `out[0..count]` with draws of the limit variable.
///
/// # Safety
/// `model` must be a live handle and `out` must have room for `count` values.
#[no_mangle]
pub unsafe extern "C" fn pdrich_limit_sample(
    model: *const PdrichModel,
    n: usize,
    k: usize,
    count: usize,
    seed: u64,
    out: *mut f64,
) -> PdrichStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output buffer"));
        }
        let draws = asymptotics::sample_limit(&law(model, n, k)?, count, seed)?;
        ptr::copy_nonoverlapping(draws.as_ptr(), out, count);
        Ok(())
    })
}

/// Positive alpha-stable density with Laplace transform `exp(-s^alpha)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_stable_density(alpha: f64, x: f64, out: *mut f64) -> PdrichStatus {
    guard(|| write(out, stable::stable_density(alpha, x)?))
}

/// Mittag-Leffler density.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_ml_density(alpha: f64, z: f64, out: *mut f64) -> PdrichStatus {
    guard(|| write(out, stable::ml_density(alpha, z)?))
}

unsafe fn new_pmf(pmf: Pmf, out: *mut *mut PdrichPmf) -> Result<(), Failure> {
    write(out, Box::into_raw(Box::new(PdrichPmf { pmf })))
}

/// Law of `K_n`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_kn_pmf(model: *const PdrichModel, n: usize, out: *mut *mut PdrichPmf) -> PdrichStatus {
    guard(|| new_pmf(prior::kn_pmf(&self::model(model)?.params, n)?, out))
}

/// Law of the number of new species `K_m` given `K_n = k`; fails with
/// `CapExceeded` when `m > cap`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_km_pmf(
    model: *const PdrichModel,
    n: usize,
    k: usize,
    m: usize,
    cap: usize,
    out: *mut *mut PdrichPmf,
) -> PdrichStatus {
    guard(|| {
        if m > cap {
            return Err(Error::CapExceeded { m, cap }.into());
        }
        new_pmf(conditional::km_pmf(&query(model, n, k, m)?)?, out)
    })
}

/// Law of the number of further draws `S_m` that land in new species.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pdrich_sm_pmf(model: *const PdrichModel, n: usize, k: usize, m: usize, out: *mut *mut PdrichPmf) -> PdrichStatus {
    guard(|| new_pmf(conditional::sm_pmf(&query(model, n, k, m)?), out))
}

/// # Safety
/// `pmf` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pdrich_pmf_len(pmf: *const PdrichPmf) -> usize {
    pmf.as_ref().map_or(0, |p| p.pmf.len())
}

/// # Safety
/// `pmf` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pdrich_pmf_support_min(pmf: *const PdrichPmf) -> usize {
    pmf.as_ref().map_or(0, |p| p.pmf.support_min())
}

/// Copy the probabilities into `buf`, which must hold at least
/// `pdrich_pmf_len(pmf)` values.
///
/// # Safety
/// `pmf` must be a live handle and `buf` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn pdrich_pmf_copy(pmf: *const PdrichPmf, buf: *mut f64, len: usize) -> PdrichStatus {
    guard(|| {
        let p = pmf.as_ref().ok_or_else(|| null("pmf"))?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        let probs = p.pmf.probs();
        if len < probs.len() {
            return Err(Failure(
                PdrichStatus::BufferTooSmall,
                format!("buffer holds {len} values, pmf has {}", probs.len()),
            ));
        }
        ptr::copy_nonoverlapping(probs.as_ptr(), buf, probs.len());
        Ok(())
    })
}

/// # Safety
/// `pmf` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pdrich_pmf_free(pmf: *mut PdrichPmf) {
    if !pmf.is_null() {
        drop(Box::from_raw(pmf));
    }
}
