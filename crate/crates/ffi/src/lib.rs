//! C ABI for `subband-cdeq`.
//!
//! Every fallible call returns a [`CdeqStatus`]; on failure a message is kept
//! per thread and can be read with [`cdeq_last_error`]. Designs and
//! equalizers are opaque handles released with their `_free` functions.
//! Complex samples cross the boundary as interleaved `re, im` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use subband_cdeq::channel::compute_alpha;
use subband_cdeq::design::{
    design_all_bands, design_fullband, DesignLayout, EqualizerDesign, FrequencyGrid, WeightingSpec,
};
use subband_cdeq::equalizer::{Equalizer, FullbandEqualizer, SubbandEqualizer};
use subband_cdeq::filterbank::{design_rrc, FilterBankConfig};
use subband_cdeq::link::complexity_report;
use subband_cdeq::optim::OptimizerSettings;
use subband_cdeq::{Complex64, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdeqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Contract = 3,
    InfeasibleTarget = 4,
    AmbiguousPhase = 5,
    Divergence = 6,
    DesignFailure = 7,
    SyncFailure = 8,
    Format = 9,
    Io = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdeqWeightKind {
    Uniform = 0,
    RcSquared = 1,
}

/// Design inputs. `bands == 0` requests a single full-band cascade.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CdeqDesignParams {
    pub alpha: f64,
    pub bands: usize,
    pub weight_kind: CdeqWeightKind,
    /// Weighting cutoff in units of π.
    pub weight_cutoff_pi: f64,
    pub weight_roll_off: f64,
    pub grid_points: usize,
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CdeqComplexity {
    pub n_iir: usize,
    pub bands: usize,
    pub length_factor: usize,
    pub kappa: usize,
    pub c_iir: f64,
    pub c_fb_iir: f64,
    pub m_opt: f64,
    pub c_opt: f64,
}

/// Opaque equalizer design.
pub struct CdeqDesign {
    inner: EqualizerDesign,
}

/// Opaque streaming equalizer.
pub struct CdeqEqualizer {
    inner: Box<dyn Equalizer>,
    /// Output may lag input by less than this many samples.
    block: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CdeqStatus {
    match e {
        Error::InvalidParameter(_) => CdeqStatus::InvalidParameter,
        Error::Contract(_) => CdeqStatus::Contract,
        Error::InfeasibleTarget(_) => CdeqStatus::InfeasibleTarget,
        Error::AmbiguousPhase => CdeqStatus::AmbiguousPhase,
        Error::Divergence { .. } => CdeqStatus::Divergence,
        Error::DesignFailure { .. } => CdeqStatus::DesignFailure,
        Error::SyncFailure { .. } => CdeqStatus::SyncFailure,
        Error::Format(_) => CdeqStatus::Format,
        Error::Io(_) => CdeqStatus::Io,
    }
}

/// Runs `f`, converting errors and panics into a status plus message.
fn guard<F>(f: F) -> CdeqStatus
where
    F: FnOnce() -> Result<(), CdeqStatusError>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CdeqStatus::Ok,
        Ok(Err(CdeqStatusError(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            CdeqStatus::Panic
        }
    }
}

struct CdeqStatusError(CdeqStatus, String);

impl From<Error> for CdeqStatusError {
    fn from(e: Error) -> Self {
        CdeqStatusError(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> CdeqStatusError {
    CdeqStatusError(CdeqStatus::NullPointer, format!("{what} is null"))
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, CdeqStatusError> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| {
        CdeqStatusError(
            CdeqStatus::InvalidUtf8,
            "path is not valid UTF-8".to_string(),
        )
    })?;
    Ok(Path::new(s))
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cdeq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Dispersion coefficient `α` for a fiber (`lambda0` and `length` in meters,
/// dispersion in ps/nm/km, sample rate in samples/s).
///
/// # Safety
/// `out` must be a valid pointer to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn cdeq_compute_alpha(
    lambda0: f64,
    dispersion_ps_nm_km: f64,
    length: f64,
    sample_rate: f64,
    out: *mut f64,
) -> CdeqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = compute_alpha(lambda0, dispersion_ps_nm_km, length, sample_rate)?;
        Ok(())
    })
}

/// Multiplication counts for a full-band order `n_iir` and an `(m, k)` bank.
///
/// # Safety
/// `out` must be a valid pointer to a writable `CdeqComplexity`.
#[no_mangle]
pub unsafe extern "C" fn cdeq_complexity(
    n_iir: usize,
    m: usize,
    k: usize,
    out: *mut CdeqComplexity,
) -> CdeqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if n_iir == 0 || m == 0 || k == 0 {
            return Err(CdeqStatusError(
                CdeqStatus::InvalidParameter,
                "all arguments must be positive".into(),
            ));
        }
        let r = complexity_report(n_iir, m, k);
        *out = CdeqComplexity {
            n_iir: r.n_iir,
            bands: r.bands,
            length_factor: r.length_factor,
            kappa: r.kappa,
            c_iir: r.c_iir,
            c_fb_iir: r.c_fb_iir,
            m_opt: r.m_opt,
            c_opt: r.c_opt,
        };
        Ok(())
    })
}

/// Fills `out` with the reference settings (32 bands, raised-cosine weighting
/// at 0.6π with roll-off 0.1, 2048 grid points). `alpha` is left at zero.
///
/// # Safety
/// `out` must be a valid pointer to a writable `CdeqDesignParams`.
#[no_mangle]
pub unsafe extern "C" fn cdeq_design_params_default(out: *mut CdeqDesignParams) -> CdeqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = OptimizerSettings::default();
        *out = CdeqDesignParams {
            alpha: 0.0,
            bands: 32,
            weight_kind: CdeqWeightKind::RcSquared,
            weight_cutoff_pi: 0.6,
            weight_roll_off: 0.1,
            grid_points: FrequencyGrid::DEFAULT_POINTS,
            max_iterations: s.max_iterations,
            gradient_tolerance: s.gradient_tolerance,
        };
        Ok(())
    })
}

/// Designs an equalizer. On success `*out` owns a new handle.
///
/// # Safety
/// `params` must point to a valid `CdeqDesignParams`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdeq_design_new(
    params: *const CdeqDesignParams,
    out: *mut *mut CdeqDesign,
) -> CdeqStatus {
    guard(|| {
        if params.is_null() {
            return Err(null("params"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let p = *params;
        let weighting = match p.weight_kind {
            CdeqWeightKind::Uniform => WeightingSpec::uniform(),
            CdeqWeightKind::RcSquared => WeightingSpec::rc_squared(
                p.weight_cutoff_pi * std::f64::consts::PI,
                p.weight_roll_off,
            )?,
        };
        let grid = FrequencyGrid::new(p.grid_points)?;
        let settings = OptimizerSettings {
            max_iterations: p.max_iterations,
            gradient_tolerance: p.gradient_tolerance,
            ..OptimizerSettings::default()
        };
        settings.validate()?;
        let inner = if p.bands == 0 {
            design_fullband(p.alpha, &weighting, &grid, &settings)?
        } else {
            design_all_bands(
                p.alpha,
                &FilterBankConfig::new(p.bands, 1)?,
                &weighting,
                &grid,
                &settings,
            )?
        };
        *out = Box::into_raw(Box::new(CdeqDesign { inner }));
        Ok(())
    })
}

/// Loads a coefficient file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdeq_design_load(
    path: *const c_char,
    out: *mut *mut CdeqDesign,
) -> CdeqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = EqualizerDesign::load(path_arg(path)?)?;
        *out = Box::into_raw(Box::new(CdeqDesign { inner }));
        Ok(())
    })
}

/// Writes a coefficient file.
///
/// # Safety
/// `design` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cdeq_design_save(
    design: *const CdeqDesign,
    path: *const c_char,
) -> CdeqStatus {
    guard(|| {
        let d = design.as_ref().ok_or_else(|| null("design"))?;
        d.inner.save(path_arg(path)?)?;
        Ok(())
    })
}

/// Number of cascades (1 for a full-band design); 0 for a NULL handle.
///
/// # Safety
/// `design` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdeq_design_band_count(design: *const CdeqDesign) -> usize {
    design.as_ref().map_or(0, |d| d.inner.bands.len())
}

/// Total number of first-order sections; 0 for a NULL handle.
///
/// # Safety
/// `design` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdeq_design_total_sections(design: *const CdeqDesign) -> usize {
    design.as_ref().map_or(0, |d| d.inner.total_sections())
}

/// Releases a design. NULL is ignored.
///
/// # Safety
/// `design` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cdeq_design_free(design: *mut CdeqDesign) {
    if !design.is_null() {
        drop(Box::from_raw(design));
    }
}

/// Builds a streaming equalizer. `length_factor` and `prototype_roll_off`
/// describe the filter-bank prototype and are ignored for full-band designs.
///
/// # Safety
/// `design` must be a live handle; `out` must be writable. The equalizer
/// copies what it needs, so the design may be freed afterwards.
#[no_mangle]
pub unsafe extern "C" fn cdeq_equalizer_new(
    design: *const CdeqDesign,
    length_factor: usize,
    prototype_roll_off: f64,
    out: *mut *mut CdeqEqualizer,
) -> CdeqStatus {
    guard(|| {
        let d = design.as_ref().ok_or_else(|| null("design"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let eq = match d.inner.layout {
            DesignLayout::Fullband => CdeqEqualizer {
                inner: Box::new(FullbandEqualizer::new(&d.inner)?),
                block: 1,
            },
            DesignLayout::Subband { bands } => {
                let proto = design_rrc(bands, length_factor, prototype_roll_off)?;
                CdeqEqualizer {
                    inner: Box::new(SubbandEqualizer::new(&d.inner, &proto)?),
                    block: proto.config.decimation(),
                }
            }
        };
        *out = Box::into_raw(Box::new(eq));
        Ok(())
    })
}

/// Nominal delay in samples; 0 for a NULL handle.
///
/// # Safety
/// `eq` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdeq_equalizer_latency(eq: *const CdeqEqualizer) -> usize {
    eq.as_ref().map_or(0, |e| e.inner.latency())
}

/// Filters `n_samples` complex samples (`2·n_samples` doubles). Up to
/// `n_samples + block − 1` samples are written, where `block` is 1 for a
/// full-band equalizer and `M/2` for a filter-bank one; `output_capacity`
/// (in complex samples) must be at least `n_samples + block`.
///
/// # Safety
/// `input` must hold `2·n_samples` doubles, `output` room for
/// `2·output_capacity` doubles, and `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdeq_equalizer_process(
    eq: *mut CdeqEqualizer,
    input: *const f64,
    n_samples: usize,
    output: *mut f64,
    output_capacity: usize,
    written: *mut usize,
) -> CdeqStatus {
    guard(|| {
        let e = eq.as_mut().ok_or_else(|| null("equalizer"))?;
        if written.is_null() {
            return Err(null("written"));
        }
        if n_samples > 0 && (input.is_null() || output.is_null()) {
            return Err(null("sample buffer"));
        }
        if output_capacity < n_samples + e.block {
            return Err(CdeqStatusError(
                CdeqStatus::Contract,
                format!(
                    "output capacity {output_capacity} below {}",
                    n_samples + e.block
                ),
            ));
        }
        let x: Vec<Complex64> = if n_samples == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(input, 2 * n_samples)
                .chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect()
        };
        let y = e.inner.process(&x)?;
        if !y.is_empty() {
            let dst = std::slice::from_raw_parts_mut(output, 2 * y.len());
            for (d, v) in dst.chunks_exact_mut(2).zip(&y) {
                d[0] = v.re;
                d[1] = v.im;
            }
        }
        *written = y.len();
        Ok(())
    })
}

/// Releases an equalizer. NULL is ignored.
///
/// # Safety
/// `eq` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cdeq_equalizer_free(eq: *mut CdeqEqualizer) {
    if !eq.is_null() {
        drop(Box::from_raw(eq));
    }
}
