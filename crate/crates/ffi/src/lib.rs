//! C ABI for `entrobound`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` functions
//! and released by the matching `*_free`. Every fallible call returns an
//! [`EntroboundStatus`]; on failure the message is available from
//! [`entrobound_last_error`] on the same thread until the next call.
//!
//! Complex arrays are interleaved `re, im` doubles; matrices are row-major.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use entrobound::bounds::{check_pair_bound, f_bar, f_mixed, phi, phi_bar};
use entrobound::entropy::renyi_entropy;
use entrobound::harness::{
    builtin_discrimination_scenario, emit_report, parse_scenario, run_campaign, verify_scenario,
    CampaignConfig, ReportFormat,
};
use entrobound::measurement::{
    outcome_distribution, pure_to_density, validate_measurement, OutcomeDistribution,
};
use entrobound::naimark::{dilate, verify_dilation, NaimarkDilation};
use entrobound::{
    ComplexMatrix, DensityMatrix, Error, HermitianOperator, Measurement, MeasurementKind,
    PureState, RenyiOrder, C64,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntroboundStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// An object failed its validator (not PSD, incomplete, not normalized...).
    Validation = 3,
    /// A numerical routine could not produce a result.
    Numeric = 4,
    Parse = 5,
    Io = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

pub struct EntroboundMeasurement {
    inner: Measurement,
}

pub struct EntroboundState {
    inner: DensityMatrix,
    pure: Option<PureState>,
}

pub struct EntroboundDilation {
    inner: NaimarkDilation,
}

/// Conjugate-order pair check on one state.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EntroboundPairCheck {
    pub alpha: f64,
    pub beta: f64,
    pub entropy_alpha: f64,
    pub entropy_beta: f64,
    /// `f(M,N|rho)`
    pub f: f64,
    /// `fbar(M,N)`
    pub f_bar: f64,
    /// `H_alpha + H_beta + 2 ln f`
    pub slack_state_dependent: f64,
    /// `H_alpha + H_beta + 2 ln fbar`
    pub slack_state_independent: f64,
    /// Both relations and `f <= fbar` hold within `1e-9`.
    pub passed: c_int,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Failure {
    Null(&'static str),
    BufferTooSmall { needed: usize, given: usize },
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn status_of(e: &Error) -> EntroboundStatus {
    use EntroboundStatus as S;
    match e.root() {
        Error::Shape(_)
        | Error::NonFinite(_)
        | Error::DimensionMismatch { .. }
        | Error::LabelCount { .. }
        | Error::InvalidOrder(_)
        | Error::InvalidParameter(_) => S::InvalidArgument,
        Error::NotHermitian { .. }
        | Error::NotPsd { .. }
        | Error::EigenvalueAboveOne { .. }
        | Error::Completeness { .. }
        | Error::NotOrthogonal { .. }
        | Error::EmptyMeasurement
        | Error::NotNormalized { .. }
        | Error::Trace { .. }
        | Error::NotIsometry { .. }
        | Error::NotContraction { .. }
        | Error::NotProjective
        | Error::Scenario(_) => S::Validation,
        Error::NegativeProbability { .. }
        | Error::ProbabilitySum { .. }
        | Error::Completion(_)
        | Error::Singular(_)
        | Error::NoAdmissiblePair => S::Numeric,
        Error::Parse(_) => S::Parse,
        Error::Io(_) => S::Io,
        Error::At { .. } => unreachable!("root strips locations"),
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EntroboundStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EntroboundStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            EntroboundStatus::NullPointer
        }
        Ok(Err(Failure::BufferTooSmall { needed, given })) => {
            set_last_error(format!("buffer holds {given} values, {needed} needed"));
            EntroboundStatus::BufferTooSmall
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            EntroboundStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn doubles<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_doubles<'a>(
    p: *mut f64,
    len: usize,
    what: &'static str,
) -> Result<&'a mut [f64], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::Lib(Error::InvalidParameter(format!("{what} is not UTF-8: {e}"))))
}

fn complex(data: &[f64]) -> Vec<C64> {
    data.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect()
}

fn square(data: &[f64], dim: usize) -> Result<ComplexMatrix, Error> {
    ComplexMatrix::from_row_major(dim, dim, complex(data))
}

fn order(alpha: f64) -> Result<RenyiOrder, Error> {
    RenyiOrder::new(alpha)
}

fn give<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    let slot = unsafe { out_ref(out, "out")? };
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let slot = unsafe { out_ref(out, "out")? };
    *slot = CString::new(s)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?
        .into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn entrobound_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn entrobound_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a measurement from `outcomes` consecutive `dim x dim` complex
/// matrices (`outcomes * dim * dim * 2` doubles). `projective` nonzero
/// additionally requires orthogonal projectors.
#[no_mangle]
pub unsafe extern "C" fn entrobound_measurement_new(
    elements: *const f64,
    dim: usize,
    outcomes: usize,
    projective: c_int,
    out: *mut *mut EntroboundMeasurement,
) -> EntroboundStatus {
    guard(|| {
        let stride = dim * dim * 2;
        let data = doubles(elements, stride * outcomes, "elements")?;
        let ops = (0..outcomes)
            .map(|i| HermitianOperator::new(square(&data[i * stride..(i + 1) * stride], dim)?))
            .collect::<Result<Vec<_>, _>>()?;
        let kind = if projective != 0 {
            MeasurementKind::Pvm
        } else {
            MeasurementKind::Povm
        };
        let inner = validate_measurement(ops, kind)?;
        give(out, EntroboundMeasurement { inner })
    })
}

#[no_mangle]
pub unsafe extern "C" fn entrobound_measurement_free(m: *mut EntroboundMeasurement) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of the measured system, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn entrobound_measurement_dim(m: *const EntroboundMeasurement) -> usize {
    m.as_ref().map_or(0, |m| m.inner.dim())
}

#[no_mangle]
pub unsafe extern "C" fn entrobound_measurement_outcomes(m: *const EntroboundMeasurement) -> usize {
    m.as_ref().map_or(0, |m| m.inner.outcome_count())
}

/// Pure state from `dim` complex amplitudes; the norm must be 1 within 1e-10.
#[no_mangle]
pub unsafe extern "C" fn entrobound_state_pure(
    amplitudes: *const f64,
    dim: usize,
    out: *mut *mut EntroboundState,
) -> EntroboundStatus {
    guard(|| {
        let psi = PureState::new(complex(doubles(amplitudes, dim * 2, "amplitudes")?))?;
        give(
            out,
            EntroboundState {
                inner: pure_to_density(&psi),
                pure: Some(psi),
            },
        )
    })
}

/// Density matrix from a `dim x dim` complex matrix.
#[no_mangle]
pub unsafe extern "C" fn entrobound_state_mixed(
    matrix: *const f64,
    dim: usize,
    out: *mut *mut EntroboundState,
) -> EntroboundStatus {
    guard(|| {
        let rho =
            DensityMatrix::from_matrix(square(doubles(matrix, dim * dim * 2, "matrix")?, dim)?)?;
        give(
            out,
            EntroboundState {
                inner: rho,
                pure: None,
            },
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn entrobound_state_free(s: *mut EntroboundState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Rényi entropy of order `alpha` (`INFINITY` for the min-entropy) of a
/// probability vector.
#[no_mangle]
pub unsafe extern "C" fn entrobound_renyi_entropy(
    p: *const f64,
    len: usize,
    alpha: f64,
    out: *mut f64,
) -> EntroboundStatus {
    guard(|| {
        let dist = OutcomeDistribution::new(doubles(p, len, "p")?.to_vec())?;
        *out_ref(out, "out")? = renyi_entropy(dist.probabilities(), order(alpha)?);
        Ok(())
    })
}

/// Writes `tr(M_i rho)` for every outcome into `out` (`len` at least the
/// outcome count).
#[no_mangle]
pub unsafe extern "C" fn entrobound_probabilities(
    m: *const EntroboundMeasurement,
    state: *const EntroboundState,
    out: *mut f64,
    len: usize,
) -> EntroboundStatus {
    guard(|| {
        let m = borrow(m, "measurement")?;
        let s = borrow(state, "state")?;
        let needed = m.inner.outcome_count();
        if len < needed {
            return Err(Failure::BufferTooSmall { needed, given: len });
        }
        let p = outcome_distribution(&m.inner, &s.inner)?;
        out_doubles(out, needed, "out")?.copy_from_slice(p.probabilities());
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn entrobound_f_bar(
    m: *const EntroboundMeasurement,
    n: *const EntroboundMeasurement,
    out: *mut f64,
) -> EntroboundStatus {
    guard(|| {
        let v = f_bar(&borrow(m, "m")?.inner, &borrow(n, "n")?.inner)?;
        *out_ref(out, "out")? = v.value;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn entrobound_f_mixed(
    m: *const EntroboundMeasurement,
    n: *const EntroboundMeasurement,
    state: *const EntroboundState,
    out: *mut f64,
) -> EntroboundStatus {
    guard(|| {
        let v = f_mixed(
            &borrow(m, "m")?.inner,
            &borrow(n, "n")?.inner,
            &borrow(state, "state")?.inner,
        )?;
        *out_ref(out, "out")? = v.value;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn entrobound_phi(
    m: *const EntroboundMeasurement,
    state: *const EntroboundState,
    out: *mut f64,
) -> EntroboundStatus {
    guard(|| {
        let v = phi(&borrow(m, "m")?.inner, &borrow(state, "state")?.inner)?;
        *out_ref(out, "out")? = v.value;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn entrobound_phi_bar(
    m: *const EntroboundMeasurement,
    out: *mut f64,
) -> EntroboundStatus {
    guard(|| {
        *out_ref(out, "out")? = phi_bar(&borrow(m, "m")?.inner).value;
        Ok(())
    })
}

/// Pair relations at order `alpha` (> 1/2, finite) and its conjugate.
#[no_mangle]
pub unsafe extern "C" fn entrobound_check_pair(
    m: *const EntroboundMeasurement,
    n: *const EntroboundMeasurement,
    state: *const EntroboundState,
    alpha: f64,
    out: *mut EntroboundPairCheck,
) -> EntroboundStatus {
    guard(|| {
        let r = check_pair_bound(
            &borrow(m, "m")?.inner,
            &borrow(n, "n")?.inner,
            &borrow(state, "state")?.inner,
            order(alpha)?,
        )?;
        let slack = |name: &str| r.inequality(name).map_or(f64::NAN, |i| i.slack);
        let bound = |k| {
            r.bounds
                .iter()
                .find(|b| b.kind == k)
                .map_or(f64::NAN, |b| b.value)
        };
        *out_ref(out, "out")? = EntroboundPairCheck {
            alpha: r.alpha.value(),
            beta: r.beta.map_or(f64::NAN, |b| b.value()),
            entropy_alpha: r.entropy_alpha,
            entropy_beta: r.entropy_beta.unwrap_or(f64::NAN),
            f: bound(entrobound::bounds::BoundKind::FMixed),
            f_bar: bound(entrobound::bounds::BoundKind::FBar),
            slack_state_dependent: slack("Thm5"),
            slack_state_independent: slack("Cor7"),
            passed: r.passed() as c_int,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn entrobound_dilate(
    m: *const EntroboundMeasurement,
    out: *mut *mut EntroboundDilation,
) -> EntroboundStatus {
    guard(|| {
        let inner = dilate(&borrow(m, "measurement")?.inner)?;
        give(out, EntroboundDilation { inner })
    })
}

#[no_mangle]
pub unsafe extern "C" fn entrobound_dilation_free(d: *mut EntroboundDilation) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Dimension of the enlarged space, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn entrobound_dilation_dim(d: *const EntroboundDilation) -> usize {
    d.as_ref().map_or(0, |d| d.inner.enlarged_dim())
}

/// Copies projector `index` (`D x D` complex, `2 D^2` doubles) into `out`.
#[no_mangle]
pub unsafe extern "C" fn entrobound_dilation_projector(
    d: *const EntroboundDilation,
    index: usize,
    out: *mut f64,
    len: usize,
) -> EntroboundStatus {
    guard(|| {
        let d = borrow(d, "dilation")?;
        let projectors = d.inner.projectors().elements();
        let p = projectors.get(index).ok_or_else(|| {
            Error::InvalidParameter(format!("projector {index} of {}", projectors.len()))
        })?;
        let needed = p.dim() * p.dim() * 2;
        if len < needed {
            return Err(Failure::BufferTooSmall { needed, given: len });
        }
        let dst = out_doubles(out, needed, "out")?;
        for (k, z) in p.matrix().as_slice().iter().enumerate() {
            dst[2 * k] = z.re;
            dst[2 * k + 1] = z.im;
        }
        Ok(())
    })
}

/// Runs every dilation invariant on `state` (its support eigenvectors when
/// mixed). `companion` may be NULL for the computational basis. Writes the
/// largest residual and whether all invariants hold within 1e-9.
#[no_mangle]
pub unsafe extern "C" fn entrobound_dilation_verify(
    d: *const EntroboundDilation,
    companion: *const EntroboundMeasurement,
    state: *const EntroboundState,
    max_residual: *mut f64,
    passed: *mut c_int,
) -> EntroboundStatus {
    guard(|| {
        let d = borrow(d, "dilation")?;
        let s = borrow(state, "state")?;
        let g = match companion.as_ref() {
            Some(g) => g.inner.clone(),
            None => Measurement::computational_basis(d.inner.original_dim()),
        };
        let vectors = match &s.pure {
            Some(p) => vec![p.clone()],
            None => s
                .inner
                .support()
                .map(|(_, v)| PureState::normalized(v.to_vec()))
                .collect::<Result<_, _>>()?,
        };
        let report = verify_dilation(&d.inner, &g, &vectors)?;
        *out_ref(max_residual, "max_residual")? = report.max_residual();
        *out_ref(passed, "passed")? = report.passed() as c_int;
        Ok(())
    })
}

/// Runs the built-in two-state discrimination suite; `passed` receives 1
/// when every check holds.
#[no_mangle]
pub unsafe extern "C" fn entrobound_builtin_regression(passed: *mut c_int) -> EntroboundStatus {
    guard(|| {
        let report = verify_scenario(&builtin_discrimination_scenario(), None);
        *out_ref(passed, "passed")? = report.passed() as c_int;
        Ok(())
    })
}

/// Runs a campaign from a JSON config (fields as in the CLI `--config`
/// file; omitted fields take defaults) and returns the JSON report, to be
/// released with [`entrobound_string_free`].
#[no_mangle]
pub unsafe extern "C" fn entrobound_campaign_json(
    config_json: *const c_char,
    out: *mut *mut c_char,
) -> EntroboundStatus {
    guard(|| {
        let text = c_str(config_json, "config_json")?;
        let config: CampaignConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let report = run_campaign(&config)?;
        write_string(out, emit_report(&report, ReportFormat::Json))
    })
}

/// Validates a scenario given as JSON text, runs its checks, and returns the
/// JSON report, to be released with [`entrobound_string_free`].
#[no_mangle]
pub unsafe extern "C" fn entrobound_verify_json(
    scenario_json: *const c_char,
    out: *mut *mut c_char,
) -> EntroboundStatus {
    guard(|| {
        let scenario = parse_scenario(c_str(scenario_json, "scenario_json")?)?;
        write_string(
            out,
            emit_report(&verify_scenario(&scenario, None), ReportFormat::Json),
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn entrobound_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
