//! C ABI over `kraus-core`.
//!
//! Objects cross the boundary as opaque handles (`KrausState`,
//! `KrausChannel`, `KrausDilation`) created by `*_from_json` or by an
//! operation and released with the matching `*_free`. Every fallible call
//! returns a `KrausStatus`; on failure, `kraus_last_error()` describes the
//! most recent error on the calling thread. Strings returned through `char**`
//! belong to the caller and must be released with `kraus_string_free`.
//!
//! States and channels are exchanged as the JSON documents used by the
//! `kraus` CLI. All tolerances are the library defaults.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kraus_core::synthesis::{self, BasisChoice, Strategy};
use kraus_core::{channel, io, DensityMatrix, Dilation, Error, KrausMap, Tolerances};

const TOL: Tolerances = Tolerances::DEFAULT;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrausStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed JSON, invalid UTF-8, or non-finite numbers.
    Parse = 2,
    /// Operands have incompatible dimensions.
    Dimension = 3,
    /// Input is not a valid density matrix.
    InvalidState = 4,
    /// Input is not a valid CPTP map (or isometry/unitary where one is required).
    InvalidChannel = 5,
    /// The requested construction does not apply to these inputs.
    Inapplicable = 6,
    /// Eigensolver or completion failure.
    Numerical = 7,
    /// An argument is out of range.
    InvalidArgument = 8,
    /// A Rust panic was caught at the boundary.
    Internal = 9,
}

/// Density matrix handle.
pub struct KrausState {
    inner: DensityMatrix,
}

/// Kraus map handle.
pub struct KrausChannel {
    inner: KrausMap,
}

/// Stinespring dilation handle.
pub struct KrausDilation {
    inner: Dilation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(KrausStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        use Error::*;
        let status = match &e {
            Parse(_) | NonFinite => KrausStatus::Parse,
            NotSquare { .. } | DimMismatch { .. } | BadFactorization { .. } => KrausStatus::Dimension,
            NotHermitian { .. } | NotPositive { .. } | TraceNotOne { .. } | NotNormalized { .. } => {
                KrausStatus::InvalidState
            }
            NotTracePreserving { .. } | NotUnitary { .. } | BadIsometry { .. } | NotCp { .. } | EmptyList => {
                KrausStatus::InvalidChannel
            }
            NotKinematicallyEquivalent { .. } | StrategyInapplicable { .. } | BadCoefficients { .. } => {
                KrausStatus::Inapplicable
            }
            EigenFailure | CompletionFailure { .. } => KrausStatus::Numerical,
            BadRank { .. } | DuplicateLabel(_) | InvalidArgument(_) => KrausStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(KrausStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body` behind the panic boundary and records any error.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> KrausStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => KrausStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            KrausStatus::Internal
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null("json"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(KrausStatus::Parse, format!("invalid UTF-8: {e}")))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure(KrausStatus::Internal, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = value;
    Ok(())
}

/// Message for the most recent failure on this thread (empty if none).
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kraus_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kraus_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kraus_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- states ----

/// Parses a state document (density matrix or `"kind": "pure"` vector).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_state_from_json(json: *const c_char, out: *mut *mut KrausState) -> KrausStatus {
    guard(|| {
        let rho = io::parse_state(text(json)?, &TOL)?;
        store(out, KrausState { inner: rho })
    })
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_state_to_json(state: *const KrausState, out: *mut *mut c_char) -> KrausStatus {
    guard(|| {
        let s = borrow(state, "state")?;
        store_string(out, io::to_json_string(&io::state_value(&s.inner)))
    })
}

/// Seeded random density matrix of the given dimension and rank.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_state_random(
    dim: usize,
    rank: usize,
    seed: u64,
    out: *mut *mut KrausState,
) -> KrausStatus {
    guard(|| {
        if dim == 0 {
            return Err(Failure(
                KrausStatus::InvalidArgument,
                "dimension must be positive".into(),
            ));
        }
        let rho = kraus_core::random_density(dim, rank, seed)?;
        store(out, KrausState { inner: rho })
    })
}

/// Dimension of a state (0 for a null handle).
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kraus_state_dim(state: *const KrausState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.dim())
}

/// Copies the row-major entries as interleaved (re, im) pairs into `buf`,
/// which must hold `2 * dim * dim` doubles; `len` is its length in doubles.
///
/// # Safety
/// `state` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn kraus_state_entries(state: *const KrausState, buf: *mut f64, len: usize) -> KrausStatus {
    guard(|| {
        let s = borrow(state, "state")?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let entries = kraus_core::linalg::to_row_major(s.inner.matrix());
        if len < 2 * entries.len() {
            return Err(Failure(
                KrausStatus::InvalidArgument,
                format!("buffer holds {len} doubles, need {}", 2 * entries.len()),
            ));
        }
        let out = std::slice::from_raw_parts_mut(buf, 2 * entries.len());
        for (pair, z) in out.chunks_exact_mut(2).zip(entries) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_trace_distance(
    a: *const KrausState,
    b: *const KrausState,
    out: *mut f64,
) -> KrausStatus {
    guard(|| {
        let d = kraus_core::trace_distance(&borrow(a, "a")?.inner, &borrow(b, "b")?.inner)?;
        put(out, d)
    })
}

/// # Safety
/// `state` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kraus_state_free(state: *mut KrausState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

// ---- channels ----

/// Parses and validates (trace preservation) a channel document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_from_json(json: *const c_char, out: *mut *mut KrausChannel) -> KrausStatus {
    guard(|| {
        let phi = io::parse_channel(text(json)?, &TOL)?;
        store(out, KrausChannel { inner: phi })
    })
}

/// # Safety
/// `channel` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_to_json(channel: *const KrausChannel, out: *mut *mut c_char) -> KrausStatus {
    guard(|| {
        let c = borrow(channel, "channel")?;
        store_string(out, io::to_json_string(&io::channel_value(&c.inner)))
    })
}

/// Dimension of a channel (0 for a null handle).
///
/// # Safety
/// `channel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_dim(channel: *const KrausChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.inner.dim())
}

/// Number of Kraus operators held (0 for a null handle).
///
/// # Safety
/// `channel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_len(channel: *const KrausChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.inner.len())
}

/// `out = Φ(state)`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_apply(
    channel: *const KrausChannel,
    state: *const KrausState,
    out: *mut *mut KrausState,
) -> KrausStatus {
    guard(|| {
        let rho = channel::apply(&borrow(channel, "channel")?.inner, &borrow(state, "state")?.inner)?;
        store(out, KrausState { inner: rho })
    })
}

/// `out = second ∘ first` (first acts first).
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_compose(
    second: *const KrausChannel,
    first: *const KrausChannel,
    out: *mut *mut KrausChannel,
) -> KrausStatus {
    guard(|| {
        let phi = channel::compose(&borrow(second, "second")?.inner, &borrow(first, "first")?.inner)?;
        store(out, KrausChannel { inner: phi })
    })
}

/// Minimal operator count (rank of the Choi matrix).
///
/// # Safety
/// `channel` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_rank(channel: *const KrausChannel, out: *mut usize) -> KrausStatus {
    guard(|| {
        let r = channel::kraus_rank(&borrow(channel, "channel")?.inner, &TOL)?;
        put(out, r)
    })
}

/// Minimal Kraus representation of the same map.
///
/// # Safety
/// `channel` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_minimal(
    channel: *const KrausChannel,
    out: *mut *mut KrausChannel,
) -> KrausStatus {
    guard(|| {
        let c = borrow(channel, "channel")?;
        let phi = channel::choi_to_kraus(&channel::kraus_to_choi(&c.inner), &TOL)?;
        store(out, KrausChannel { inner: phi })
    })
}

/// Whether two channels have Choi matrices within `tol` (max-norm).
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_equal(
    a: *const KrausChannel,
    b: *const KrausChannel,
    tol: f64,
    out: *mut bool,
) -> KrausStatus {
    guard(|| {
        if tol.is_nan() || tol < 0.0 {
            return Err(Failure(
                KrausStatus::InvalidArgument,
                "tolerance must be non-negative".into(),
            ));
        }
        let eq = channel::maps_equal(&borrow(a, "a")?.inner, &borrow(b, "b")?.inner, tol)?;
        put(out, eq)
    })
}

/// # Safety
/// `channel` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_free(channel: *mut KrausChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

// ---- synthesis ----

/// Channel sending every state to `target`.
///
/// # Safety
/// `target` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_synthesize_all_to_any(
    target: *const KrausState,
    out: *mut *mut KrausChannel,
) -> KrausStatus {
    guard(|| {
        let phi = synthesis::all_to_any(&borrow(target, "target")?.inner, BasisChoice::Computational, &TOL)?;
        store(out, KrausChannel { inner: phi })
    })
}

/// Channel sending the pure state `input` to `target`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_synthesize_pure_to_any(
    input: *const KrausState,
    target: *const KrausState,
    out: *mut *mut KrausChannel,
) -> KrausStatus {
    guard(|| {
        let input = borrow(input, "input")?;
        let target = borrow(target, "target")?;
        let phi = synthesis::synthesize(&input.inner, &target.inner, &Strategy::PureToAny, &TOL)?.channel;
        store(out, KrausChannel { inner: phi })
    })
}

/// Channel sending `input` to `target`, choosing the construction
/// automatically (unitary when spectra match, then pure-to-any, then
/// all-to-any). `residual` (optional) receives the max-norm transfer error.
///
/// # Safety
/// Handles must be live; `out` must be writable; `residual` may be null.
#[no_mangle]
pub unsafe extern "C" fn kraus_synthesize(
    input: *const KrausState,
    target: *const KrausState,
    out: *mut *mut KrausChannel,
    residual: *mut f64,
) -> KrausStatus {
    guard(|| {
        let input = borrow(input, "input")?;
        let target = borrow(target, "target")?;
        let phi = synthesis::synthesize(&input.inner, &target.inner, &Strategy::Auto, &TOL)?.channel;
        if !residual.is_null() {
            *residual = synthesis::transfer_residual(&phi, &input.inner, &target.inner)?;
        }
        store(out, KrausChannel { inner: phi })
    })
}

// ---- dilation ----

/// Stinespring dilation of a channel.
///
/// # Safety
/// `channel` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_channel_dilate(
    channel: *const KrausChannel,
    out: *mut *mut KrausDilation,
) -> KrausStatus {
    guard(|| {
        let d = channel::stinespring_dilate(&borrow(channel, "channel")?.inner, &TOL)?;
        store(out, KrausDilation { inner: d })
    })
}

/// Ancilla dimension (0 for a null handle).
///
/// # Safety
/// `dilation` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kraus_dilation_ancilla_dim(dilation: *const KrausDilation) -> usize {
    dilation.as_ref().map_or(0, |d| d.inner.ancilla_dim())
}

/// # Safety
/// `dilation` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_dilation_to_json(dilation: *const KrausDilation, out: *mut *mut c_char) -> KrausStatus {
    guard(|| {
        let d = borrow(dilation, "dilation")?;
        store_string(out, io::to_json_string(&io::dilation_value(&d.inner)))
    })
}

/// Reduced system state after the dilation unitary acts on `state ⊗ |0⟩⟨0|`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kraus_dilation_replay(
    dilation: *const KrausDilation,
    state: *const KrausState,
    out: *mut *mut KrausState,
) -> KrausStatus {
    guard(|| {
        let rho = borrow(dilation, "dilation")?
            .inner
            .replay(&borrow(state, "state")?.inner)?;
        store(out, KrausState { inner: rho })
    })
}

/// # Safety
/// `dilation` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kraus_dilation_free(dilation: *mut KrausDilation) {
    if !dilation.is_null() {
        drop(Box::from_raw(dilation));
    }
}
