//! C ABI over the glmy path homology library.
//!
//! Conventions: every fallible function returns a [`GlmyStatus`] and writes
//! its result through an out-pointer. Handles are opaque and freed with the
//! matching `_free` function; strings returned through out-pointers are
//! NUL-terminated, owned by the caller, and released with
//! [`glmy_string_free`]. On any non-OK status a thread-local message is
//! available from [`glmy_last_error_message`] until the next failing call
//! on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use glmy::complex::ChainComplex;
use glmy::digraph::Digraph;
use glmy::error::Error;
use glmy::path::DEFAULT_MAX_REGULAR_PATHS;
use glmy::qsim::{run_phase_estimation, PhaseEstimationConfig, QubitEncoding};
use glmy::spectral::betti_numbers;
use glmy::ElementaryPath;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlmyStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input was rejected (parse error, cycle, bad degree, size guard).
    InvalidInput = 3,
    /// The provided buffer is too small; the required size was written.
    BufferTooSmall = 4,
    /// An internal invariant failed; this is a bug, not a usage error.
    Internal = 5,
}

/// Opaque handle to a validated digraph.
pub struct GlmyDigraph {
    inner: Digraph,
}

/// Opaque handle to a fully built embedded chain complex.
pub struct GlmyComplex {
    inner: ChainComplex,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> GlmyStatus {
    match err {
        Error::Inconsistent(_) | Error::Decomposition { .. } => GlmyStatus::Internal,
        _ => GlmyStatus::InvalidInput,
    }
}

fn fail(err: &Error) -> GlmyStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Runs a body with panic containment; a panic reports `Internal`.
fn guarded(body: impl FnOnce() -> GlmyStatus) -> GlmyStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            GlmyStatus::Internal
        }
    }
}

/// # Safety
/// `text` must be a valid NUL-terminated string pointer.
unsafe fn utf8_arg<'a>(text: *const c_char) -> Result<&'a str, GlmyStatus> {
    if text.is_null() {
        set_error("null string argument");
        return Err(GlmyStatus::NullArgument);
    }
    CStr::from_ptr(text).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        GlmyStatus::InvalidUtf8
    })
}

fn string_out(out: *mut *mut c_char, value: String) -> GlmyStatus {
    let sanitized: String = value.chars().filter(|&c| c != '\0').collect();
    match CString::new(sanitized) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            GlmyStatus::Ok
        }
        Err(_) => {
            set_error("result string could not be converted");
            GlmyStatus::Internal
        }
    }
}

/// Version of the underlying library, as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn glmy_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last error on this thread; valid until the next failing
/// call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn glmy_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a digraph from edge-list text or the JSON form (dispatch on the
/// first byte) and returns an owned handle through `out`.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` must be a valid
/// destination pointer.
#[no_mangle]
pub unsafe extern "C" fn glmy_digraph_parse(
    text: *const c_char,
    out: *mut *mut GlmyDigraph,
) -> GlmyStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return GlmyStatus::NullArgument;
        }
        let text = match utf8_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Digraph::parse(text) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(GlmyDigraph { inner: g }));
                GlmyStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a digraph handle. Null is ignored.
///
/// # Safety
/// `g` must have been returned by [`glmy_digraph_parse`] and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn glmy_digraph_free(g: *mut GlmyDigraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices; 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn glmy_digraph_vertex_count(g: *const GlmyDigraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.vertex_count())
}

/// Number of distinct edges; 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn glmy_digraph_edge_count(g: *const GlmyDigraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// Length of the longest allowed path; 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn glmy_digraph_max_path_length(g: *const GlmyDigraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.max_allowed_path_length())
}

/// Builds the embedded chain complex of a digraph. `max_dim` below zero
/// means "up to the maximal allowed path length".
///
/// # Safety
/// `g` must be a live digraph handle and `out` a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn glmy_complex_build(
    g: *const GlmyDigraph,
    max_dim: i64,
    out: *mut *mut GlmyComplex,
) -> GlmyStatus {
    guarded(|| {
        let Some(g) = g.as_ref() else {
            set_error("null digraph handle");
            return GlmyStatus::NullArgument;
        };
        if out.is_null() {
            set_error("null out pointer");
            return GlmyStatus::NullArgument;
        }
        let cap = if max_dim < 0 {
            None
        } else {
            Some(max_dim as usize)
        };
        match ChainComplex::build_up_to(&g.inner, cap) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(GlmyComplex { inner: c }));
                GlmyStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a complex handle. Null is ignored.
///
/// # Safety
/// `c` must have been returned by [`glmy_complex_build`] and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn glmy_complex_free(c: *mut GlmyComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Highest computed degree of the complex; 0 for a null handle.
///
/// # Safety
/// `c` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn glmy_complex_top_degree(c: *const GlmyComplex) -> usize {
    c.as_ref().map_or(0, |c| c.inner.top_degree())
}

/// Dimension of the embedded chain group at one degree (0 above the top).
///
/// # Safety
/// `c` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn glmy_complex_gamma_dim(c: *const GlmyComplex, degree: usize) -> usize {
    c.as_ref().map_or(0, |c| c.inner.gamma_dim(degree))
}

/// Writes the exact Betti numbers of degrees `0..=top` into `buf`. The
/// required count is always stored in `written`; when `len` is too small
/// nothing else is written and `BufferTooSmall` is returned, so a null
/// `buf` with `len = 0` queries the size.
///
/// # Safety
/// `c` must be a live handle; `buf` must point to at least `len` writable
/// u64 slots (or be null when `len` is 0); `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn glmy_complex_betti(
    c: *const GlmyComplex,
    buf: *mut u64,
    len: usize,
    written: *mut usize,
) -> GlmyStatus {
    guarded(|| {
        let Some(c) = c.as_ref() else {
            set_error("null complex handle");
            return GlmyStatus::NullArgument;
        };
        if written.is_null() {
            set_error("null written pointer");
            return GlmyStatus::NullArgument;
        }
        let report = match betti_numbers(&c.inner) {
            Ok(r) => r,
            Err(e) => return fail(&e),
        };
        let betti = report.betti();
        *written = betti.len();
        if len < betti.len() {
            set_error("betti buffer too small");
            return GlmyStatus::BufferTooSmall;
        }
        for (i, b) in betti.iter().enumerate() {
            *buf.add(i) = *b as u64;
        }
        GlmyStatus::Ok
    })
}

/// One-call exact analysis: parses a digraph and returns the homology
/// report as a JSON string (betti, gamma_dims, kernels, euler,
/// max_path_length).
///
/// # Safety
/// `text` must be NUL-terminated and `out_json` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn glmy_analyze_json(
    text: *const c_char,
    out_json: *mut *mut c_char,
) -> GlmyStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("null out pointer");
            return GlmyStatus::NullArgument;
        }
        let text = match utf8_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let run = || -> Result<String, Error> {
            let g = Digraph::parse(text)?;
            let complex = ChainComplex::build(&g)?;
            let report = betti_numbers(&complex)?;
            let mut json = report.to_json();
            json.as_object_mut().unwrap().insert(
                "max_path_length".into(),
                g.max_allowed_path_length().into(),
            );
            Ok(json.to_string())
        };
        match run() {
            Ok(s) => string_out(out_json, s),
            Err(e) => fail(&e),
        }
    })
}

/// One-call simulated phase estimation: parses a digraph, runs the seeded
/// estimator at `degree` and returns the full report as a JSON string.
/// `phase_bits = 0` requests exact eigenvalues.
///
/// # Safety
/// `text` must be NUL-terminated and `out_json` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn glmy_qsim_json(
    text: *const c_char,
    degree: usize,
    shots: u64,
    seed: u64,
    phase_bits: u32,
    out_json: *mut *mut c_char,
) -> GlmyStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("null out pointer");
            return GlmyStatus::NullArgument;
        }
        let text = match utf8_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let run = || -> Result<String, Error> {
            let g = Digraph::parse(text)?;
            let complex = ChainComplex::build(&g)?;
            let cfg = PhaseEstimationConfig {
                degree,
                shots,
                phase_bits: (phase_bits > 0).then_some(phase_bits),
                seed,
                rescale: true,
            };
            let report = run_phase_estimation(&complex, &cfg, DEFAULT_MAX_REGULAR_PATHS)?;
            Ok(report.to_json().to_string())
        };
        match run() {
            Ok(s) => string_out(out_json, s),
            Err(e) => fail(&e),
        }
    })
}

/// Parses a digraph and compares the embedded Betti numbers against the
/// independent classical pipeline; stores whether all degrees agree.
///
/// # Safety
/// `text` must be NUL-terminated and `all_agree` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn glmy_oracle_check(
    text: *const c_char,
    all_agree: *mut bool,
) -> GlmyStatus {
    guarded(|| {
        if all_agree.is_null() {
            set_error("null out pointer");
            return GlmyStatus::NullArgument;
        }
        let text = match utf8_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let run = || -> Result<bool, Error> {
            let g = Digraph::parse(text)?;
            let embedded = betti_numbers(&ChainComplex::build(&g)?)?.betti();
            let omega = glmy::oracle::betti_omega(&g);
            Ok(embedded == omega)
        };
        match run() {
            Ok(agree) => {
                *all_agree = agree;
                GlmyStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Encodes one path into the register bitstring for `n` vertices and
/// maximal path length `d`: the register of the vertex at position a holds
/// a+1, registers print most significant bit first in ascending vertex
/// order.
///
/// # Safety
/// `vertices` must point to `len` vertex indices and `out_bits` must be a
/// valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn glmy_encode_path(
    n: usize,
    d: usize,
    vertices: *const u32,
    len: usize,
    out_bits: *mut *mut c_char,
) -> GlmyStatus {
    guarded(|| {
        if out_bits.is_null() || (vertices.is_null() && len > 0) {
            set_error("null pointer argument");
            return GlmyStatus::NullArgument;
        }
        let slice = std::slice::from_raw_parts(vertices, len);
        let run = || -> Result<String, Error> {
            let path = ElementaryPath::from_slice(slice)?;
            let encoded = QubitEncoding::new(n, d).encode(&path)?;
            Ok(encoded.bitstring())
        };
        match run() {
            Ok(bits) => string_out(out_bits, bits),
            Err(e) => fail(&e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned through one of this library's out-pointers
/// and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn glmy_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
