//! C ABI over `fusion-rank`.
//!
//! Rings are opaque `FrRing` handles. Every fallible call returns an
//! [`FrStatus`]; on failure, [`fr_last_error`] describes what went wrong on the
//! calling thread. Integer results are returned as NUL-terminated decimal
//! strings owned by the caller and released with [`fr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fusion_rank::closed_form::{closed_rank, verify_cell, verify_theorem, ClosedFormError};
use fusion_rank::fusion::{builtin_g2_level1, load_fusion, FusionData, FusionError, Label};
use fusion_rank::graph_oracle::{count_noleaf_subgraphs, moebius_ladder};
use fusion_rank::rank_engine::{rank_bruteforce, DualGraph, RankEngine, RankError};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    Precondition = 5,
    Mismatch = 6,
    Internal = 7,
}

/// Opaque fusion-ring handle.
pub struct FrRing {
    ring: FusionData,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).unwrap_or_default());
}

struct Fail(FrStatus, String);

impl From<FusionError> for Fail {
    fn from(e: FusionError) -> Self {
        let status = match e {
            FusionError::Parse { .. } => FrStatus::ParseError,
            _ => FrStatus::ValidationError,
        };
        Fail(status, e.to_string())
    }
}

impl From<RankError> for Fail {
    fn from(e: RankError) -> Self {
        let status = match e {
            RankError::Parse { .. } => FrStatus::ParseError,
            RankError::UnknownLabel(_) | RankError::InvalidRing(_) => FrStatus::ValidationError,
            _ => FrStatus::Precondition,
        };
        Fail(status, e.to_string())
    }
}

impl From<ClosedFormError> for Fail {
    fn from(e: ClosedFormError) -> Self {
        let status = match e {
            ClosedFormError::GenusOutOfRange { .. } => FrStatus::Precondition,
            ClosedFormError::Arithmetic(_) => FrStatus::Internal,
        };
        Fail(status, e.to_string())
    }
}

/// Runs `body`, turning errors and panics into a status plus error message.
fn guarded(body: impl FnOnce() -> Result<(), Fail>) -> FrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FrStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FrStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(FrStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: caller passes a NUL-terminated string that outlives this call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Fail(FrStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ring_ref<'a>(ring: *const FrRing) -> Result<&'a FusionData, Fail> {
    if ring.is_null() {
        return Err(Fail(FrStatus::NullPointer, "ring handle is null".into()));
    }
    // SAFETY: non-null handles come from fr_ring_* constructors and are live.
    Ok(&unsafe { &*ring }.ring)
}

unsafe fn write_string(out: *mut *mut c_char, value: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(FrStatus::NullPointer, "output pointer is null".into()));
    }
    let s = CString::new(value).map_err(|_| Fail(FrStatus::Internal, "interior NUL".into()))?;
    // SAFETY: `out` is non-null and points to writable storage for a pointer.
    unsafe { *out = s.into_raw() };
    Ok(())
}

/// Message for the most recent failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer produced by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fr_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: caller guarantees `s` came from CString::into_raw here.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// The built-in g2 level-1 ring. Release with [`fr_ring_free`].
#[no_mangle]
pub extern "C" fn fr_ring_builtin_g2l1() -> *mut FrRing {
    Box::into_raw(Box::new(FrRing { ring: builtin_g2_level1() }))
}

/// Parses and validates a fusion-ring JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fr_ring_load_json(json: *const c_char, out: *mut *mut FrRing) -> FrStatus {
    guarded(|| {
        if out.is_null() {
            return Err(Fail(FrStatus::NullPointer, "output pointer is null".into()));
        }
        let text = unsafe { read_str(json, "json") }?;
        let ring = load_fusion(text)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(FrRing { ring })) };
        Ok(())
    })
}

/// # Safety
/// `ring` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn fr_ring_free(ring: *mut FrRing) {
    if !ring.is_null() {
        // SAFETY: handle was created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(ring) });
    }
}

/// Number of labels, or 0 for a null handle.
///
/// # Safety
/// `ring` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fr_ring_label_count(ring: *const FrRing) -> usize {
    unsafe { ring_ref(ring) }.map(|r| r.len()).unwrap_or(0)
}

/// Rank on a smooth genus-`g` curve with `n` marked points labeled by the
/// `labels` array.
///
/// # Safety
/// `labels` must point to `n` NUL-terminated strings (or be null when
/// `n == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fr_rank_smooth(
    ring: *const FrRing,
    g: u32,
    labels: *const *const c_char,
    n: usize,
    out: *mut *mut c_char,
) -> FrStatus {
    guarded(|| {
        let ring = unsafe { ring_ref(ring) }?;
        if n > 0 && labels.is_null() {
            return Err(Fail(FrStatus::NullPointer, "labels is null".into()));
        }
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // SAFETY: caller guarantees `labels` has `n` entries.
            let p = unsafe { *labels.add(i) };
            weights.push(Label::new(unsafe { read_str(p, "label") }?));
        }
        let rank = RankEngine::new(ring)?.rank_smooth(g, &weights)?;
        unsafe { write_string(out, rank.to_string()) }
    })
}

/// Rank of a dual graph given as JSON. With `check_oracle` nonzero the
/// brute-force oracle is also run and a disagreement yields
/// `FR_STATUS_MISMATCH`.
///
/// # Safety
/// `graph_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fr_rank_graph_json(
    ring: *const FrRing,
    graph_json: *const c_char,
    check_oracle: c_int,
    out: *mut *mut c_char,
) -> FrStatus {
    guarded(|| {
        let ring = unsafe { ring_ref(ring) }?;
        let graph = DualGraph::from_json(unsafe { read_str(graph_json, "graph_json") }?)?;
        let rank = RankEngine::new(ring)?.rank_graph(&graph)?;
        if check_oracle != 0 {
            let oracle = rank_bruteforce(ring, &graph)?;
            if oracle != rank {
                return Err(Fail(FrStatus::Mismatch, format!("engine {rank} vs oracle {oracle}")));
            }
        }
        unsafe { write_string(out, rank.to_string()) }
    })
}

/// Closed-form g2 level-1 rank for `(g, n)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fr_closed_rank(g: u32, n: u32, out: *mut *mut c_char) -> FrStatus {
    guarded(|| {
        let rank = closed_rank(g, n)?;
        unsafe { write_string(out, rank.to_string()) }
    })
}

/// Evaluates the three rank expressions for `(g, n)` and returns the report
/// as JSON. `allow_extension` nonzero admits `g < 2`. `*agree` receives 1 when
/// all three agree.
///
/// # Safety
/// `out_json` and `agree` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fr_verify_theorem(
    g: u32,
    n: u32,
    allow_extension: c_int,
    agree: *mut c_int,
    out_json: *mut *mut c_char,
) -> FrStatus {
    guarded(|| {
        if agree.is_null() {
            return Err(Fail(FrStatus::NullPointer, "agree is null".into()));
        }
        let report = if allow_extension != 0 { verify_cell(g, n)? } else { verify_theorem(g, n)? };
        let json = serde_json::to_string(&report).map_err(|e| Fail(FrStatus::Internal, e.to_string()))?;
        unsafe { write_string(out_json, json) }?;
        // SAFETY: checked non-null above.
        unsafe { *agree = c_int::from(report.agree) };
        Ok(())
    })
}

/// No-leaf edge-subgraph count of the Möbius ladder with `2k` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fr_moebius_count(k: u32, out: *mut *mut c_char) -> FrStatus {
    guarded(|| {
        let graph = moebius_ladder(k).map_err(|e| Fail(FrStatus::Precondition, e.to_string()))?;
        let count = count_noleaf_subgraphs(&graph).map_err(|e| Fail(FrStatus::Precondition, e.to_string()))?;
        unsafe { write_string(out, count.to_string()) }
    })
}
