//! C interface to the slco toolkit.
//!
//! Models and LTSs are opaque handles owned by the caller and released with
//! the matching `*_free` function. Every fallible call returns a
//! [`SlcoStatus`]; on failure, [`slco_last_error`] describes the problem.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`slco_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use slco::cs::{explore, ExploreError, ExploreLimits};
use slco::lts::{cs_to_lts, emit_aut, emit_dot, emit_lts_text, parse_lts_text, DotOptions, Lts};
use slco::reduce::{equivalent, hide_labels, reduce, HideSpec, Relation};
use slco::syntax::{load_model, parse_model, validate_model, Model};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlcoStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidModel = 4,
    LimitExceeded = 5,
    EvaluationError = 6,
    FormatError = 7,
    InvalidArgument = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlcoRelation {
    Strong = 0,
    Branching = 1,
}

impl From<SlcoRelation> for Relation {
    fn from(r: SlcoRelation) -> Self {
        match r {
            SlcoRelation::Strong => Relation::Strong,
            SlcoRelation::Branching => Relation::Branching,
        }
    }
}

/// A parsed and validated SLCO model.
pub struct SlcoModel(Model);

/// A labeled transition system.
pub struct SlcoLts(Lts);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SlcoStatus, String);

type Result<T> = std::result::Result<T, Failure>;

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<()>) -> SlcoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SlcoStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            SlcoStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str> {
    if p.is_null() {
        return Err(Failure(SlcoStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SlcoStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T> {
    p.as_ref().ok_or_else(|| Failure(SlcoStatus::NullArgument, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<()> {
    if out.is_null() {
        return Err(Failure(SlcoStatus::NullArgument, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

/// Boxes `value` into `*out`, leaving nothing allocated if `out` is null.
unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<()> {
    put(out, ptr::null_mut())?;
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<()> {
    let c = CString::new(s).map_err(|_| Failure(SlcoStatus::FormatError, "output contains a NUL byte".into()))?;
    if out.is_null() {
        return Err(Failure(SlcoStatus::NullArgument, "output pointer is null".into()));
    }
    out.write(c.into_raw());
    Ok(())
}

/// Library and format version, as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn slco_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), " (lts format 1, cs format 1)\0").as_ptr().cast()
}

/// Message describing the last failure on this thread, or an empty string.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn slco_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn slco_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a model.
#[no_mangle]
pub unsafe extern "C" fn slco_model_parse(source: *const c_char, out: *mut *mut SlcoModel) -> SlcoStatus {
    guard(|| {
        let src = text(source, "source")?;
        let model = load_model(src).map_err(|d| {
            let status = if parse_model(src).is_err() { SlcoStatus::ParseError } else { SlcoStatus::InvalidModel };
            Failure(status, d.to_string())
        })?;
        put_handle(out, SlcoModel(model))
    })
}

/// Checks a model and writes every diagnostic (errors and warnings, one per
/// line) to `diagnostics`, which may be null. Returns `SLCO_STATUS_OK` iff
/// there are no errors.
#[no_mangle]
pub unsafe extern "C" fn slco_model_validate(source: *const c_char, diagnostics: *mut *mut c_char) -> SlcoStatus {
    guard(|| {
        let src = text(source, "source")?;
        let (diags, status) = match parse_model(src) {
            Err(d) => (d.0, SlcoStatus::ParseError),
            Ok(m) => {
                let diags = validate_model(&m);
                let status = if diags.iter().any(|d| d.is_error()) { SlcoStatus::InvalidModel } else { SlcoStatus::Ok };
                (diags, status)
            }
        };
        let report: String = diags.iter().map(|d| format!("{d}\n")).collect();
        if !diagnostics.is_null() {
            put_string(diagnostics, report.clone())?;
        }
        match status {
            SlcoStatus::Ok => Ok(()),
            s => Err(Failure(s, report.trim_end().to_owned())),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn slco_model_free(model: *mut SlcoModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Generates the state space of `model` as an LTS. A `max_configurations`
/// of 0 means no limit. `buffer_capacity` must be at least 1.
#[no_mangle]
pub unsafe extern "C" fn slco_model_explore(
    model: *const SlcoModel,
    buffer_capacity: usize,
    max_configurations: usize,
    out: *mut *mut SlcoLts,
) -> SlcoStatus {
    guard(|| {
        let m = handle(model, "model")?;
        if buffer_capacity == 0 {
            return Err(Failure(SlcoStatus::InvalidArgument, "buffer capacity must be at least 1".into()));
        }
        let limits = ExploreLimits {
            max_configurations: (max_configurations > 0).then_some(max_configurations),
            buffer_capacity,
        };
        let g = explore(&m.0, limits).map_err(|e| {
            let status = match e {
                ExploreError::InvalidModel(_) => SlcoStatus::InvalidModel,
                ExploreError::LimitExceeded { .. } => SlcoStatus::LimitExceeded,
                _ => SlcoStatus::EvaluationError,
            };
            Failure(status, e.to_string())
        })?;
        put_handle(out, SlcoLts(cs_to_lts(&g)))
    })
}

/// Parses the `.lts` text format.
#[no_mangle]
pub unsafe extern "C" fn slco_lts_parse(source: *const c_char, out: *mut *mut SlcoLts) -> SlcoStatus {
    guard(|| {
        let l = parse_lts_text(text(source, "source")?).map_err(|e| Failure(SlcoStatus::ParseError, e.to_string()))?;
        put_handle(out, SlcoLts(l))
    })
}

#[no_mangle]
pub unsafe extern "C" fn slco_lts_free(lts: *mut SlcoLts) {
    if !lts.is_null() {
        drop(Box::from_raw(lts));
    }
}

/// Number of states, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn slco_lts_num_states(lts: *const SlcoLts) -> usize {
    lts.as_ref().map_or(0, |l| l.0.num_states)
}

/// Number of transitions, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn slco_lts_num_transitions(lts: *const SlcoLts) -> usize {
    lts.as_ref().map_or(0, |l| l.0.transitions.len())
}

/// Renders `lts` in the `.lts` text format.
#[no_mangle]
pub unsafe extern "C" fn slco_lts_to_text(lts: *const SlcoLts, out: *mut *mut c_char) -> SlcoStatus {
    guard(|| put_string(out, emit_lts_text(&handle(lts, "lts")?.0)))
}

/// Renders `lts` as a Graphviz digraph with the default styling.
#[no_mangle]
pub unsafe extern "C" fn slco_lts_to_dot(lts: *const SlcoLts, out: *mut *mut c_char) -> SlcoStatus {
    guard(|| put_string(out, emit_dot(&handle(lts, "lts")?.0, &DotOptions::default())))
}

/// Renders `lts` in the Aldebaran format. Final states are not exported.
#[no_mangle]
pub unsafe extern "C" fn slco_lts_to_aut(lts: *const SlcoLts, out: *mut *mut c_char) -> SlcoStatus {
    guard(|| {
        let export = emit_aut(&handle(lts, "lts")?.0).map_err(|e| Failure(SlcoStatus::FormatError, e.to_string()))?;
        put_string(out, export.text)
    })
}

/// Makes labels internal. With `keep` non-zero, every label not in `labels`
/// is hidden; otherwise exactly the listed labels are.
#[no_mangle]
pub unsafe extern "C" fn slco_lts_hide(
    lts: *const SlcoLts,
    keep: bool,
    labels: *const *const c_char,
    num_labels: usize,
    out: *mut *mut SlcoLts,
) -> SlcoStatus {
    guard(|| {
        let l = handle(lts, "lts")?;
        if labels.is_null() && num_labels > 0 {
            return Err(Failure(SlcoStatus::NullArgument, "labels is null".into()));
        }
        let mut set = Vec::with_capacity(num_labels);
        for i in 0..num_labels {
            set.push(text(*labels.add(i), "label")?.to_owned());
        }
        let spec = if keep { HideSpec::keep(set) } else { HideSpec::hide(set) };
        put_handle(out, SlcoLts(hide_labels(&l.0, &spec)))
    })
}

/// Minimizes `lts` modulo `relation`.
#[no_mangle]
pub unsafe extern "C" fn slco_lts_reduce(lts: *const SlcoLts, relation: SlcoRelation, out: *mut *mut SlcoLts) -> SlcoStatus {
    guard(|| {
        let r = reduce(&handle(lts, "lts")?.0, relation.into())
            .map_err(|e| Failure(SlcoStatus::InvalidArgument, e.to_string()))?;
        put_handle(out, SlcoLts(r))
    })
}

/// Decides whether the initial states of `a` and `b` are related.
#[no_mangle]
pub unsafe extern "C" fn slco_lts_equivalent(
    a: *const SlcoLts,
    b: *const SlcoLts,
    relation: SlcoRelation,
    out: *mut bool,
) -> SlcoStatus {
    guard(|| {
        let eq = equivalent(&handle(a, "a")?.0, &handle(b, "b")?.0, relation.into())
            .map_err(|e| Failure(SlcoStatus::InvalidArgument, e.to_string()))?;
        put(out, eq)
    })
}
