//! C interface to the norm-behavior analysis library.
//!
//! Every fallible function returns an [`NbaStatus`]; on failure a message is
//! available from [`nba_last_error`] on the same thread. Strings handed out
//! through `char **` parameters are owned by the caller and must be released
//! with [`nba_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use nba_core::cli::{
    cmd_check, run_scenario, trace_documents, Outcome, EXIT_FINDINGS, EXIT_NOT_DERIVABLE, EXIT_OK,
    EXIT_UNKNOWN_SCENARIO,
};
use nba_core::project::Project;
use nba_core::verify::verify_catalog;

/// Result codes. The first five match the exit codes of the `nba` binary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbaStatus {
    Ok = 0,
    /// The call succeeded but reported findings (failed verdicts, blocking
    /// check issues, an inconsistent fixpoint).
    Findings = 1,
    /// A project file could not be read or parsed.
    InputError = 2,
    UnknownScenario = 3,
    /// The requested fact does not hold in the scenario.
    NotDerivable = 4,
    NullArgument = 5,
    InvalidUtf8 = 6,
    IndexOutOfRange = 7,
    /// A bug: the library panicked. The handle should not be used again.
    Panic = 8,
}

/// A loaded project: ontology, rules, sources, scenes and expectations.
pub struct NbaProject {
    inner: Project,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text.trim_end()).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: NbaStatus, message: impl Into<String>) -> NbaStatus {
    set_error(message);
    status
}

fn status_of(outcome: &Outcome) -> NbaStatus {
    match outcome.code {
        EXIT_OK => NbaStatus::Ok,
        EXIT_FINDINGS => NbaStatus::Findings,
        EXIT_UNKNOWN_SCENARIO => NbaStatus::UnknownScenario,
        EXIT_NOT_DERIVABLE => NbaStatus::NotDerivable,
        _ => NbaStatus::InputError,
    }
}

fn from_outcome(outcome: Outcome) -> NbaStatus {
    let status = status_of(&outcome);
    if status != NbaStatus::Ok {
        set_error(outcome.stderr.trim_start_matches("error: "));
    }
    status
}

/// Runs `body` with the error slot cleared and panics turned into a status.
fn guard(body: impl FnOnce() -> NbaStatus) -> NbaStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(NbaStatus::Panic, "internal error: panic in nba"),
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, NbaStatus> {
    if ptr.is_null() {
        return Err(fail(NbaStatus::NullArgument, format!("`{name}` is null")));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| fail(NbaStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

unsafe fn project_arg<'a>(project: *const NbaProject) -> Result<&'a Project, NbaStatus> {
    project.as_ref().map(|p| &p.inner).ok_or_else(|| fail(NbaStatus::NullArgument, "`project` is null"))
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> NbaStatus {
    let c = CString::new(text.replace('\0', " ")).expect("no interior NUL");
    *out = c.into_raw();
    NbaStatus::Ok
}

macro_rules! tryf {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! out_arg {
    ($out:expr) => {{
        if $out.is_null() {
            return fail(NbaStatus::NullArgument, "output pointer is null");
        }
        *$out = ptr::null_mut();
    }};
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nba_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The message of the last failed call on this thread, or null. Valid until
/// the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn nba_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn nba_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads the project file at `path`. On success `*out` owns a handle that
/// must be released with [`nba_project_free`].
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nba_project_open(path: *const c_char, out: *mut *mut NbaProject) -> NbaStatus {
    guard(|| {
        out_arg!(out);
        let path = tryf!(str_arg(path, "path"));
        match Project::open(Path::new(path)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(NbaProject { inner }));
                NbaStatus::Ok
            }
            Err(e) => fail(NbaStatus::InputError, e.to_string()),
        }
    })
}

/// Releases a project handle. Null is ignored.
///
/// # Safety
/// `project` must come from [`nba_project_open`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nba_project_free(project: *mut NbaProject) {
    if !project.is_null() {
        drop(Box::from_raw(project));
    }
}

/// Number of scenes in the project; 0 for a null handle.
///
/// # Safety
/// `project` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nba_project_scenario_count(project: *const NbaProject) -> usize {
    project.as_ref().map_or(0, |p| p.inner.scenes.len())
}

/// Copies the id of scene `index` (in project order) into `*out`.
///
/// # Safety
/// `project` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nba_project_scenario_id(
    project: *const NbaProject,
    index: usize,
    out: *mut *mut c_char,
) -> NbaStatus {
    guard(|| {
        out_arg!(out);
        let project = tryf!(project_arg(project));
        match project.scenes.get(index) {
            Some(scene) => put_string(out, scene.scenario_id.clone()),
            None => fail(NbaStatus::IndexOutOfRange, format!("no scene at index {index}")),
        }
    })
}

/// Runs inference on one scenario and returns the fact dump, one
/// `asserted`/`closure`/`derived` line per fact. An inconsistent fixpoint is
/// still dumped and yields [`NbaStatus::Findings`].
///
/// # Safety
/// `project` must be a live handle, `scenario` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nba_infer(
    project: *const NbaProject,
    scenario: *const c_char,
    out: *mut *mut c_char,
) -> NbaStatus {
    guard(|| {
        out_arg!(out);
        let project = tryf!(project_arg(project));
        let scenario = tryf!(str_arg(scenario, "scenario"));
        match run_scenario(project, scenario, false) {
            Ok((base, warnings, consistent)) => {
                put_string(out, base.dump());
                if consistent {
                    NbaStatus::Ok
                } else {
                    fail(NbaStatus::Findings, warnings)
                }
            }
            Err(outcome) => from_outcome(outcome),
        }
    })
}

/// Verifies every scenario and returns the JSON report. Returns
/// [`NbaStatus::Findings`] (with the report set) when a scenario fails.
///
/// # Safety
/// `project` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nba_verify(project: *const NbaProject, out: *mut *mut c_char) -> NbaStatus {
    guard(|| {
        out_arg!(out);
        let p = tryf!(project_arg(project));
        match verify_catalog(&p.ontology, &p.catalog, &p.scenes, &p.expectations, &p.ledger) {
            Ok(report) => {
                put_string(out, report.to_json());
                if report.success() {
                    NbaStatus::Ok
                } else {
                    fail(NbaStatus::Findings, format!("{} scenario(s) failed", report.summary.failures()))
                }
            }
            Err(e) => fail(NbaStatus::InputError, e.to_string()),
        }
    })
}

/// Explains `fact` (e.g. `"anhalten_in(ego, zoneBlau1)"`) in a scenario and
/// returns the derivation tree with its sources as JSON.
///
/// # Safety
/// `project` must be a live handle, `scenario` and `fact` NUL-terminated
/// strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nba_trace(
    project: *const NbaProject,
    scenario: *const c_char,
    fact: *const c_char,
    out: *mut *mut c_char,
) -> NbaStatus {
    guard(|| {
        out_arg!(out);
        let project = tryf!(project_arg(project));
        let scenario = tryf!(str_arg(scenario, "scenario"));
        let fact = tryf!(str_arg(fact, "fact"));
        match trace_documents(project, scenario, fact) {
            Ok((_, json, _)) => put_string(out, json),
            Err(outcome) => from_outcome(outcome),
        }
    })
}

/// Runs the `check` command on a project file and returns its report text.
/// Blocking issues yield [`NbaStatus::Findings`] with the report set.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nba_check(path: *const c_char, out: *mut *mut c_char) -> NbaStatus {
    guard(|| {
        out_arg!(out);
        let path = tryf!(str_arg(path, "path"));
        let outcome = cmd_check(Path::new(path));
        let status = status_of(&outcome);
        if status == NbaStatus::InputError {
            return from_outcome(outcome);
        }
        put_string(out, outcome.stdout);
        if status != NbaStatus::Ok {
            set_error("check reported blocking issues");
        }
        status
    })
}
