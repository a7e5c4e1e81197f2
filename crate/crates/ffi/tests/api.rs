use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use nba_ffi::*;

fn data(name: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/crossing").join(name);
    CString::new(path.to_str().unwrap()).unwrap()
}

fn open(name: &str) -> *mut NbaProject {
    let mut project = ptr::null_mut();
    let status = unsafe { nba_project_open(data(name).as_ptr(), &mut project) };
    assert_eq!(status, NbaStatus::Ok, "{}", last_error());
    assert!(!project.is_null());
    project
}

/// Copies and frees a returned string.
fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { nba_string_free(s) };
    text
}

fn last_error() -> String {
    let e = nba_last_error();
    if e.is_null() {
        String::new()
    } else {
        unsafe { CStr::from_ptr(e) }.to_string_lossy().into_owned()
    }
}

#[test]
fn scenarios_are_listed_in_order() {
    let project = open("crossing.project");
    assert_eq!(unsafe { nba_project_scenario_count(project) }, 2);
    let mut ids = Vec::new();
    for i in 0..2 {
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { nba_project_scenario_id(project, i, &mut out) }, NbaStatus::Ok);
        ids.push(take(out));
    }
    assert_eq!(ids, ["scenario-1", "scenario-2"]);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nba_project_scenario_id(project, 2, &mut out) }, NbaStatus::IndexOutOfRange);
    assert!(out.is_null());
    assert!(last_error().contains("index 2"));
    unsafe { nba_project_free(project) };
}

#[test]
fn infer_returns_the_dump() {
    let project = open("crossing.project");
    let scenario = CString::new("scenario-1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nba_infer(project, scenario.as_ptr(), &mut out) }, NbaStatus::Ok);
    let dump = take(out);
    assert_eq!(dump.lines().filter(|l| l.starts_with("derived ")).count(), 4);
    assert!(dump.contains("derived anhalten_in(ego, zoneBlau1) rule=R4"));

    let unknown = CString::new("scenario-9").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nba_infer(project, unknown.as_ptr(), &mut out) }, NbaStatus::UnknownScenario);
    assert!(out.is_null());
    assert!(last_error().contains("scenario-9"));
    unsafe { nba_project_free(project) };
}

#[test]
fn verify_reports_findings_with_the_json() {
    let project = open("crossing.project");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nba_verify(project, &mut out) }, NbaStatus::Findings);
    let json: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(json["summary"]["PASS"], 1);
    assert_eq!(json["summary"]["CONCEPT_GAP"], 1);
    unsafe { nba_project_free(project) };

    let project = open("scenario-1.project");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nba_verify(project, &mut out) }, NbaStatus::Ok);
    assert!(last_error().is_empty());
    take(out);
    unsafe { nba_project_free(project) };
}

#[test]
fn trace_returns_tree_and_sources() {
    let project = open("crossing.project");
    let scenario = CString::new("scenario-1").unwrap();
    let fact = CString::new("anhalten_in(ego, zoneBlau1)").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nba_trace(project, scenario.as_ptr(), fact.as_ptr(), &mut out) }, NbaStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(json["tree"]["rule"], "R4");
    assert!(!json["provenance"]["passages"].as_array().unwrap().is_empty());

    let absent = CString::new("anhalten_in(ego, zoneBlau2)").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nba_trace(project, scenario.as_ptr(), absent.as_ptr(), &mut out) }, NbaStatus::NotDerivable);
    let broken = CString::new("anhalten_in(").unwrap();
    assert_eq!(unsafe { nba_trace(project, scenario.as_ptr(), broken.as_ptr(), &mut out) }, NbaStatus::InputError);
    unsafe { nba_project_free(project) };
}

#[test]
fn check_and_open_errors() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nba_check(data("scenario-1.project").as_ptr(), &mut out) }, NbaStatus::Ok);
    assert!(take(out).contains("check: 0 blocking"));
    assert_eq!(unsafe { nba_check(data("crossing.project").as_ptr(), &mut out) }, NbaStatus::Findings);
    assert!(take(out).contains("Verdeckungszone"));

    let mut project = ptr::null_mut();
    assert_eq!(unsafe { nba_project_open(data("missing.project").as_ptr(), &mut project) }, NbaStatus::InputError);
    assert!(project.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_and_invalid_arguments() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nba_verify(ptr::null(), &mut out) }, NbaStatus::NullArgument);
    assert_eq!(unsafe { nba_project_open(ptr::null(), ptr::null_mut()) }, NbaStatus::NullArgument);
    assert_eq!(unsafe { nba_project_scenario_count(ptr::null()) }, 0);
    unsafe {
        nba_project_free(ptr::null_mut());
        nba_string_free(ptr::null_mut());
    }
    let bad = [0xffu8, 0xfe, 0];
    let mut project = ptr::null_mut();
    assert_eq!(unsafe { nba_project_open(bad.as_ptr().cast(), &mut project) }, NbaStatus::InvalidUtf8);
    let version = unsafe { CStr::from_ptr(nba_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/nba.h")).unwrap();
    for name in [
        "nba_project_open",
        "nba_trace",
        "nba_last_error",
        "NBA_STATUS_NOT_DERIVABLE = 4",
        "typedef struct NbaProject NbaProject",
    ] {
        assert!(header.contains(name), "{name}");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-"])
        .arg("-I")
        .arg(dir.join("include"))
        .stdin(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child.stdin.take().unwrap().write_all(
                b"#include \"nba.h\"\nint main(void) { NbaProject *p = 0; NbaStatus s = nba_project_open(\"x\", &p); nba_project_free(p); return (int)s; }\n",
            )?;
            child.wait()
        })
    else {
        eprintln!("no C compiler; header compile check skipped");
        return;
    };
    assert!(status.success());
}
