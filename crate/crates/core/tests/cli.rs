mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

use common::data_dir;

/// Copy the bundled data into a scratch directory so tests may edit it and
/// the default `out/` lands outside the source tree.
fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    copy_tree(&data_dir(), dir.path());
    dir
}

fn copy_tree(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_tree(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).unwrap();
        }
    }
}

fn nba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nba")).args(args).output().unwrap()
}

fn trace(project: &str, scenario: &str, fact: &str, out: &str) -> Output {
    nba(&["trace", "--project", project, "--scenario", scenario, "--fact", fact, "--out", out])
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn check_distinguishes_the_two_projects() {
    let ws = workspace();
    let ok = nba(&["check", "--project", &p(&ws, "scenario-1.project")]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains("check: 0 blocking"));

    let gap = nba(&["check", "--project", &p(&ws, "crossing.project")]);
    assert_eq!(code(&gap), 1);
    assert!(stdout(&gap).contains("UnknownSymbol(Verdeckungszone)"), "{}", stdout(&gap));
}

#[test]
fn infer_writes_the_fact_dump() {
    let ws = workspace();
    let out = nba(&["infer", "--project", &p(&ws, "scenario-1.project"), "--scenario", "scenario-1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("behavior anhalten_in(ego, zoneBlau1) rule=R4"));
    let dump = fs::read_to_string(ws.path().join("out/scenario-1.facts")).unwrap();
    let derived: Vec<&str> = dump.lines().filter(|l| l.starts_with("derived ")).collect();
    assert_eq!(derived.len(), 4, "{dump}");
    assert!(!ws.path().join("out/scenario-1.traces").exists());
}

#[test]
fn runs_are_byte_identical() {
    let ws = workspace();
    let project = p(&ws, "crossing.project");
    let (a, b) = (ws.path().join("a"), ws.path().join("b"));
    for dir in [&a, &b] {
        let dir = dir.to_string_lossy();
        nba(&["infer", "--project", &project, "--scenario", "scenario-1", "--all-traces", "--out", &dir]);
        nba(&["verify", "--project", &project, "--out", &dir]);
        trace(&project, "scenario-1", "anhalten_in(ego, zoneBlau1)", &dir);
    }
    let names = [
        "scenario-1.facts",
        "scenario-1.traces",
        "verify.txt",
        "verify.json",
        "scenario-1.trace.txt",
        "scenario-1.trace.json",
    ];
    for name in names {
        let x = fs::read(a.join(name)).unwrap();
        assert!(!x.is_empty(), "{name}");
        assert_eq!(x, fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn verify_exit_code_follows_the_verdicts() {
    let ws = workspace();
    let out_dir = ws.path().join("v");
    let out_s = out_dir.to_string_lossy();
    let failing = nba(&["verify", "--project", &p(&ws, "crossing.project"), "--out", &out_s]);
    assert_eq!(code(&failing), 1);
    let table = fs::read_to_string(out_dir.join("verify.txt")).unwrap();
    assert!(table.contains("summary: PASS=1 RULE_FAULT=0 CONCEPT_GAP=1 SOURCE_GAP=0"), "{table}");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("verify.json")).unwrap()).unwrap();
    assert_eq!(json["summary"]["CONCEPT_GAP"], 1);

    let passing = nba(&["verify", "--project", &p(&ws, "scenario-1.project"), "--out", &out_s]);
    assert_eq!(code(&passing), 0, "{}", stdout(&passing));
}

#[test]
fn trace_exit_codes() {
    let ws = workspace();
    let project = p(&ws, "crossing.project");
    let out_dir = ws.path().join("t");
    let out_s = out_dir.to_string_lossy();

    let ok = trace(&project, "scenario-1", "anhalten_in(ego, zoneBlau1)", &out_s);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
    let text = fs::read_to_string(out_dir.join("scenario-1.trace.txt")).unwrap();
    let sources = fs::read_to_string(ws.path().join("crossing.sources")).unwrap();
    let quotes: Vec<&str> = text.lines().filter_map(|l| l.trim().strip_prefix("quote \"")?.strip_suffix('"')).collect();
    assert!(!quotes.is_empty(), "{text}");
    for q in quotes {
        assert!(sources.contains(q), "quote not in the sources file: {q}");
    }

    // Asserted facts have a one-node explanation.
    let asserted = trace(&project, "scenario-1", "ist_in(ego, zoneBlau1)", &out_s);
    assert_eq!(code(&asserted), 0, "{}", stderr(&asserted));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("scenario-1.trace.json")).unwrap()).unwrap();
    assert_eq!(json["tree"]["origin"], "asserted");
    assert_eq!(json["tree"]["children"].as_array().unwrap().len(), 0);

    let missing = trace(&project, "scenario-1", "anhalten_in(ego, zoneBlau2)", &out_s);
    assert_eq!(code(&missing), 4);

    let unknown = trace(&project, "nope", "anhalten_in(ego, zoneBlau1)", &out_s);
    assert_eq!(code(&unknown), 3);

    let garbage = trace(&project, "scenario-1", "anhalten_in(ego", &out_s);
    assert_eq!(code(&garbage), 2);
}

#[test]
fn unknown_scenario_is_exit_3() {
    let ws = workspace();
    let out = nba(&["infer", "--project", &p(&ws, "crossing.project"), "--scenario", "scenario-9"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("scenario-9"));
}

#[test]
fn malformed_rule_file_reports_the_position() {
    let ws = workspace();
    let rules = ws.path().join("crossing.rules");
    let mut text = fs::read_to_string(&rules).unwrap();
    text.push_str("\nrule R9 \"broken\"\n  when Zone(?z\n  then Ego(?z)\n");
    fs::write(&rules, &text).unwrap();
    let line = text.lines().count() - 1;
    for cmd in ["check", "lint"] {
        let out = nba(&[cmd, "--project", &p(&ws, "crossing.project")]);
        assert_eq!(code(&out), 2, "{cmd}");
        assert!(stderr(&out).contains(&format!("line {line}, column")), "{cmd}: {}", stderr(&out));
    }
}

#[test]
fn bad_configuration_is_exit_2() {
    let ws = workspace();
    let missing = nba(&["check", "--project", &p(&ws, "nothing.project")]);
    assert_eq!(code(&missing), 2);

    let cfg = ws.path().join("bad.project");
    fs::write(&cfg, "ontology = crossing.onto\nrules = crossing.rules\n").unwrap();
    let out = nba(&["check", "--project", &cfg.to_string_lossy()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("sources"), "{}", stderr(&out));
}

#[test]
fn empty_catalog_derives_nothing() {
    let ws = workspace();
    fs::write(ws.path().join("crossing.rules"), "# no rules yet\n").unwrap();
    let out_dir: PathBuf = ws.path().join("e");
    let out = nba(&[
        "infer",
        "--project",
        &p(&ws, "scenario-1.project"),
        "--scenario",
        "scenario-1",
        "--out",
        &out_dir.to_string_lossy(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let dump = fs::read_to_string(out_dir.join("scenario-1.facts")).unwrap();
    assert!(!dump.is_empty());
    assert!(dump.lines().all(|l| !l.starts_with("derived ")), "{dump}");
}
