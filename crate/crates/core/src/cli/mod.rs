//! The `nba` commands.
//!
//! Each command returns an [`Outcome`] holding its exit code and the text
//! for stdout and stderr; nothing is printed here. Files are only written
//! below the project's output directory.
//!
//! | code | meaning                                        |
//! |------|------------------------------------------------|
//! | 0    | success                                        |
//! | 1    | findings: blocking check/lint issues, a failed verdict, an inconsistent fixpoint |
//! | 2    | the project or one of its files cannot be read or parsed |
//! | 3    | unknown scenario id                            |
//! | 4    | `trace`: the fact does not hold in the scenario |

mod args;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::engine::{explain, infer_with, DerivationTree, FactBase, InferOptions, InferenceError};
use crate::fact::GroundFact;
use crate::ontology::fact_issues;
use crate::project::Project;
use crate::provenance::TraceReport;
use crate::rules::{lint_catalog, validate_against_ontology};
use crate::syntax::{parse_ground_atom, tokenize_line, Cursor};
use crate::verify::verify_catalog;

pub use args::{run, Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNKNOWN_SCENARIO: i32 = 3;
pub const EXIT_NOT_DERIVABLE: i32 = 4;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// Options shared by the commands.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Replaces the project's `output_dir`.
    pub out: Option<PathBuf>,
    pub all_traces: bool,
}

fn load(project: &Path) -> Result<Project, Outcome> {
    Project::open(project).map_err(|e| Outcome::fail(EXIT_INPUT, e))
}

fn output_dir(project: &Project, options: &RunOptions) -> PathBuf {
    options.out.clone().unwrap_or_else(|| project.config.output_dir.clone())
}

fn write_outputs(dir: &Path, files: &[(String, &str)]) -> Result<Vec<PathBuf>, Outcome> {
    fs::create_dir_all(dir).map_err(|e| Outcome::fail(EXIT_INPUT, format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (name, content) in files {
        let path = dir.join(name);
        fs::write(&path, content)
            .map_err(|e| Outcome::fail(EXIT_INPUT, format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

fn lenient() -> InferOptions {
    InferOptions { record_all_traces: false, tolerate_unknown_classes: true }
}

/// Parses everything and reports vocabulary, lint and ledger findings.
pub fn cmd_check(project: &Path) -> Outcome {
    let project = match load(project) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let mut blocking = Vec::new();
    let mut notes = Vec::new();

    blocking.extend(validate_against_ontology(&project.catalog, &project.ontology).iter().map(ToString::to_string));
    for scene in &project.scenes {
        for issue in scene.symbol_issues(&project.ontology) {
            blocking.push(format!("scene {}: {issue}", scene.scenario_id));
        }
    }
    for e in &project.expectations {
        match project.scene(&e.scenario_id) {
            None => blocking.push(format!("expectation {}: no scene with this id", e.scenario_id)),
            Some(scene) => {
                for fact in e.must_derive.iter().chain(&e.must_not_derive) {
                    for issue in fact_issues(fact, &project.ontology, Some(&scene.individuals)) {
                        blocking.push(format!("expectation {}: {issue}", e.scenario_id));
                    }
                }
            }
        }
    }
    for finding in lint_catalog(&project.catalog, &project.ontology, &project.scenes) {
        if finding.is_blocking() {
            blocking.push(finding.to_string());
        } else {
            notes.push(finding.to_string());
        }
    }
    blocking.extend(project.ledger.check_catalog(&project.catalog).iter().map(ToString::to_string));

    let mut stdout = String::new();
    for line in &blocking {
        let _ = writeln!(stdout, "error: {line}");
    }
    for line in &notes {
        let _ = writeln!(stdout, "note: {line}");
    }
    let _ = writeln!(stdout, "check: {} blocking, {} notes", blocking.len(), notes.len());
    Outcome { code: if blocking.is_empty() { EXIT_OK } else { EXIT_FINDINGS }, stdout, stderr: String::new() }
}

/// Catalog lints and ledger links only.
pub fn cmd_lint(project: &Path) -> Outcome {
    let project = match load(project) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let mut stdout = String::new();
    let mut blocking = 0;
    for finding in lint_catalog(&project.catalog, &project.ontology, &project.scenes) {
        let level = if finding.is_blocking() { "error" } else { "note" };
        blocking += usize::from(finding.is_blocking());
        let _ = writeln!(stdout, "{level}: {finding}");
    }
    for issue in project.ledger.check_catalog(&project.catalog) {
        blocking += 1;
        let _ = writeln!(stdout, "error: {issue}");
    }
    let _ = writeln!(stdout, "lint: {blocking} blocking");
    Outcome { code: if blocking == 0 { EXIT_OK } else { EXIT_FINDINGS }, stdout, stderr: String::new() }
}

/// Runs inference on one scenario. Unknown classes are reported as
/// warnings but do not stop inference; the flag is false when the fixpoint
/// is inconsistent.
pub fn run_scenario(project: &Project, scenario: &str, all_traces: bool) -> Result<(FactBase, String, bool), Outcome> {
    let Some(scene) = project.scene(scenario) else {
        return Err(Outcome::fail(EXIT_UNKNOWN_SCENARIO, format!("unknown scenario `{scenario}`")));
    };
    let mut stderr = String::new();
    for issue in scene.symbol_issues(&project.ontology) {
        let _ = writeln!(stderr, "warning: {issue}");
    }
    let options = InferOptions { record_all_traces: all_traces, ..lenient() };
    match infer_with(&project.ontology, scene, &project.catalog, &options) {
        Ok(base) => Ok((base, stderr, true)),
        Err(InferenceError::InconsistentState { factbase, issues }) => {
            for issue in issues {
                let _ = writeln!(stderr, "error: inconsistent: {issue}");
            }
            Ok((*factbase, stderr, false))
        }
        Err(e) => Err(Outcome::fail(EXIT_INPUT, e)),
    }
}

/// Writes `<scenario>.facts` (and `<scenario>.traces` with all traces) and
/// prints the derived behavior facts.
pub fn cmd_infer(project: &Path, scenario: &str, options: &RunOptions) -> Outcome {
    let project = match load(project) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let all_traces = options.all_traces || project.config.record_all_traces;
    let (base, stderr, consistent) = match run_scenario(&project, scenario, all_traces) {
        Ok(r) => r,
        Err(o) => return o,
    };
    let dump = base.dump();
    let traces = base.trace_dump();
    let mut files = vec![(format!("{scenario}.facts"), dump.as_str())];
    if all_traces {
        files.push((format!("{scenario}.traces"), traces.as_str()));
    }
    let written = match write_outputs(&output_dir(&project, options), &files) {
        Ok(w) => w,
        Err(o) => return o,
    };

    let mut stdout = String::new();
    for (fact, trace) in base.derived() {
        if project.config.behavior.contains(&fact.predicate) {
            let _ = writeln!(stdout, "behavior {fact} rule={}", trace.rule_label());
        }
    }
    let _ = writeln!(
        stdout,
        "{scenario}: {} facts, {} derived, {} rounds",
        base.len(),
        base.derived().count(),
        base.rounds()
    );
    for path in written {
        let _ = writeln!(stdout, "wrote {}", path.display());
    }
    Outcome { code: if consistent { EXIT_OK } else { EXIT_FINDINGS }, stdout, stderr }
}

/// Verifies all scenarios; writes `verify.txt` and `verify.json`.
pub fn cmd_verify(project: &Path, options: &RunOptions) -> Outcome {
    let project = match load(project) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let report = match verify_catalog(
        &project.ontology,
        &project.catalog,
        &project.scenes,
        &project.expectations,
        &project.ledger,
    ) {
        Ok(r) => r,
        Err(e) => return Outcome::fail(EXIT_INPUT, e),
    };
    let text = report.to_string();
    let json = report.to_json() + "\n";
    let written = match write_outputs(
        &output_dir(&project, options),
        &[("verify.txt".to_string(), text.as_str()), ("verify.json".to_string(), json.as_str())],
    ) {
        Ok(w) => w,
        Err(o) => return o,
    };
    let mut stdout = text;
    for path in written {
        let _ = writeln!(stdout, "wrote {}", path.display());
    }
    Outcome { code: if report.success() { EXIT_OK } else { EXIT_FINDINGS }, stdout, stderr: String::new() }
}

#[derive(Serialize)]
struct TraceOutput<'a> {
    scenario: &'a str,
    fact: &'a GroundFact,
    tree: &'a DerivationTree,
    provenance: &'a TraceReport,
}

fn parse_fact(text: &str) -> Result<GroundFact, Outcome> {
    let invalid = |e: crate::ParseError| Outcome::fail(EXIT_INPUT, format!("--fact: {e}"));
    let tokens = tokenize_line(text, 1).map_err(invalid)?;
    let mut cursor = Cursor::new(&tokens, 1, text);
    let fact = parse_ground_atom(&mut cursor).map_err(invalid)?;
    cursor.expect_end().map_err(invalid)?;
    Ok(fact)
}

/// Explains one fact of a scenario and links it to its sources. Returns the
/// text and JSON renderings and any warnings.
pub fn trace_documents(project: &Project, scenario: &str, fact: &str) -> Result<(String, String, String), Outcome> {
    let fact = parse_fact(fact)?;
    let (base, stderr, _) = run_scenario(project, scenario, false)?;
    let tree = explain(&base, &fact).map_err(|e| Outcome {
        code: EXIT_NOT_DERIVABLE,
        stdout: String::new(),
        stderr: format!("{stderr}error: {e}\n"),
    })?;
    let report = TraceReport::for_fact(&base, &project.catalog, &project.ledger, &fact)
        .map_err(|e| Outcome::fail(EXIT_INPUT, e))?;
    let text = format!("scenario {scenario}\n\n{tree}\n{}", report.to_text());
    let json = serde_json::to_string_pretty(&TraceOutput { scenario, fact: &fact, tree: &tree, provenance: &report })
        .expect("trace serializes")
        + "\n";
    Ok((text, json, stderr))
}

/// Writes `<scenario>.trace.txt` and `<scenario>.trace.json`.
pub fn cmd_trace(project: &Path, scenario: &str, fact: &str, options: &RunOptions) -> Outcome {
    let project = match load(project) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let (text, json, stderr) = match trace_documents(&project, scenario, fact) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let written = match write_outputs(
        &output_dir(&project, options),
        &[(format!("{scenario}.trace.txt"), text.as_str()), (format!("{scenario}.trace.json"), json.as_str())],
    ) {
        Ok(w) => w,
        Err(o) => return o,
    };
    let mut stdout = text;
    for path in written {
        let _ = writeln!(stdout, "wrote {}", path.display());
    }
    Outcome { code: EXIT_OK, stdout, stderr }
}
