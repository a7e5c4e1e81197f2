//! Runs a rule catalog over scenarios and compares the result with expert
//! expectations.
//!
//! A failing scenario gets exactly one failure class, by precedence:
//!
//! 1. `CONCEPT_GAP`: the scene, the expectation or the rules use a name the
//!    ontology does not declare, or use a declared name with the wrong shape.
//!    With a hole in the vocabulary, rule-level findings are not meaningful.
//! 2. `RULE_FAULT`: the fixpoint is inconsistent, a required fact is missing,
//!    a forbidden fact holds, or the catalog cannot be evaluated.
//! 3. `SOURCE_GAP`: only when the expectation carries a manual
//!    `flag source_gap` line. It is never inferred.
//!
//! Every finding is kept as evidence, whatever the class.

mod expect;
mod report;

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{infer_with, DerivationTrace, FactBase, InferOptions, InferenceError};
use crate::fact::GroundFact;
use crate::ontology::{fact_issues, Inconsistency, Ontology, Scene, SymbolIssue};
use crate::provenance::{Ledger, LinkIssue};
use crate::rules::{validate_against_ontology, RuleCatalog, ValidationIssue};

pub use expect::{parse_expectations, Expectation, ExpectationError};
pub use report::{CatalogReport, InferenceOnly, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FailureClass {
    /// Loop I: the rules are contradictory or not detailed enough.
    RuleFault,
    /// Loop II: the concepts are not modeled.
    ConceptGap,
    /// Loop III: the knowledge sources were chosen badly.
    SourceGap,
}

impl fmt::Display for FailureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureClass::RuleFault => "RULE_FAULT",
            FailureClass::ConceptGap => "CONCEPT_GAP",
            FailureClass::SourceGap => "SOURCE_GAP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "finding", rename_all = "snake_case")]
pub enum Finding {
    UnknownSymbol {
        symbol: String,
        context: String,
    },
    KindMismatch {
        subject: String,
        reason: String,
    },
    Inconsistency {
        issue: Inconsistency,
    },
    MissingExpected {
        fact: GroundFact,
    },
    /// A forbidden fact holds. Derived facts carry the rule instantiation
    /// that produced them; `origin` says how the fact got there otherwise.
    ForbiddenDerived {
        fact: GroundFact,
        origin: &'static str,
        #[serde(skip_serializing_if = "Option::is_none")]
        trace: Option<DerivationTrace>,
    },
    EvaluationError {
        message: String,
    },
    ManualFlag {
        note: String,
    },
}

impl Finding {
    /// The failure class this finding alone would produce.
    pub fn class(&self) -> FailureClass {
        match self {
            Finding::UnknownSymbol { .. } | Finding::KindMismatch { .. } => FailureClass::ConceptGap,
            Finding::Inconsistency { .. }
            | Finding::MissingExpected { .. }
            | Finding::ForbiddenDerived { .. }
            | Finding::EvaluationError { .. } => FailureClass::RuleFault,
            Finding::ManualFlag { .. } => FailureClass::SourceGap,
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::UnknownSymbol { symbol, context } => write!(f, "UnknownSymbol({symbol}): {context}"),
            Finding::KindMismatch { subject, reason } => write!(f, "KindMismatch({subject}): {reason}"),
            Finding::Inconsistency { issue } => write!(f, "Inconsistency: {issue}"),
            Finding::MissingExpected { fact } => write!(f, "MissingExpected({fact})"),
            Finding::ForbiddenDerived { fact, origin, trace } => {
                write!(f, "ForbiddenDerived({fact}): {origin}")?;
                if let Some(t) = trace {
                    write!(f, " rule={} bindings={}", t.rule_label(), t.bindings_text())?;
                }
                Ok(())
            }
            Finding::EvaluationError { message } => write!(f, "EvaluationError: {message}"),
            Finding::ManualFlag { note } => write!(f, "ManualFlag(source_gap): {note}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub scenario_id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_class: Option<FailureClass>,
    pub evidence: Vec<Finding>,
    /// Rule/ledger link problems. They never change the verdict; a refuted
    /// assumption flags the rules that depend on it.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub advisories: Vec<LinkIssue>,
}

impl Verdict {
    fn from_findings(scenario_id: &str, evidence: Vec<Finding>, advisories: Vec<LinkIssue>) -> Self {
        let failure_class = evidence.iter().map(Finding::class).min_by_key(|c| match c {
            FailureClass::ConceptGap => 0,
            FailureClass::RuleFault => 1,
            FailureClass::SourceGap => 2,
        });
        Verdict {
            scenario_id: scenario_id.to_string(),
            status: if failure_class.is_some() { Status::Fail } else { Status::Pass },
            failure_class,
            evidence,
            advisories,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("scenario id `{0}` is used by more than one scene")]
    DuplicateScenarioId(String),
    #[error("more than one expectation for scenario `{0}`")]
    DuplicateExpectation(String),
    #[error("expectation for scenario `{0}` has no matching scene")]
    UnmatchedExpectation(String),
}

fn symbol_finding(issue: SymbolIssue) -> Finding {
    match issue {
        SymbolIssue::UnknownSymbol { symbol, context } => Finding::UnknownSymbol { symbol, context },
        SymbolIssue::KindMismatch { fact, reason } => Finding::KindMismatch { subject: fact.to_string(), reason },
    }
}

fn validation_finding(issue: ValidationIssue) -> Finding {
    match issue {
        ValidationIssue::UnknownConcept { location, predicate } => {
            Finding::UnknownSymbol { symbol: predicate, context: location.to_string() }
        }
        ValidationIssue::KindMismatch { location, atom, reason } => {
            Finding::KindMismatch { subject: atom, reason: format!("{location}: {reason}") }
        }
    }
}

/// Evaluates one scenario against its expectation.
pub fn verify_scenario(
    ontology: &Ontology,
    catalog: &RuleCatalog,
    scene: &Scene,
    expectation: &Expectation,
    ledger: &Ledger,
) -> Verdict {
    let mut evidence: Vec<Finding> = Vec::new();
    evidence.extend(scene.symbol_issues(ontology).into_iter().map(symbol_finding));
    for fact in expectation.must_derive.iter().chain(&expectation.must_not_derive) {
        evidence.extend(fact_issues(fact, ontology, Some(&scene.individuals)).into_iter().map(|issue| match issue {
            SymbolIssue::UnknownSymbol { symbol, context } => {
                Finding::UnknownSymbol { symbol, context: format!("expectation: {context}") }
            }
            other => symbol_finding(other),
        }));
    }
    evidence.extend(validate_against_ontology(catalog, ontology).into_iter().map(validation_finding));

    let options = InferOptions { record_all_traces: false, tolerate_unknown_classes: true };
    let base: Option<FactBase> = match infer_with(ontology, scene, catalog, &options) {
        Ok(base) => Some(base),
        Err(InferenceError::InconsistentState { factbase, issues }) => {
            evidence.extend(issues.into_iter().map(|issue| Finding::Inconsistency { issue }));
            Some(*factbase)
        }
        Err(e) => {
            evidence.push(Finding::EvaluationError { message: e.to_string() });
            None
        }
    };

    if let Some(base) = &base {
        for fact in &expectation.must_derive {
            if !base.contains(fact) {
                evidence.push(Finding::MissingExpected { fact: fact.clone() });
            }
        }
        for fact in &expectation.must_not_derive {
            if let Some(origin) = base.origin(fact) {
                evidence.push(Finding::ForbiddenDerived {
                    fact: fact.clone(),
                    origin: origin.label(),
                    trace: base.first_trace(fact).cloned(),
                });
            }
        }
    }
    evidence.extend(expectation.source_gaps.iter().map(|note| Finding::ManualFlag { note: note.clone() }));

    // Report each unknown name once per context.
    let mut seen = BTreeSet::new();
    evidence.retain(|f| seen.insert(f.to_string()));

    Verdict::from_findings(&scene.scenario_id, evidence, ledger.check_catalog(catalog))
}

/// Verifies every scene that has an expectation, in parallel. Scenes
/// without one are evaluated for information only.
pub fn verify_catalog(
    ontology: &Ontology,
    catalog: &RuleCatalog,
    scenes: &[Scene],
    expectations: &[Expectation],
    ledger: &Ledger,
) -> Result<CatalogReport, VerifyError> {
    let mut ids = BTreeSet::new();
    for scene in scenes {
        if !ids.insert(scene.scenario_id.as_str()) {
            return Err(VerifyError::DuplicateScenarioId(scene.scenario_id.clone()));
        }
    }
    let mut expected = BTreeSet::new();
    for e in expectations {
        if !expected.insert(e.scenario_id.as_str()) {
            return Err(VerifyError::DuplicateExpectation(e.scenario_id.clone()));
        }
        if !ids.contains(e.scenario_id.as_str()) {
            return Err(VerifyError::UnmatchedExpectation(e.scenario_id.clone()));
        }
    }

    enum Outcome {
        Checked(Verdict),
        Unchecked(InferenceOnly),
    }
    let outcomes: Vec<Outcome> = scenes
        .par_iter()
        .map(|scene| match expectations.iter().find(|e| e.scenario_id == scene.scenario_id) {
            Some(e) => Outcome::Checked(verify_scenario(ontology, catalog, scene, e, ledger)),
            None => Outcome::Unchecked(InferenceOnly::run(ontology, catalog, scene)),
        })
        .collect();

    let mut verdicts = Vec::new();
    let mut unchecked = Vec::new();
    for outcome in outcomes {
        match outcome {
            Outcome::Checked(v) => verdicts.push(v),
            Outcome::Unchecked(u) => unchecked.push(u),
        }
    }
    verdicts.sort_by(|a, b| a.scenario_id.cmp(&b.scenario_id));
    unchecked.sort_by(|a, b| a.scenario_id.cmp(&b.scenario_id));
    Ok(CatalogReport::new(verdicts, unchecked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{parse_ontology, parse_scene};
    use crate::rules::parse_rules;

    const ONTO: &str = "class Zone\nclass Ego\nobjprop p\nobjprop q\ndataprop b range bool\ndisjoint Zone Ego\n";
    const RULES: &str = "rule R1 \"p gives q\"\n  when p(?x, ?y) then q(?x, ?y)\n";
    const SCENE: &str = "scenario s \"t\"\nindividual a : Zone\nindividual c : Zone\nfact p(a, c)\n";

    fn run(scene: &str, expect: &str, rules: &str) -> Verdict {
        let onto = parse_ontology(ONTO).unwrap();
        let scene = parse_scene(scene).unwrap();
        let exp = &parse_expectations(expect).unwrap()[0];
        verify_scenario(&onto, &parse_rules(rules).unwrap(), &scene, exp, &Ledger::new())
    }

    #[test]
    fn pass_when_expectations_hold() {
        let v = run(SCENE, "expect s\nmust q(a, c)\nforbid q(c, a)\n", RULES);
        assert_eq!(v.status, Status::Pass);
        assert!(v.evidence.is_empty() && v.failure_class.is_none());
    }

    #[test]
    fn missing_and_forbidden_are_rule_faults() {
        let v = run(SCENE, "expect s\nmust q(c, a)\n", RULES);
        assert_eq!(v.failure_class, Some(FailureClass::RuleFault));
        assert_eq!(v.evidence, vec![Finding::MissingExpected { fact: GroundFact::object("q", "c", "a") }]);

        let v = run(SCENE, "expect s\nforbid q(a, c)\n", RULES);
        let Finding::ForbiddenDerived { trace: Some(t), origin, .. } = &v.evidence[0] else { panic!("{v:?}") };
        assert_eq!((t.rule_id.as_str(), *origin), ("R1", "derived"));
    }

    #[test]
    fn unknown_symbols_take_precedence() {
        let scene = "scenario s \"t\"\nindividual a : Zone\nindividual c : Nebel\nfact p(a, c)\n";
        let v = run(scene, "expect s\nmust q(c, a)\nflag source_gap \"x\"\n", RULES);
        assert_eq!(v.failure_class, Some(FailureClass::ConceptGap));
        assert!(v.evidence.iter().any(|f| matches!(f, Finding::UnknownSymbol { symbol, .. } if symbol == "Nebel")));
        assert!(v.evidence.iter().any(|f| matches!(f, Finding::MissingExpected { .. })));
        assert!(v.evidence.iter().any(|f| matches!(f, Finding::ManualFlag { .. })));

        let v = run(SCENE, "expect s\nmust r(a, c)\n", RULES);
        assert_eq!(v.failure_class, Some(FailureClass::ConceptGap));
    }

    #[test]
    fn inconsistency_is_a_rule_fault() {
        let scene = "scenario s \"t\"\nindividual a : Zone\nfact Ego(a)\n";
        let v = run(scene, "expect s\n", RULES);
        assert_eq!(v.failure_class, Some(FailureClass::RuleFault));
        assert!(matches!(v.evidence[0], Finding::Inconsistency { .. }));
    }

    #[test]
    fn source_gap_only_from_flag() {
        let v = run(SCENE, "expect s\nmust q(a, c)\nflag source_gap \"should also slow down\"\n", RULES);
        assert_eq!(v.failure_class, Some(FailureClass::SourceGap));
        assert_eq!(v.status, Status::Fail);
    }

    #[test]
    fn catalog_errors_and_ordering() {
        let onto = parse_ontology(ONTO).unwrap();
        let catalog = parse_rules(RULES).unwrap();
        let s1 = parse_scene(SCENE).unwrap();
        let mut s2 = s1.clone();
        assert_eq!(
            verify_catalog(&onto, &catalog, &[s1.clone(), s2.clone()], &[], &Ledger::new()).unwrap_err(),
            VerifyError::DuplicateScenarioId("s".into())
        );
        s2.scenario_id = "r".into();
        let exps = parse_expectations("expect s\nmust q(a, c)\nexpect r\nmust q(c, a)\n").unwrap();
        let report = verify_catalog(&onto, &catalog, &[s1.clone(), s2.clone()], &exps, &Ledger::new()).unwrap();
        let ids: Vec<_> = report.verdicts.iter().map(|v| v.scenario_id.as_str()).collect();
        assert_eq!(ids, vec!["r", "s"]);
        assert!(!report.success());

        let report = verify_catalog(&onto, &catalog, &[s1], &[], &Ledger::new()).unwrap();
        assert!(report.verdicts.is_empty() && report.success());
        assert_eq!(report.unchecked.len(), 1);

        let empty = verify_catalog(&onto, &catalog, &[], &[], &Ledger::new()).unwrap();
        assert!(empty.success() && empty.verdicts.is_empty());
        assert_eq!(
            verify_catalog(&onto, &catalog, &[], &exps, &Ledger::new()).unwrap_err(),
            VerifyError::UnmatchedExpectation("s".into())
        );
    }
}
