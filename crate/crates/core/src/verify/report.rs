use std::fmt;

use serde::Serialize;

use crate::engine::{infer_with, InferOptions};
use crate::fact::GroundFact;
use crate::ontology::{Ontology, Scene};
use crate::rules::RuleCatalog;

use super::{FailureClass, Verdict};

/// A scenario without expectation: inference result only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InferenceOnly {
    pub scenario_id: String,
    pub derived: Vec<GroundFact>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl InferenceOnly {
    pub(crate) fn run(ontology: &Ontology, catalog: &RuleCatalog, scene: &Scene) -> Self {
        let options = InferOptions { record_all_traces: false, tolerate_unknown_classes: true };
        let (derived, error) = match infer_with(ontology, scene, catalog, &options) {
            Ok(base) => (base.derived_set().into_iter().collect(), None),
            Err(e) => {
                let derived = e.factbase().map(|b| b.derived_set().into_iter().collect()).unwrap_or_default();
                (derived, Some(e.to_string()))
            }
        };
        InferenceOnly { scenario_id: scene.scenario_id.clone(), derived, error }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    #[serde(rename = "PASS")]
    pub pass: usize,
    #[serde(rename = "RULE_FAULT")]
    pub rule_fault: usize,
    #[serde(rename = "CONCEPT_GAP")]
    pub concept_gap: usize,
    #[serde(rename = "SOURCE_GAP")]
    pub source_gap: usize,
}

impl Summary {
    pub fn failures(&self) -> usize {
        self.rule_fault + self.concept_gap + self.source_gap
    }
}

/// Verdicts of a scenario catalog, ordered by scenario id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogReport {
    pub verdicts: Vec<Verdict>,
    pub unchecked: Vec<InferenceOnly>,
    pub summary: Summary,
}

impl CatalogReport {
    pub(crate) fn new(verdicts: Vec<Verdict>, unchecked: Vec<InferenceOnly>) -> Self {
        let mut summary = Summary::default();
        for v in &verdicts {
            match v.failure_class {
                None => summary.pass += 1,
                Some(FailureClass::RuleFault) => summary.rule_fault += 1,
                Some(FailureClass::ConceptGap) => summary.concept_gap += 1,
                Some(FailureClass::SourceGap) => summary.source_gap += 1,
            }
        }
        CatalogReport { verdicts, unchecked, summary }
    }

    /// True iff no verdict failed.
    pub fn success(&self) -> bool {
        self.summary.failures() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for CatalogReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .verdicts
            .iter()
            .map(|v| v.scenario_id.len())
            .chain(self.unchecked.iter().map(|u| u.scenario_id.len()))
            .chain(["scenario".len()])
            .max()
            .unwrap_or(0);
        writeln!(f, "{:width$}  {:6}  {:11}  evidence", "scenario", "status", "class")?;
        for v in &self.verdicts {
            let class = v.failure_class.map_or("-".to_string(), |c| c.to_string());
            let mut evidence = v.evidence.iter();
            match evidence.next() {
                None => writeln!(f, "{:width$}  {:6}  {:11}  -", v.scenario_id, v.status.to_string(), class)?,
                Some(first) => {
                    writeln!(f, "{:width$}  {:6}  {:11}  {first}", v.scenario_id, v.status.to_string(), class)?;
                    for e in evidence {
                        writeln!(f, "{:width$}  {:6}  {:11}  {e}", "", "", "")?;
                    }
                }
            }
            for a in &v.advisories {
                writeln!(f, "{:width$}  {:6}  {:11}  advisory: {a}", "", "", "")?;
            }
        }
        for u in &self.unchecked {
            let what = match &u.error {
                Some(e) => format!("no expectation; inference failed: {e}"),
                None => format!("no expectation; {} derived facts", u.derived.len()),
            };
            writeln!(f, "{:width$}  {:6}  {:11}  {what}", u.scenario_id, "-", "-")?;
        }
        let s = &self.summary;
        writeln!(
            f,
            "summary: PASS={} RULE_FAULT={} CONCEPT_GAP={} SOURCE_GAP={}",
            s.pass, s.rule_fault, s.concept_gap, s.source_gap
        )
    }
}
