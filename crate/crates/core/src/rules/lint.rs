use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::ontology::{Ontology, Scene};

use super::{Atom, RuleCatalog};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LintFinding {
    DuplicateId {
        rule: String,
    },
    /// Same body and head atoms (in any order) as an earlier rule.
    Redundant {
        rule: String,
        duplicate_of: String,
    },
    MissingProvenance {
        rule: String,
    },
    /// Declared vocabulary that no rule or scene uses. Informational.
    DeadVocabulary {
        name: String,
    },
}

impl LintFinding {
    pub fn is_blocking(&self) -> bool {
        !matches!(self, LintFinding::DeadVocabulary { .. })
    }
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LintFinding::DuplicateId { rule } => write!(f, "DuplicateId({rule})"),
            LintFinding::Redundant { rule, duplicate_of } => {
                write!(f, "Redundant({rule}): same body and head as {duplicate_of}")
            }
            LintFinding::MissingProvenance { rule } => write!(f, "MissingProvenance({rule})"),
            LintFinding::DeadVocabulary { name } => write!(f, "DeadVocabulary({name}) [info]"),
        }
    }
}

/// Catalog hygiene checks. A class counts as used when it or any of its
/// descendants is named by a rule or scene.
pub fn lint_catalog(catalog: &RuleCatalog, ontology: &Ontology, scenes: &[Scene]) -> Vec<LintFinding> {
    let mut findings = Vec::new();

    let mut seen_ids = BTreeSet::new();
    let mut reported = BTreeSet::new();
    for rule in &catalog.rules {
        if !seen_ids.insert(rule.id.as_str()) && reported.insert(rule.id.as_str()) {
            findings.push(LintFinding::DuplicateId { rule: rule.id.clone() });
        }
    }

    let mut shapes: BTreeMap<(BTreeSet<&Atom>, BTreeSet<&Atom>), &str> = BTreeMap::new();
    for rule in catalog.formal_rules() {
        let key = (rule.body.iter().collect(), rule.head.iter().collect());
        match shapes.get(&key) {
            Some(first) => {
                findings.push(LintFinding::Redundant { rule: rule.id.clone(), duplicate_of: first.to_string() })
            }
            None => {
                shapes.insert(key, &rule.id);
            }
        }
    }

    for rule in &catalog.rules {
        if rule.sources.is_empty() {
            findings.push(LintFinding::MissingProvenance { rule: rule.id.clone() });
        }
    }

    let mut used: BTreeSet<&str> = BTreeSet::new();
    for atom in catalog.rules.iter().flat_map(|r| r.atoms()) {
        used.insert(&atom.predicate);
    }
    for scene in scenes {
        used.extend(scene.individuals.values().map(String::as_str));
        used.extend(scene.facts.iter().map(|f| f.predicate.as_str()));
    }
    // Propagate use of a class to its ancestors.
    for name in used.clone() {
        let mut current = ontology.class(name);
        while let Some(parent) = current.and_then(|c| c.parent.as_deref()) {
            if !used.insert(parent) {
                break;
            }
            current = ontology.class(parent);
        }
    }
    for name in ontology.vocabulary() {
        if !used.contains(name) {
            findings.push(LintFinding::DeadVocabulary { name: name.to_string() });
        }
    }
    findings
}
