use std::fmt;

use serde::Serialize;

use crate::ontology::{Ontology, PredicateKind};

use super::{Atom, RuleCatalog, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    Body,
    Head,
}

/// Position of an atom in a catalog: rule index in file order, clause and
/// index within the clause.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AtomLocation {
    pub rule_index: usize,
    pub rule: String,
    pub clause: Clause,
    pub position: usize,
}

impl fmt::Display for AtomLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clause = match self.clause {
            Clause::Body => "when",
            Clause::Head => "then",
        };
        write!(f, "rule {} {clause} #{}", self.rule, self.position + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    /// The atom's predicate is not declared in the ontology.
    UnknownConcept { location: AtomLocation, predicate: String },
    /// The predicate is declared but used with the wrong shape or literal kind.
    KindMismatch { location: AtomLocation, atom: String, reason: String },
}

impl ValidationIssue {
    pub fn location(&self) -> &AtomLocation {
        match self {
            ValidationIssue::UnknownConcept { location, .. } | ValidationIssue::KindMismatch { location, .. } => {
                location
            }
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::UnknownConcept { location, predicate } => {
                write!(f, "UnknownConcept({predicate}) at {location}")
            }
            ValidationIssue::KindMismatch { location, atom, reason } => {
                write!(f, "KindMismatch({atom}) at {location}: {reason}")
            }
        }
    }
}

enum Problem {
    Unknown,
    Mismatch(String),
}

fn check_atom(atom: &Atom, ontology: &Ontology) -> Result<(), Problem> {
    let kind = ontology.predicate_kind(&atom.predicate).ok_or(Problem::Unknown)?;
    let individual_like = |t: &Term| matches!(t, Term::Var(_) | Term::Individual(_));
    match (kind, atom.args.as_slice()) {
        (PredicateKind::Class, [t]) if individual_like(t) => Ok(()),
        (PredicateKind::Class, [_]) => Err(Problem::Mismatch("class membership of a literal".into())),
        (PredicateKind::Class, _) => Err(Problem::Mismatch(format!("class `{}` used as a property", atom.predicate))),
        (PredicateKind::ObjectProperty, [a, b]) if individual_like(a) && individual_like(b) => Ok(()),
        (PredicateKind::ObjectProperty, [_, _]) => {
            Err(Problem::Mismatch(format!("object property `{}` applied to a literal", atom.predicate)))
        }
        (PredicateKind::DataProperty(range), [subject, object]) => {
            if !individual_like(subject) {
                return Err(Problem::Mismatch("literal in subject position".into()));
            }
            match object {
                Term::Var(_) => Ok(()),
                Term::Literal(lit) if lit.kind() == range => Ok(()),
                Term::Literal(lit) => Err(Problem::Mismatch(format!(
                    "`{}` has range {range}, got {} literal",
                    atom.predicate,
                    lit.kind()
                ))),
                Term::Individual(i) => {
                    Err(Problem::Mismatch(format!("data property `{}` applied to individual `{i}`", atom.predicate)))
                }
            }
        }
        (_, _) => Err(Problem::Mismatch(format!("property `{}` used as a class", atom.predicate))),
    }
}

/// Reports every atom whose predicate the ontology lacks or uses with the
/// wrong shape. Each atom yields at most one issue; atoms not mentioned are
/// resolvable.
pub fn validate_against_ontology(catalog: &RuleCatalog, ontology: &Ontology) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    for (rule_index, rule) in catalog.rules.iter().enumerate() {
        let clauses = [(Clause::Body, &rule.body), (Clause::Head, &rule.head)];
        for (clause, atoms) in clauses {
            for (position, atom) in atoms.iter().enumerate() {
                let location = AtomLocation { rule_index, rule: rule.id.clone(), clause, position };
                match check_atom(atom, ontology) {
                    Ok(()) => {}
                    Err(Problem::Unknown) => {
                        issues.push(ValidationIssue::UnknownConcept { location, predicate: atom.predicate.clone() })
                    }
                    Err(Problem::Mismatch(reason)) => {
                        issues.push(ValidationIssue::KindMismatch { location, atom: atom.to_string(), reason })
                    }
                }
            }
        }
    }
    issues
}
