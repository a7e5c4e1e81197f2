//! The Horn-rule catalog: AST, parser, canonical printer, vocabulary
//! validation and catalog lints.
//!
//! Rule files look like this:
//!
//! ```text
//! rule R2 "A person in the entry zone wants to cross"
//!   source stvo-26-1
//!   assumption P1
//!   when Zone(?zoneGruen1)
//!      & Fussgaenger(?f2)
//!      & ist_in(?f2, ?zoneGruen1)
//!   then steht_in(?f2, ?zoneGruen1)
//! ```
//!
//! Bodies and heads are conjunctions joined by `&`; a line starting with `&`
//! continues the previous `when` or `then`. A rule may be marked `informal`
//! instead of carrying `when`/`then`, which keeps an umbrella norm in the
//! catalog for traceability without giving it a formal reading.

mod lint;
mod parse;
mod print;
mod validate;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::fact::{GroundFact, Literal, Value};

pub use lint::{lint_catalog, LintFinding};
pub use parse::{parse_rules, RuleError};
pub use validate::{validate_against_ontology, AtomLocation, Clause, ValidationIssue};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// Variable name without the leading `?`.
    Var(String),
    Individual(String),
    Literal(Literal),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self { predicate: predicate.into(), args }
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }

    /// Substitutes `binding` into the atom. `None` if a variable is unbound.
    pub fn ground(&self, binding: impl Fn(&str) -> Option<Value>) -> Option<GroundFact> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => binding(v),
                Term::Individual(i) => Some(Value::Individual(i.clone())),
                Term::Literal(l) => Some(Value::Literal(l.clone())),
            })
            .collect::<Option<Vec<_>>>()?;
        Some(GroundFact::new(self.predicate.clone(), args))
    }
}

/// A link from a rule to a passage of a knowledge source. The optional
/// quote is an excerpt that must appear verbatim in the passage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceLink {
    pub passage: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quote: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub gloss: String,
    pub sources: Vec<SourceLink>,
    pub assumptions: Vec<String>,
    pub body: Vec<Atom>,
    pub head: Vec<Atom>,
}

impl Rule {
    /// Informal rules carry only a gloss and provenance.
    pub fn is_formal(&self) -> bool {
        !self.body.is_empty()
    }

    pub fn body_variables(&self) -> BTreeSet<&str> {
        self.body.iter().flat_map(Atom::variables).collect()
    }

    /// Head variables that do not occur in the body.
    pub fn unsafe_variables(&self) -> Vec<&str> {
        let bound = self.body_variables();
        let mut out: Vec<&str> = self.head.iter().flat_map(Atom::variables).filter(|v| !bound.contains(v)).collect();
        out.dedup();
        out
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().chain(&self.head)
    }
}

/// Rules in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleCatalog {
    pub rules: Vec<Rule>,
}

impl RuleCatalog {
    pub fn new(rules: Vec<Rule>) -> Self {
        Self { rules }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn formal_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(|r| r.is_formal())
    }

    /// A copy of the catalog without the rule(s) carrying `id`.
    pub fn without(&self, id: &str) -> Self {
        Self { rules: self.rules.iter().filter(|r| r.id != id).cloned().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsafe_variables_listed_once() {
        let rule = Rule {
            id: "R".into(),
            gloss: String::new(),
            sources: vec![],
            assumptions: vec![],
            body: vec![Atom::new("Ego", vec![Term::var("e")])],
            head: vec![
                Atom::new("anhalten_in", vec![Term::var("e"), Term::var("z")]),
                Atom::new("Zone", vec![Term::var("z")]),
            ],
        };
        assert_eq!(rule.unsafe_variables(), vec!["z"]);
    }

    #[test]
    fn ground_substitutes_all_terms() {
        let atom = Atom::new("sachverhalt_gilt", vec![Term::var("x"), Term::Literal(Literal::Bool(true))]);
        let fact = atom.ground(|v| (v == "x").then(|| Value::individual("fuueb"))).unwrap();
        assert_eq!(fact.to_string(), "sachverhalt_gilt(fuueb, true)");
        assert!(atom.ground(|_| None).is_none());
    }
}
