use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fact::{GroundFact, Value};
use crate::syntax::{parse_ground_atom, token_lines, Cursor, ParseError, Token};

use super::{Ontology, PredicateKind};

/// One scene of a functional scenario: named individuals with their asserted
/// class plus ground facts. Individual names are taken to denote distinct
/// entities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scene {
    pub scenario_id: String,
    pub title: String,
    pub individuals: BTreeMap<String, String>,
    pub facts: BTreeSet<GroundFact>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("missing `scenario` header")]
    MissingHeader,
    #[error("line {0}: second `scenario` header")]
    DuplicateHeader(usize),
    #[error("line {line}: individual `{name}` declared twice")]
    DuplicateIndividual { line: usize, name: String },
}

impl Scene {
    pub fn new(scenario_id: impl Into<String>, title: impl Into<String>) -> Self {
        Self {
            scenario_id: scenario_id.into(),
            title: title.into(),
            individuals: BTreeMap::new(),
            facts: BTreeSet::new(),
        }
    }

    /// Every `(individual, class)` pair asserted in the scene, from both
    /// `individual` lines and unary facts.
    pub fn class_assertions(&self) -> impl Iterator<Item = (&str, &str)> {
        let declared = self.individuals.iter().map(|(i, c)| (i.as_str(), c.as_str()));
        let facts = self.facts.iter().filter_map(|f| match f.args.as_slice() {
            [Value::Individual(i)] => Some((i.as_str(), f.predicate.as_str())),
            _ => None,
        });
        declared.chain(facts)
    }

    /// All asserted facts, with `individual` declarations as class assertions.
    pub fn asserted_facts(&self) -> BTreeSet<GroundFact> {
        let mut out = self.facts.clone();
        for (individual, class) in &self.individuals {
            out.insert(GroundFact::class(class.as_str(), individual.as_str()));
        }
        out
    }

    /// Symbols the ontology cannot resolve and facts that misuse declared
    /// vocabulary. An empty result means the scene is well-formed.
    pub fn symbol_issues(&self, ontology: &Ontology) -> Vec<SymbolIssue> {
        let mut issues = Vec::new();
        for (individual, class) in &self.individuals {
            match ontology.predicate_kind(class) {
                Some(PredicateKind::Class) => {}
                Some(_) => issues.push(SymbolIssue::KindMismatch {
                    fact: GroundFact::class(class.as_str(), individual.as_str()),
                    reason: format!("`{class}` is a property, not a class"),
                }),
                None => issues.push(SymbolIssue::UnknownSymbol {
                    symbol: class.clone(),
                    context: format!("class of individual `{individual}`"),
                }),
            }
        }
        for fact in &self.facts {
            issues.extend(fact_issues(fact, ontology, Some(&self.individuals)));
        }
        issues
    }
}

/// Checks one ground fact against the ontology. With `individuals` given,
/// individuals the scene does not declare are reported too.
pub(crate) fn fact_issues(
    fact: &GroundFact,
    ontology: &Ontology,
    individuals: Option<&BTreeMap<String, String>>,
) -> Vec<SymbolIssue> {
    let mut issues = Vec::new();
    let mismatch = |reason: String| SymbolIssue::KindMismatch { fact: fact.clone(), reason };
    match (ontology.predicate_kind(&fact.predicate), fact.args.as_slice()) {
        (None, _) => issues.push(SymbolIssue::UnknownSymbol {
            symbol: fact.predicate.clone(),
            context: format!("predicate of `{fact}`"),
        }),
        (Some(PredicateKind::Class), [Value::Individual(_)]) => {}
        (Some(PredicateKind::Class), _) => {
            issues.push(mismatch(format!("class `{}` takes exactly one individual", fact.predicate)))
        }
        (Some(PredicateKind::ObjectProperty), [Value::Individual(_), Value::Individual(_)]) => {}
        (Some(PredicateKind::ObjectProperty), _) => {
            issues.push(mismatch(format!("object property `{}` relates two individuals", fact.predicate)))
        }
        (Some(PredicateKind::DataProperty(range)), [Value::Individual(_), Value::Literal(lit)]) => {
            if lit.kind() != range {
                issues.push(mismatch(format!("`{}` has range {range}, got {} literal", fact.predicate, lit.kind())));
            }
        }
        (Some(PredicateKind::DataProperty(range)), _) => issues
            .push(mismatch(format!("data property `{}` relates an individual to a {range} literal", fact.predicate))),
    }
    if let Some(known) = individuals {
        for individual in fact.individuals() {
            if !known.contains_key(individual) {
                issues.push(SymbolIssue::UnknownSymbol {
                    symbol: individual.to_string(),
                    context: format!("individual in `{fact}`"),
                });
            }
        }
    }
    issues
}

/// A scene or expectation element the ontology does not account for.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolIssue {
    /// A class, property or individual name that is not declared.
    UnknownSymbol { symbol: String, context: String },
    /// A declared name used with the wrong shape or literal kind.
    KindMismatch { fact: GroundFact, reason: String },
}

impl SymbolIssue {
    pub fn unknown_symbol(&self) -> Option<&str> {
        match self {
            SymbolIssue::UnknownSymbol { symbol, .. } => Some(symbol),
            SymbolIssue::KindMismatch { .. } => None,
        }
    }
}

impl fmt::Display for SymbolIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolIssue::UnknownSymbol { symbol, context } => {
                write!(f, "UnknownSymbol({symbol}): {context}")
            }
            SymbolIssue::KindMismatch { fact, reason } => write!(f, "KindMismatch({fact}): {reason}"),
        }
    }
}

/// Parses the scene format:
///
/// ```text
/// scenario <id> "<title>"
/// individual <name> : <Class>
/// fact <prop>(<arg>, <arg>)
/// fact <Class>(<individual>)
/// ```
pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let mut scene: Option<Scene> = None;
    for line in token_lines(text) {
        let (line_no, raw, tokens) = line?;
        let mut cursor = Cursor::new(&tokens, line_no, raw);
        if cursor.eat_keyword("scenario") {
            if scene.is_some() {
                return Err(SceneError::DuplicateHeader(line_no));
            }
            let id = cursor.expect_ident("scenario id")?;
            let title = cursor.expect_str("quoted title")?;
            cursor.expect_end()?;
            scene = Some(Scene::new(id, title));
            continue;
        }
        let Some(current) = scene.as_mut() else {
            if matches!(cursor.peek(), Some(Token::Ident(k)) if k == "individual" || k == "fact") {
                return Err(SceneError::MissingHeader);
            }
            return Err(cursor.error(&["`scenario`"]).into());
        };
        if cursor.eat_keyword("individual") {
            let name = cursor.expect_ident("individual name")?;
            cursor.expect(&Token::Colon, "`:`")?;
            let class = cursor.expect_ident("class name")?;
            cursor.expect_end()?;
            if current.individuals.contains_key(&name) {
                return Err(SceneError::DuplicateIndividual { line: line_no, name });
            }
            current.individuals.insert(name, class);
        } else if cursor.eat_keyword("fact") {
            let fact = parse_ground_atom(&mut cursor)?;
            cursor.expect_end()?;
            current.facts.insert(fact);
        } else {
            return Err(cursor.error(&["`scenario`", "`individual`", "`fact`"]).into());
        }
    }
    scene.ok_or(SceneError::MissingHeader)
}

impl fmt::Display for Scene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {} {}", self.scenario_id, crate::fact::quoted(&self.title))?;
        for (name, class) in &self.individuals {
            writeln!(f, "individual {name} : {class}")?;
        }
        for fact in &self.facts {
            writeln!(f, "fact {fact}")?;
        }
        Ok(())
    }
}
