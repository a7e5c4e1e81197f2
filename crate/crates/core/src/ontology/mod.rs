//! The terminological model (classes, properties, disjointness) and the
//! assertional model (scenes of individuals and ground facts).
//!
//! An [`Ontology`] is built once, either from the line format understood by
//! [`parse_ontology`] or through the `add_*` methods, and is read-only
//! afterwards. Scenes are parsed without consulting the ontology; unresolved
//! symbols are reported by [`Scene::symbol_issues`] instead of failing the
//! parse, so that a scene using vocabulary the ontology lacks can still be
//! loaded and classified.

mod closure;
mod consistency;
mod parse;
mod scene;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::fact::LiteralKind;
use crate::syntax::ParseError;

pub use closure::{membership_closure, taxonomy_closure, Taxonomy};
pub use consistency::{check_consistency, Inconsistency};
pub use parse::parse_ontology;
pub(crate) use scene::fact_issues;
pub use scene::{parse_scene, Scene, SceneError, SymbolIssue};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub parent: Option<String>,
}

impl ClassDecl {
    pub fn root(name: impl Into<String>) -> Self {
        Self { name: name.into(), parent: None }
    }

    pub fn child(name: impl Into<String>, parent: impl Into<String>) -> Self {
        Self { name: name.into(), parent: Some(parent.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjPropDecl {
    pub name: String,
    pub domain: Option<String>,
    pub range: Option<String>,
    pub symmetric: bool,
}

impl ObjPropDecl {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), domain: None, range: None, symmetric: false }
    }

    pub fn symmetric(mut self) -> Self {
        self.symmetric = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataPropDecl {
    pub name: String,
    pub domain: Option<String>,
    pub range: LiteralKind,
}

impl DataPropDecl {
    pub fn new(name: impl Into<String>, range: LiteralKind) -> Self {
        Self { name: name.into(), domain: None, range }
    }
}

/// What a predicate name denotes in an ontology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredicateKind {
    Class,
    ObjectProperty,
    DataProperty(LiteralKind),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("name `{0}` is declared more than once")]
    DuplicateName(String),
    #[error("class `{0}` cannot be its own parent")]
    SelfParent(String),
    #[error("`{from}` refers to undeclared class `{name}`")]
    UnresolvedReference { from: String, name: String },
    #[error("subclass cycle through {}", .0.join(" -> "))]
    CycleDetected(Vec<String>),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<OntologyError>,
    },
}

/// Classes, properties and disjointness axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ontology {
    classes: BTreeMap<String, ClassDecl>,
    object_properties: BTreeMap<String, ObjPropDecl>,
    data_properties: BTreeMap<String, DataPropDecl>,
    disjoint_pairs: BTreeSet<(String, String)>,
}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_fresh(&self, name: &str) -> Result<(), OntologyError> {
        if self.is_declared(name) {
            Err(OntologyError::DuplicateName(name.to_string()))
        } else {
            Ok(())
        }
    }

    /// Adds a class. The parent need not exist yet; see [`Ontology::validate`].
    pub fn add_class(&mut self, decl: ClassDecl) -> Result<(), OntologyError> {
        self.check_fresh(&decl.name)?;
        if decl.parent.as_deref() == Some(decl.name.as_str()) {
            return Err(OntologyError::SelfParent(decl.name));
        }
        self.classes.insert(decl.name.clone(), decl);
        Ok(())
    }

    pub fn add_object_property(&mut self, decl: ObjPropDecl) -> Result<(), OntologyError> {
        self.check_fresh(&decl.name)?;
        self.object_properties.insert(decl.name.clone(), decl);
        Ok(())
    }

    pub fn add_data_property(&mut self, decl: DataPropDecl) -> Result<(), OntologyError> {
        self.check_fresh(&decl.name)?;
        self.data_properties.insert(decl.name.clone(), decl);
        Ok(())
    }

    /// Declares two classes disjoint. The pair is stored unordered.
    pub fn add_disjoint(&mut self, a: impl Into<String>, b: impl Into<String>) {
        let (a, b) = (a.into(), b.into());
        let pair = if a <= b { (a, b) } else { (b, a) };
        self.disjoint_pairs.insert(pair);
    }

    /// Checks that every referenced class exists and that the taxonomy is acyclic.
    pub fn validate(&self) -> Result<(), OntologyError> {
        let check = |from: &str, name: &Option<String>| match name {
            Some(n) if !self.classes.contains_key(n) => {
                Err(OntologyError::UnresolvedReference { from: from.to_string(), name: n.clone() })
            }
            _ => Ok(()),
        };
        for class in self.classes.values() {
            check(&class.name, &class.parent)?;
        }
        for prop in self.object_properties.values() {
            check(&prop.name, &prop.domain)?;
            check(&prop.name, &prop.range)?;
        }
        for prop in self.data_properties.values() {
            check(&prop.name, &prop.domain)?;
        }
        for (a, b) in &self.disjoint_pairs {
            check("disjoint", &Some(a.clone()))?;
            check("disjoint", &Some(b.clone()))?;
        }
        taxonomy_closure(self).map(|_| ())
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.classes.contains_key(name)
            || self.object_properties.contains_key(name)
            || self.data_properties.contains_key(name)
    }

    pub fn predicate_kind(&self, name: &str) -> Option<PredicateKind> {
        if self.classes.contains_key(name) {
            Some(PredicateKind::Class)
        } else if self.object_properties.contains_key(name) {
            Some(PredicateKind::ObjectProperty)
        } else {
            self.data_properties.get(name).map(|d| PredicateKind::DataProperty(d.range))
        }
    }

    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.get(name)
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassDecl> {
        self.classes.values()
    }

    pub fn object_property(&self, name: &str) -> Option<&ObjPropDecl> {
        self.object_properties.get(name)
    }

    pub fn object_properties(&self) -> impl Iterator<Item = &ObjPropDecl> {
        self.object_properties.values()
    }

    pub fn data_property(&self, name: &str) -> Option<&DataPropDecl> {
        self.data_properties.get(name)
    }

    pub fn data_properties(&self) -> impl Iterator<Item = &DataPropDecl> {
        self.data_properties.values()
    }

    pub fn disjoint_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.disjoint_pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn is_symmetric(&self, property: &str) -> bool {
        self.object_properties.get(property).is_some_and(|p| p.symmetric)
    }

    /// Every declared class and property name, sorted.
    pub fn vocabulary(&self) -> BTreeSet<&str> {
        self.classes
            .keys()
            .chain(self.object_properties.keys())
            .chain(self.data_properties.keys())
            .map(String::as_str)
            .collect()
    }
}
