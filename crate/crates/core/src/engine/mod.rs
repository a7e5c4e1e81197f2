//! Forward chaining to a least fixpoint.
//!
//! [`infer`] evaluates the formal rules of a catalog semi-naively: each
//! round only considers rule instantiations that use at least one fact
//! produced in the previous round. [`naive_infer`] re-matches every rule
//! against every fact each round and is kept as an independent oracle.
//!
//! Both start from the scene's asserted facts and close them under the class
//! taxonomy (every member of a class is a member of its ancestors) and under
//! symmetric object properties. The same closure is applied to the output of
//! every round. Within a round, rules fire in catalog order and the
//! instantiations of one rule in lexicographic order of their bindings, so
//! the first trace recorded for a fact is deterministic.

mod closure;
mod explain;
mod factbase;
mod matching;
mod naive;
mod seminaive;

use thiserror::Error;

use crate::ontology::{Inconsistency, OntologyError};
use crate::rules::{Atom, RuleCatalog};

pub use explain::{explain, DerivationTree, ExplainError};
pub use factbase::{Bindings, ClosureKind, DerivationTrace, FactBase, Origin};
pub use naive::{naive_infer, naive_infer_with};
pub use seminaive::{infer, infer_with};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InferOptions {
    /// Keep every derivation of a derived fact, not just the first.
    pub record_all_traces: bool,
    /// Treat classes the ontology does not declare as roots instead of
    /// failing. Used by the verification harness, which reports such
    /// classes separately.
    pub tolerate_unknown_classes: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error("rule {rule}: head variable ?{variable} does not occur in the body")]
    UnsafeRule { rule: String, variable: String },
    /// The fixpoint violates disjointness or a functional bool property. The
    /// fixpoint is returned for diagnosis.
    #[error("inconsistent fixpoint: {}", .issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InconsistentState { factbase: Box<FactBase>, issues: Vec<Inconsistency> },
}

impl InferenceError {
    /// The fixpoint, when one was computed.
    pub fn factbase(&self) -> Option<&FactBase> {
        match self {
            InferenceError::InconsistentState { factbase, .. } => Some(factbase),
            _ => None,
        }
    }
}

/// One head atom of a formal rule; conjunctive heads fire as separate rules
/// sharing the rule id.
#[derive(Debug, Clone)]
pub(crate) struct CompiledRule<'a> {
    pub rule_id: &'a str,
    pub head_index: usize,
    pub head_count: usize,
    pub body: &'a [Atom],
    pub head: &'a Atom,
}

pub(crate) fn compile(catalog: &RuleCatalog) -> Vec<CompiledRule<'_>> {
    catalog
        .formal_rules()
        .flat_map(|rule| {
            rule.head.iter().enumerate().map(move |(head_index, head)| CompiledRule {
                rule_id: &rule.id,
                head_index,
                head_count: rule.head.len(),
                body: &rule.body,
                head,
            })
        })
        .collect()
}
