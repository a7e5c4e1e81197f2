use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fact::GroundFact;

use super::{Bindings, FactBase, Origin};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplainError {
    #[error("fact `{0}` is not in the fixpoint")]
    UnknownFact(GroundFact),
}

/// Why a fact holds, down to asserted facts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationTree {
    pub fact: GroundFact,
    pub origin: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bindings: Option<Bindings>,
    pub children: Vec<DerivationTree>,
}

impl DerivationTree {
    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::size).sum::<usize>()
    }

    /// Every asserted fact at the leaves.
    pub fn leaves(&self) -> Vec<&GroundFact> {
        if self.children.is_empty() {
            return vec![&self.fact];
        }
        self.children.iter().flat_map(DerivationTree::leaves).collect()
    }

    /// Rule labels used anywhere in the tree, in pre-order.
    pub fn rules(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.rule.as_deref().into_iter().collect();
        for child in &self.children {
            out.extend(child.rules());
        }
        out
    }

    fn render(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        write!(f, "{:indent$}{} [{}", "", self.fact, self.origin, indent = depth * 2)?;
        if let Some(rule) = &self.rule {
            write!(f, " {rule}")?;
        }
        writeln!(f, "]")?;
        for child in &self.children {
            child.render(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, 0)
    }
}

/// Builds the derivation tree of `fact` from the first recorded trace of
/// each derived fact.
pub fn explain(base: &FactBase, fact: &GroundFact) -> Result<DerivationTree, ExplainError> {
    let origin = base.origin(fact).ok_or_else(|| ExplainError::UnknownFact(fact.clone()))?;
    let tree = match origin {
        Origin::Asserted => DerivationTree {
            fact: fact.clone(),
            origin: origin.label(),
            rule: None,
            bindings: None,
            children: Vec::new(),
        },
        Origin::Closure { premise, .. } => DerivationTree {
            fact: fact.clone(),
            origin: origin.label(),
            rule: None,
            bindings: None,
            children: vec![explain(base, premise)?],
        },
        Origin::Derived => {
            let trace = base.first_trace(fact).expect("derived facts carry a trace");
            let children = trace.premises.iter().map(|p| explain(base, p)).collect::<Result<_, _>>()?;
            DerivationTree {
                fact: fact.clone(),
                origin: origin.label(),
                rule: Some(trace.rule_label()),
                bindings: Some(trace.bindings.clone()),
                children,
            }
        }
    };
    Ok(tree)
}
