use crate::fact::{GroundFact, Value};
use crate::ontology::{taxonomy_closure, Ontology, Taxonomy};

use super::{ClosureKind, FactBase, InferenceError, Origin};

/// Taxonomy and symmetry closure over a growing fact base.
pub(crate) struct Closer<'a> {
    ontology: &'a Ontology,
    taxonomy: Taxonomy,
    tolerate_unknown: bool,
}

impl<'a> Closer<'a> {
    pub fn new(ontology: &'a Ontology, tolerate_unknown: bool) -> Result<Self, InferenceError> {
        Ok(Self { ontology, taxonomy: taxonomy_closure(ontology)?, tolerate_unknown })
    }

    fn implied(&self, fact: &GroundFact) -> Result<Vec<(GroundFact, ClosureKind)>, InferenceError> {
        match fact.args.as_slice() {
            [Value::Individual(_)] => match self.taxonomy.get(&fact.predicate) {
                Some(ancestors) => Ok(ancestors
                    .iter()
                    .map(|a| (GroundFact::new(a.as_str(), fact.args.clone()), ClosureKind::Subclass))
                    .collect()),
                None if self.tolerate_unknown => Ok(Vec::new()),
                None => Err(InferenceError::UnknownSymbol(fact.predicate.clone())),
            },
            [a @ Value::Individual(_), b @ Value::Individual(_)] if self.ontology.is_symmetric(&fact.predicate) => {
                let mirror = GroundFact::new(fact.predicate.clone(), vec![b.clone(), a.clone()]);
                Ok(vec![(mirror, ClosureKind::Symmetric)])
            }
            _ => Ok(Vec::new()),
        }
    }

    /// Adds everything implied by `seed` to `base` and returns the facts
    /// that were new.
    pub fn close(
        &self,
        base: &mut FactBase,
        seed: &[GroundFact],
        round: usize,
    ) -> Result<Vec<GroundFact>, InferenceError> {
        let mut added = Vec::new();
        let mut work: Vec<GroundFact> = seed.to_vec();
        while let Some(fact) = work.pop() {
            for (implied, kind) in self.implied(&fact)? {
                let origin = Origin::Closure { kind, premise: fact.clone() };
                if base.insert(implied.clone(), origin, round) {
                    work.push(implied.clone());
                    added.push(implied);
                }
            }
        }
        Ok(added)
    }
}
