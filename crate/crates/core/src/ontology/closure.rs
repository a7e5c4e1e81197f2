use std::collections::{BTreeMap, BTreeSet};

use crate::fact::{GroundFact, Value};

use super::{Ontology, OntologyError, Scene};

/// Ancestor sets of every class, as computed by [`taxonomy_closure`].
pub type Taxonomy = BTreeMap<String, BTreeSet<String>>;

/// Maps every declared class to the set of its strict ancestors.
///
/// Fails with [`OntologyError::CycleDetected`] when a parent chain loops back
/// on itself; the reported classes are the members of the cycle in chain
/// order, starting at the smallest name.
pub fn taxonomy_closure(ontology: &Ontology) -> Result<Taxonomy, OntologyError> {
    let mut result: Taxonomy = BTreeMap::new();
    for class in ontology.classes() {
        if result.contains_key(&class.name) {
            continue;
        }
        // Walk up until reaching a class with a known closure or a root.
        let mut chain: Vec<&str> = vec![&class.name];
        let mut base: BTreeSet<String> = BTreeSet::new();
        let mut current = class;
        while let Some(parent) = current.parent.as_deref() {
            if let Some(pos) = chain.iter().position(|c| *c == parent) {
                let mut cycle: Vec<String> = chain[pos..].iter().map(|s| s.to_string()).collect();
                let min = cycle.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
                cycle.rotate_left(min);
                return Err(OntologyError::CycleDetected(cycle));
            }
            if let Some(known) = result.get(parent) {
                base = known.clone();
                base.insert(parent.to_string());
                break;
            }
            current = ontology.class(parent).ok_or_else(|| OntologyError::UnknownSymbol(parent.to_string()))?;
            chain.push(parent);
        }
        // `chain` runs child -> ancestor; fill it in from the top.
        let mut above = base;
        for name in chain.iter().rev() {
            result.insert(name.to_string(), above.clone());
            above.insert(name.to_string());
        }
    }
    Ok(result)
}

/// Class assertions implied by a scene: each asserted class of an individual
/// together with all of that class's ancestors.
///
/// Asserted classes come from `individual` declarations and from unary facts.
pub fn membership_closure(ontology: &Ontology, scene: &Scene) -> Result<BTreeSet<GroundFact>, OntologyError> {
    let taxonomy = taxonomy_closure(ontology)?;
    let mut out = BTreeSet::new();
    for (individual, class) in scene.class_assertions() {
        let ancestors = taxonomy.get(class).ok_or_else(|| OntologyError::UnknownSymbol(class.to_string()))?;
        out.insert(GroundFact::new(class, vec![Value::individual(individual)]));
        for ancestor in ancestors {
            out.insert(GroundFact::new(ancestor.as_str(), vec![Value::individual(individual)]));
        }
    }
    Ok(out)
}
