use std::iter::Chain;
use std::slice::Iter;

use crate::fact::GroundFact;
use crate::ontology::{check_consistency, Ontology, Scene};
use crate::rules::RuleCatalog;

use super::closure::Closer;
use super::matching::{join, Index};
use super::{compile, DerivationTrace, FactBase, InferOptions, InferenceError, Origin};

/// Computes the least fixpoint of the scene under the catalog's formal rules.
pub fn infer(ontology: &Ontology, scene: &Scene, catalog: &RuleCatalog) -> Result<FactBase, InferenceError> {
    infer_with(ontology, scene, catalog, &InferOptions::default())
}

pub(crate) fn check_safety(catalog: &RuleCatalog) -> Result<(), InferenceError> {
    for rule in catalog.formal_rules() {
        if let Some(v) = rule.unsafe_variables().first() {
            return Err(InferenceError::UnsafeRule { rule: rule.id.clone(), variable: v.to_string() });
        }
    }
    Ok(())
}

pub(crate) fn finish(
    ontology: &Ontology,
    scene: &Scene,
    mut base: FactBase,
    rounds: usize,
) -> Result<FactBase, InferenceError> {
    base.set_rounds(rounds);
    let issues = check_consistency(ontology, scene, &base.fact_set());
    if issues.is_empty() {
        Ok(base)
    } else {
        Err(InferenceError::InconsistentState { factbase: Box::new(base), issues })
    }
}

pub fn infer_with(
    ontology: &Ontology,
    scene: &Scene,
    catalog: &RuleCatalog,
    options: &InferOptions,
) -> Result<FactBase, InferenceError> {
    check_safety(catalog)?;
    let rules = compile(catalog);
    let closer = Closer::new(ontology, options.tolerate_unknown_classes)?;

    let mut base = FactBase::new();
    let asserted: Vec<GroundFact> = scene.asserted_facts().into_iter().collect();
    for fact in &asserted {
        base.insert(fact.clone(), Origin::Asserted, 0);
    }
    let implied = closer.close(&mut base, &asserted, 0)?;

    let mut old = Index::default();
    let mut delta = Index::default();
    for fact in asserted.into_iter().chain(implied) {
        delta.insert(fact);
    }

    let empty: [GroundFact; 0] = [];
    let mut round = 0;
    while !delta.is_empty() {
        round += 1;
        let mut new_facts = Vec::new();
        for rule in &rules {
            let mut matches = Vec::new();
            for pivot in 0..rule.body.len() {
                if delta.get(&rule.body[pivot].predicate).is_empty() {
                    continue;
                }
                // Atoms before the pivot see only old facts, the pivot sees
                // the delta, later atoms see both. Every instantiation that
                // uses a delta fact is found exactly once.
                let candidates = |i: usize, p: &str| -> Chain<Iter<'_, GroundFact>, Iter<'_, GroundFact>> {
                    if i < pivot {
                        old.get(p).iter().chain(empty.iter())
                    } else if i == pivot {
                        delta.get(p).iter().chain(empty.iter())
                    } else {
                        old.get(p).iter().chain(delta.get(p).iter())
                    }
                };
                matches.extend(join(rule.body, candidates));
            }
            matches.sort();
            for (bindings, premises) in matches {
                let fact = rule.head.ground(|v| bindings.get(v).cloned()).expect("rule safety checked above");
                let trace = DerivationTrace {
                    fact: fact.clone(),
                    rule_id: rule.rule_id.to_string(),
                    head_index: (rule.head_count > 1).then_some(rule.head_index),
                    bindings,
                    premises,
                };
                if base.insert_derived(trace, round, options.record_all_traces) {
                    new_facts.push(fact);
                }
            }
        }
        let implied = closer.close(&mut base, &new_facts, round)?;
        old.absorb(std::mem::take(&mut delta));
        for fact in new_facts.into_iter().chain(implied) {
            delta.insert(fact);
        }
    }
    // The last round produced nothing.
    finish(ontology, scene, base, round.saturating_sub(1))
}
