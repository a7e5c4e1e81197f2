//! Brute-force bottom-up evaluation, kept deliberately separate from the
//! indexed join and closure code used by [`super::infer`].

use std::collections::BTreeSet;

use crate::fact::{GroundFact, Value};
use crate::ontology::{Ontology, Scene};
use crate::rules::{Atom, RuleCatalog, Term};

use super::seminaive::{check_safety, finish};
use super::{compile, Bindings, ClosureKind, DerivationTrace, FactBase, InferOptions, InferenceError, Origin};

fn match_atom(atom: &Atom, fact: &GroundFact, bindings: &Bindings) -> Option<Bindings> {
    if atom.predicate != fact.predicate || atom.args.len() != fact.args.len() {
        return None;
    }
    let mut out = bindings.clone();
    for (term, value) in atom.args.iter().zip(&fact.args) {
        let wanted = match term {
            Term::Var(v) => match out.get(v) {
                Some(bound) => bound.clone(),
                None => {
                    out.insert(v.clone(), value.clone());
                    continue;
                }
            },
            Term::Individual(i) => Value::Individual(i.clone()),
            Term::Literal(l) => Value::Literal(l.clone()),
        };
        if &wanted != value {
            return None;
        }
    }
    Some(out)
}

/// All (bindings, premises) pairs for `body` over `facts`, by trying every
/// fact for every atom.
fn all_matches(body: &[Atom], facts: &[GroundFact]) -> Vec<(Bindings, Vec<GroundFact>)> {
    let mut partial: Vec<(Bindings, Vec<GroundFact>)> = vec![(Bindings::new(), Vec::new())];
    for atom in body {
        let mut next = Vec::new();
        for (bindings, premises) in &partial {
            for fact in facts {
                if let Some(extended) = match_atom(atom, fact, bindings) {
                    let mut p = premises.clone();
                    p.push(fact.clone());
                    next.push((extended, p));
                }
            }
        }
        partial = next;
    }
    partial
}

/// Closes `base` under subclass and symmetry by scanning until nothing
/// changes. Ancestors are found by walking parent links directly.
fn close(ontology: &Ontology, base: &mut FactBase, round: usize, tolerate_unknown: bool) -> Result<(), InferenceError> {
    loop {
        let snapshot: Vec<GroundFact> = base.facts().cloned().collect();
        let mut changed = false;
        for fact in &snapshot {
            match fact.args.as_slice() {
                [Value::Individual(_)] => {
                    let Some(mut class) = ontology.class(&fact.predicate) else {
                        if tolerate_unknown {
                            continue;
                        }
                        return Err(InferenceError::UnknownSymbol(fact.predicate.clone()));
                    };
                    let mut steps = 0;
                    while let Some(parent) = &class.parent {
                        steps += 1;
                        if steps > ontology.classes().count() {
                            return Err(InferenceError::UnknownSymbol(parent.clone()));
                        }
                        let implied = GroundFact::new(parent.as_str(), fact.args.clone());
                        let origin = Origin::Closure { kind: ClosureKind::Subclass, premise: fact.clone() };
                        changed |= base.insert(implied, origin, round);
                        class = ontology.class(parent).ok_or_else(|| InferenceError::UnknownSymbol(parent.clone()))?;
                    }
                }
                [a, b]
                    if ontology.is_symmetric(&fact.predicate)
                        && a.as_individual().is_some()
                        && b.as_individual().is_some() =>
                {
                    let mirror = GroundFact::new(fact.predicate.clone(), vec![b.clone(), a.clone()]);
                    let origin = Origin::Closure { kind: ClosureKind::Symmetric, premise: fact.clone() };
                    changed |= base.insert(mirror, origin, round);
                }
                _ => {}
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

/// Naive evaluation: every round re-matches all rules against all known
/// facts. Produces the same fact set as [`super::infer`].
pub fn naive_infer(ontology: &Ontology, scene: &Scene, catalog: &RuleCatalog) -> Result<FactBase, InferenceError> {
    naive_infer_with(ontology, scene, catalog, &InferOptions::default())
}

pub fn naive_infer_with(
    ontology: &Ontology,
    scene: &Scene,
    catalog: &RuleCatalog,
    options: &InferOptions,
) -> Result<FactBase, InferenceError> {
    check_safety(catalog)?;
    let rules = compile(catalog);
    let tolerate = options.tolerate_unknown_classes;

    let mut base = FactBase::new();
    for fact in scene.asserted_facts() {
        base.insert(fact, Origin::Asserted, 0);
    }
    close(ontology, &mut base, 0, tolerate)?;

    let mut round = 0;
    loop {
        round += 1;
        let snapshot: Vec<GroundFact> = base.facts().cloned().collect();
        let known: BTreeSet<&GroundFact> = snapshot.iter().collect();
        let mut produced = false;
        for rule in &rules {
            let mut matches = all_matches(rule.body, &snapshot);
            matches.sort();
            for (bindings, premises) in matches {
                let Some(fact) = rule.head.ground(|v| bindings.get(v).cloned()) else {
                    continue;
                };
                let is_new = !known.contains(&fact);
                let trace = DerivationTrace {
                    fact,
                    rule_id: rule.rule_id.to_string(),
                    head_index: (rule.head_count > 1).then_some(rule.head_index),
                    bindings,
                    premises,
                };
                produced |= is_new && base.insert_derived(trace.clone(), round, false);
                if options.record_all_traces {
                    base.insert_derived(trace, round, true);
                }
            }
        }
        if !produced {
            break;
        }
        close(ontology, &mut base, round, tolerate)?;
    }
    finish(ontology, scene, base, round - 1)
}
