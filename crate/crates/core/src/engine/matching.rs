use std::collections::HashMap;

use crate::fact::{GroundFact, Value};
use crate::rules::{Atom, Term};

use super::Bindings;

/// Facts grouped by predicate.
#[derive(Debug, Default)]
pub(crate) struct Index {
    by_predicate: HashMap<String, Vec<GroundFact>>,
}

impl Index {
    pub fn insert(&mut self, fact: GroundFact) {
        self.by_predicate.entry(fact.predicate.clone()).or_default().push(fact);
    }

    pub fn get(&self, predicate: &str) -> &[GroundFact] {
        self.by_predicate.get(predicate).map_or(&[], Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.by_predicate.is_empty()
    }

    pub fn absorb(&mut self, other: Index) {
        for (pred, facts) in other.by_predicate {
            self.by_predicate.entry(pred).or_default().extend(facts);
        }
    }
}

/// Extends `bindings` so that `atom` matches `fact`. On failure `bindings`
/// may be partially extended; callers work on a copy.
fn unify(atom: &Atom, fact: &GroundFact, bindings: &mut Bindings) -> bool {
    if atom.predicate != fact.predicate || atom.args.len() != fact.args.len() {
        return false;
    }
    for (term, value) in atom.args.iter().zip(&fact.args) {
        match term {
            Term::Var(v) => match bindings.get(v) {
                Some(bound) if bound != value => return false,
                Some(_) => {}
                None => {
                    bindings.insert(v.clone(), value.clone());
                }
            },
            Term::Individual(i) => {
                if !matches!(value, Value::Individual(name) if name == i) {
                    return false;
                }
            }
            Term::Literal(l) => {
                if !matches!(value, Value::Literal(lit) if lit == l) {
                    return false;
                }
            }
        }
    }
    true
}

/// Enumerates all matches of `body`, taking the candidates for atom `i`
/// from `candidates(i, predicate)`. Each match yields the bindings and the
/// premises in body order.
pub(crate) fn join<'f, F, I>(body: &[Atom], candidates: F) -> Vec<(Bindings, Vec<GroundFact>)>
where
    F: Fn(usize, &str) -> I,
    I: Iterator<Item = &'f GroundFact>,
{
    fn go<'f, F, I>(
        body: &[Atom],
        pos: usize,
        candidates: &F,
        bindings: &Bindings,
        premises: &mut Vec<GroundFact>,
        out: &mut Vec<(Bindings, Vec<GroundFact>)>,
    ) where
        F: Fn(usize, &str) -> I,
        I: Iterator<Item = &'f GroundFact>,
    {
        let Some(atom) = body.get(pos) else {
            out.push((bindings.clone(), premises.clone()));
            return;
        };
        for fact in candidates(pos, &atom.predicate) {
            let mut extended = bindings.clone();
            if unify(atom, fact, &mut extended) {
                premises.push(fact.clone());
                go(body, pos + 1, candidates, &extended, premises, out);
                premises.pop();
            }
        }
    }

    let mut out = Vec::new();
    go(body, 0, &candidates, &Bindings::new(), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_respects_shared_variables_and_constants() {
        let mut index = Index::default();
        for fact in [
            GroundFact::object("ist_in", "f2", "zoneGruen1"),
            GroundFact::object("ist_in", "fuueb", "zoneRot"),
            GroundFact::class("Zone", "zoneGruen1"),
            GroundFact::class("Zone", "zoneRot"),
        ] {
            index.insert(fact);
        }
        let body =
            vec![Atom::new("ist_in", vec![Term::var("x"), Term::var("z")]), Atom::new("Zone", vec![Term::var("z")])];
        let matches = join(&body, |_, p| index.get(p).iter());
        assert_eq!(matches.len(), 2);

        let body = vec![Atom::new("ist_in", vec![Term::Individual("f2".into()), Term::var("z")])];
        let matches = join(&body, |_, p| index.get(p).iter());
        assert_eq!(matches.len(), 1);
        assert_eq!(matches[0].0["z"], Value::individual("zoneGruen1"));
    }
}
