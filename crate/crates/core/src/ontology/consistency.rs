use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::fact::{GroundFact, Literal, LiteralKind, Value};

use super::{taxonomy_closure, Ontology, Scene};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Inconsistency {
    /// An individual belongs to both classes of a disjointness axiom.
    DisjointnessViolation { individual: String, classes: (String, String) },
    /// A bool-ranged property holds both `true` and `false` for one subject.
    BooleanContradiction { individual: String, property: String },
}

impl fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inconsistency::DisjointnessViolation { individual, classes: (a, b) } => {
                write!(f, "DisjointnessViolation({individual}: {a} / {b})")
            }
            Inconsistency::BooleanContradiction { individual, property } => {
                write!(f, "BooleanContradiction({individual}, {property})")
            }
        }
    }
}

/// Reports disjointness violations (after taxonomy closure) and
/// contradicting values of bool-ranged data properties. The scene's
/// `individual` declarations are treated as facts too.
///
/// Classes the ontology does not declare contribute no ancestors; they are
/// a vocabulary problem, not an inconsistency.
pub fn check_consistency(ontology: &Ontology, scene: &Scene, facts: &BTreeSet<GroundFact>) -> Vec<Inconsistency> {
    let taxonomy = taxonomy_closure(ontology).unwrap_or_default();
    let mut memberships: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut bool_values: BTreeMap<(&str, &str), BTreeSet<bool>> = BTreeMap::new();

    let declared = scene.individuals.iter().map(|(i, c)| (i.as_str(), c.as_str()));
    let asserted = facts.iter().filter_map(|f| match f.args.as_slice() {
        [Value::Individual(i)] => Some((i.as_str(), f.predicate.as_str())),
        _ => None,
    });
    for (individual, class) in declared.chain(asserted) {
        let entry = memberships.entry(individual).or_default();
        entry.insert(class);
        if let Some(ancestors) = taxonomy.get(class) {
            entry.extend(ancestors.iter().map(String::as_str));
        }
    }

    for fact in facts {
        if let [Value::Individual(subject), Value::Literal(Literal::Bool(value))] = fact.args.as_slice() {
            let is_bool_prop = ontology.data_property(&fact.predicate).is_some_and(|p| p.range == LiteralKind::Bool);
            if is_bool_prop {
                bool_values.entry((subject.as_str(), fact.predicate.as_str())).or_default().insert(*value);
            }
        }
    }

    let mut out = Vec::new();
    for (individual, classes) in &memberships {
        for (a, b) in ontology.disjoint_pairs() {
            if classes.contains(a) && classes.contains(b) {
                out.push(Inconsistency::DisjointnessViolation {
                    individual: individual.to_string(),
                    classes: (a.to_string(), b.to_string()),
                });
            }
        }
    }
    for ((individual, property), values) in bool_values {
        if values.len() > 1 {
            out.push(Inconsistency::BooleanContradiction {
                individual: individual.to_string(),
                property: property.to_string(),
            });
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{ClassDecl, DataPropDecl};

    fn ontology() -> Ontology {
        let mut onto = Ontology::new();
        onto.add_class(ClassDecl::root("Verkehrsteilnehmer")).unwrap();
        onto.add_class(ClassDecl::child("Fussgaenger", "Verkehrsteilnehmer")).unwrap();
        onto.add_class(ClassDecl::root("Zone")).unwrap();
        onto.add_disjoint("Verkehrsteilnehmer", "Zone");
        onto.add_disjoint("Fussgaenger", "Zone");
        onto.add_data_property(DataPropDecl::new("sachverhalt_gilt", LiteralKind::Bool)).unwrap();
        onto
    }

    #[test]
    fn contradicting_bool_values() {
        let facts: BTreeSet<_> = [
            GroundFact::data("sachverhalt_gilt", "streif", Literal::Bool(true)),
            GroundFact::data("sachverhalt_gilt", "streif", Literal::Bool(false)),
        ]
        .into();
        let issues = check_consistency(&ontology(), &Scene::new("s", "t"), &facts);
        assert_eq!(
            issues,
            vec![Inconsistency::BooleanContradiction {
                individual: "streif".into(),
                property: "sachverhalt_gilt".into()
            }]
        );
    }

    #[test]
    fn disjointness_after_closure() {
        let mut scene = Scene::new("s", "t");
        scene.individuals.insert("f2".into(), "Fussgaenger".into());
        let facts: BTreeSet<_> = [GroundFact::class("Zone", "f2")].into();
        let issues = check_consistency(&ontology(), &scene, &facts);
        // Both the direct pair and the inherited pair are violated.
        assert_eq!(issues.len(), 2);
        assert!(issues
            .iter()
            .all(|i| matches!(i, Inconsistency::DisjointnessViolation { individual, .. } if individual == "f2")));
    }

    #[test]
    fn consistent_facts() {
        let mut scene = Scene::new("s", "t");
        scene.individuals.insert("f2".into(), "Fussgaenger".into());
        scene.individuals.insert("z".into(), "Zone".into());
        let facts: BTreeSet<_> = [GroundFact::data("sachverhalt_gilt", "f2", Literal::Bool(true))].into();
        assert!(check_consistency(&ontology(), &scene, &facts).is_empty());
    }
}
