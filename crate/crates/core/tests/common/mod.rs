//! Shared fixtures, random generators and oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::PathBuf;

use nba_core::engine::FactBase;
use nba_core::ontology::{parse_ontology, parse_scene, Ontology, Scene};
use nba_core::project::Project;
use nba_core::rules::{parse_rules, Atom, RuleCatalog, Term};
use nba_core::{GroundFact, Value};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/crossing")
}

pub fn full_project() -> PathBuf {
    data_dir().join("crossing.project")
}

pub fn scenario1_project() -> PathBuf {
    data_dir().join("scenario-1.project")
}

pub fn bundled() -> Project {
    Project::open(&full_project()).expect("bundled project loads")
}

pub fn fact(text: &str) -> GroundFact {
    GroundFact::parse(text).expect("valid ground atom")
}

/// The fact set of an inference result, consistent or not.
pub fn facts_of(result: &Result<FactBase, nba_core::engine::InferenceError>) -> Option<BTreeSet<GroundFact>> {
    match result {
        Ok(base) => Some(base.fact_set()),
        Err(e) => e.factbase().map(FactBase::fact_set),
    }
}

// ---------------------------------------------------------------------------
// Random instances: at most 8 individuals, 6 rules and 4 predicates.

#[derive(Debug, Clone)]
pub struct Instance {
    pub ontology_text: String,
    pub scene_text: String,
    pub rules_text: String,
    pub ontology: Ontology,
    pub scene: Scene,
    pub catalog: RuleCatalog,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Pred {
    Class,
    Object,
    Bool,
}

const VARS: [&str; 3] = ["x", "y", "z"];

pub fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    // Predicate pool: 1-2 classes, 1-2 object properties, maybe one bool
    // data property; never more than four in total.
    let n_classes = rng.gen_range(1..=2);
    let n_objects = rng.gen_range(1..=(4 - n_classes).min(2));
    let with_bool = n_classes + n_objects < 4 && rng.gen_bool(0.5);

    let mut onto = String::new();
    let mut preds: Vec<(String, Pred)> = Vec::new();
    for c in 0..n_classes {
        let name = format!("C{c}");
        if c > 0 && rng.gen_bool(0.6) {
            let _ = writeln!(onto, "class {name} subclass_of C0");
        } else {
            let _ = writeln!(onto, "class {name}");
        }
        preds.push((name, Pred::Class));
    }
    for p in 0..n_objects {
        let name = format!("p{p}");
        let symmetric = if rng.gen_bool(0.3) { " symmetric" } else { "" };
        let _ = writeln!(onto, "objprop {name}{symmetric}");
        preds.push((name, Pred::Object));
    }
    if with_bool {
        let _ = writeln!(onto, "dataprop flag range bool");
        preds.push(("flag".into(), Pred::Bool));
    }

    let n_individuals = rng.gen_range(1..=8);
    let individuals: Vec<String> = (0..n_individuals).map(|i| format!("i{i}")).collect();
    let mut scene = String::from("scenario r \"random\"\n");
    let classes: Vec<&String> = preds.iter().filter(|(_, k)| *k == Pred::Class).map(|(n, _)| n).collect();
    for ind in &individuals {
        let _ = writeln!(scene, "individual {ind} : {}", classes.choose(rng).unwrap());
    }
    for _ in 0..rng.gen_range(0..=10) {
        let (name, kind) = preds.choose(rng).unwrap();
        let a = individuals.choose(rng).unwrap();
        let b = individuals.choose(rng).unwrap();
        let line = match kind {
            Pred::Class => format!("fact {name}({a})"),
            Pred::Object => format!("fact {name}({a}, {b})"),
            Pred::Bool => format!("fact {name}({a}, {})", rng.gen_bool(0.5)),
        };
        let _ = writeln!(scene, "{line}");
    }

    let mut rules = String::new();
    for r in 0..rng.gen_range(0..=6) {
        let _ = writeln!(rules, "rule R{r} \"random rule\"");
        let mut individual_vars: BTreeSet<&str> = BTreeSet::new();
        let mut literal_vars: BTreeSet<&str> = BTreeSet::new();
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let (name, kind) = preds.choose(rng).unwrap();
            let arg = |rng: &mut ChaCha8Rng, set: &mut BTreeSet<&str>| -> String {
                if rng.gen_bool(0.15) {
                    individuals.choose(rng).unwrap().clone()
                } else {
                    let v = VARS.choose(rng).unwrap();
                    set.insert(v);
                    format!("?{v}")
                }
            };
            let atom = match kind {
                Pred::Class => format!("{name}({})", arg(rng, &mut individual_vars)),
                Pred::Object => {
                    format!("{name}({}, {})", arg(rng, &mut individual_vars), arg(rng, &mut individual_vars))
                }
                Pred::Bool => {
                    let subject = arg(rng, &mut individual_vars);
                    let object = if rng.gen_bool(0.5) {
                        rng.gen_bool(0.5).to_string()
                    } else {
                        // Separate variable names keep literal and individual
                        // bindings apart.
                        let v = ["b", "c"].choose(rng).unwrap();
                        literal_vars.insert(v);
                        format!("?{v}")
                    };
                    format!("{name}({subject}, {object})")
                }
            };
            body.push(atom);
        }
        // Variables shared between kinds would never match; that is fine
        // but keep the head well-kinded.
        let ivars: Vec<&str> = individual_vars.difference(&literal_vars).copied().collect();
        let lvars: Vec<&str> = literal_vars.iter().copied().collect();
        let ind = |rng: &mut ChaCha8Rng| -> String {
            match ivars.choose(rng) {
                Some(v) if rng.gen_bool(0.9) => format!("?{v}"),
                _ => individuals.choose(rng).unwrap().clone(),
            }
        };
        let (name, kind) = preds.choose(rng).unwrap();
        let head = match kind {
            Pred::Class => format!("{name}({})", ind(rng)),
            Pred::Object => format!("{name}({}, {})", ind(rng), ind(rng)),
            Pred::Bool => {
                let object = match lvars.choose(rng) {
                    Some(v) if rng.gen_bool(0.5) => format!("?{v}"),
                    _ => rng.gen_bool(0.5).to_string(),
                };
                format!("{name}({}, {object})", ind(rng))
            }
        };
        let _ = writeln!(rules, "  when {}", body.join(" & "));
        let _ = writeln!(rules, "  then {head}");
    }

    Instance {
        ontology: parse_ontology(&onto).expect("generated ontology parses"),
        scene: parse_scene(&scene).expect("generated scene parses"),
        catalog: parse_rules(&rules).unwrap_or_else(|e| panic!("generated rules parse: {e}\n{rules}")),
        ontology_text: onto,
        scene_text: scene,
        rules_text: rules,
    }
}

// ---------------------------------------------------------------------------
// Oracles.

/// A third, deliberately simple fixpoint: a set of facts closed by
/// repeatedly applying every rule and every closure step to everything.
pub fn oracle_fixpoint(ontology: &Ontology, scene: &Scene, catalog: &RuleCatalog) -> BTreeSet<GroundFact> {
    let mut facts: BTreeSet<GroundFact> = scene.facts.clone();
    for (ind, class) in &scene.individuals {
        facts.insert(GroundFact::new(class.as_str(), vec![Value::individual(ind.as_str())]));
    }
    loop {
        let mut next = facts.clone();
        for f in &facts {
            if f.args.len() == 1 {
                let mut current = ontology.class(&f.predicate);
                while let Some(class) = current {
                    if let Some(parent) = &class.parent {
                        next.insert(GroundFact::new(parent.as_str(), f.args.clone()));
                    }
                    current = class.parent.as_deref().and_then(|p| ontology.class(p));
                }
            } else if ontology.is_symmetric(&f.predicate) {
                next.insert(GroundFact::new(f.predicate.as_str(), vec![f.args[1].clone(), f.args[0].clone()]));
            }
        }
        for rule in catalog.formal_rules() {
            for bindings in brute_force_matches(&rule.body, &facts) {
                for head in &rule.head {
                    next.insert(substitute(head, &bindings).expect("safe rule"));
                }
            }
        }
        if next == facts {
            return facts;
        }
        facts = next;
    }
}

pub fn substitute(atom: &Atom, bindings: &BTreeMap<String, Value>) -> Option<GroundFact> {
    let mut args = Vec::new();
    for t in &atom.args {
        args.push(match t {
            Term::Var(v) => bindings.get(v)?.clone(),
            Term::Individual(i) => Value::individual(i.as_str()),
            Term::Literal(l) => Value::Literal(l.clone()),
        });
    }
    Some(GroundFact::new(atom.predicate.as_str(), args))
}

/// Every assignment of the body variables that makes all body atoms true,
/// by extending partial assignments atom by atom over all facts.
pub fn brute_force_matches(body: &[Atom], facts: &BTreeSet<GroundFact>) -> Vec<BTreeMap<String, Value>> {
    let mut partial = vec![BTreeMap::new()];
    for atom in body {
        let mut next = Vec::new();
        for assignment in &partial {
            for f in facts {
                if f.predicate != atom.predicate || f.args.len() != atom.args.len() {
                    continue;
                }
                let mut extended: BTreeMap<String, Value> = assignment.clone();
                let ok = atom.args.iter().zip(&f.args).all(|(t, v)| match t {
                    Term::Var(name) => v == extended.entry(name.clone()).or_insert_with(|| v.clone()),
                    Term::Individual(i) => *v == Value::individual(i.as_str()),
                    Term::Literal(l) => *v == Value::Literal(l.clone()),
                });
                if ok {
                    next.push(extended);
                }
            }
        }
        partial = next;
    }
    partial
}

/// Ancestors by Floyd–Warshall transitive closure over the parent edges.
#[allow(clippy::needless_range_loop)]
pub fn floyd_warshall_ancestors(names: &[String], parent: &[Option<usize>]) -> BTreeMap<String, BTreeSet<String>> {
    let n = names.len();
    let mut reach = vec![vec![false; n]; n];
    for (i, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            reach[i][*p] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..n).map(|i| (names[i].clone(), (0..n).filter(|&j| reach[i][j]).map(|j| names[j].clone()).collect())).collect()
}

// ---------------------------------------------------------------------------
// Random rule files for parser round trips.

const PREDICATES: [&str; 6] = ["Zone", "Ego", "ist_in", "ist_neben", "sachverhalt_gilt", "anhalten_in"];
const NAMES: [&str; 5] = ["ego", "zoneRot", "f2", "a-b", "x.y"];

fn random_text(rng: &mut ChaCha8Rng) -> String {
    const PIECES: [&str; 10] = ["Fußgänger", " ", "\"", "\\", "quote", "§ 26", "\t", "#", "line\nbreak", "ü"];
    (0..rng.gen_range(0..6)).map(|_| *PIECES.choose(rng).unwrap()).collect()
}

fn escape(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn random_term<'v>(rng: &mut ChaCha8Rng, vars: &[&'v str], used: &mut BTreeSet<&'v str>) -> String {
    match rng.gen_range(0..10) {
        0 => NAMES.choose(rng).unwrap().to_string(),
        1 => rng.gen_bool(0.5).to_string(),
        2 => rng.gen_range(-50..50).to_string(),
        3 => escape(&random_text(rng)),
        _ => {
            let v = vars.choose(rng).unwrap();
            used.insert(v);
            format!("?{v}")
        }
    }
}

fn random_atom<'v>(rng: &mut ChaCha8Rng, vars: &[&'v str], used: &mut BTreeSet<&'v str>) -> String {
    let p = PREDICATES.choose(rng).unwrap();
    let args: Vec<String> = (0..rng.gen_range(1..=2)).map(|_| random_term(rng, vars, used)).collect();
    format!("{p}({})", args.join(", "))
}

/// A syntactically valid rule file with varied layout. With
/// `unsafe_head`, one rule's head uses a variable its body lacks.
pub fn random_rule_file(rng: &mut ChaCha8Rng, unsafe_head: bool) -> String {
    let mut out = String::new();
    let n = rng.gen_range(if unsafe_head { 1..=5 } else { 0..=5 });
    let bad = rng.gen_range(0..n.max(1));
    for r in 0..n {
        if rng.gen_bool(0.3) {
            out.push_str("# comment\n\n");
        }
        let _ = writeln!(out, "rule R{r}_{} {}", rng.gen_range(0..100), escape(&random_text(rng)));
        for _ in 0..rng.gen_range(0..3) {
            match rng.gen_range(0..3) {
                0 => {
                    let _ = writeln!(out, "  source p{}", rng.gen_range(0..9));
                }
                1 => {
                    let _ = writeln!(out, "  source p{} {}", rng.gen_range(0..9), escape(&random_text(rng)));
                }
                _ => {
                    let _ = writeln!(out, "  assumption A{}", rng.gen_range(0..5));
                }
            }
        }
        let informal = !(unsafe_head && r == bad) && rng.gen_bool(0.15);
        if informal {
            out.push_str("  informal\n");
            continue;
        }
        let body_vars = ["a", "b", "c"];
        let mut used = BTreeSet::new();
        let body: Vec<String> = (0..rng.gen_range(1..=4)).map(|_| random_atom(rng, &body_vars, &mut used)).collect();
        let mut head_vars: Vec<&str> = used.into_iter().collect();
        if unsafe_head && r == bad {
            head_vars = vec!["unbound"];
        }
        let head_term = |rng: &mut ChaCha8Rng| -> String {
            match head_vars.choose(rng) {
                Some(v) => format!("?{v}"),
                None => NAMES.choose(rng).unwrap().to_string(),
            }
        };
        let mut heads: Vec<String> = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let p = PREDICATES.choose(rng).unwrap();
            heads.push(format!("{p}({}, {})", head_term(rng), head_term(rng)));
        }
        if unsafe_head && r == bad {
            heads[0] = "anhalten_in(?unbound, ego)".into();
        }
        match rng.gen_range(0..3) {
            0 => {
                let _ = writeln!(out, "  when {} then {}", body.join(" & "), heads.join(" & "));
            }
            1 => {
                let _ = writeln!(out, "  when {}", body[0]);
                for a in &body[1..] {
                    let _ = writeln!(out, "     & {a}");
                }
                let _ = writeln!(out, "  then {}", heads[0]);
                for h in &heads[1..] {
                    let _ = writeln!(out, "     & {h}");
                }
            }
            _ => {
                let _ = writeln!(out, "  when {}   # trailing comment", body.join(" &"));
                let _ = writeln!(out, "  then {}", heads.join("& "));
            }
        }
    }
    out
}
