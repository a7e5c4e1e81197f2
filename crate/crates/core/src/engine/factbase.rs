use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::fact::{GroundFact, Value};

/// Variable name (without `?`) to value.
pub type Bindings = BTreeMap<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureKind {
    /// Membership in an ancestor class.
    Subclass,
    /// Mirror of a symmetric property fact.
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "origin", rename_all = "snake_case")]
pub enum Origin {
    Asserted,
    Closure { kind: ClosureKind, premise: GroundFact },
    Derived,
}

impl Origin {
    pub fn label(&self) -> &'static str {
        match self {
            Origin::Asserted => "asserted",
            Origin::Closure { .. } => "closure",
            Origin::Derived => "derived",
        }
    }
}

/// One rule instantiation that produced `fact`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DerivationTrace {
    pub fact: GroundFact,
    pub rule_id: String,
    /// Index of the head atom for rules with a conjunctive head.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub head_index: Option<usize>,
    pub bindings: Bindings,
    /// The body atoms under `bindings`, in body order.
    pub premises: Vec<GroundFact>,
}

impl DerivationTrace {
    /// `R1` for single-head rules, `R1/2` for the second head atom of `R1`.
    pub fn rule_label(&self) -> String {
        match self.head_index {
            Some(i) => format!("{}/{}", self.rule_id, i + 1),
            None => self.rule_id.clone(),
        }
    }

    pub fn bindings_text(&self) -> String {
        let parts: Vec<String> = self.bindings.iter().map(|(k, v)| format!("?{k}={v}")).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    origin: Origin,
    round: usize,
    traces: Vec<DerivationTrace>,
}

/// The fixpoint of one scene: every fact with its origin, and the rule
/// traces of derived facts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FactBase {
    entries: BTreeMap<GroundFact, Entry>,
    rounds: usize,
}

impl FactBase {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn set_rounds(&mut self, rounds: usize) {
        self.rounds = rounds;
    }

    /// Inserts a fact with the given origin unless it is already known.
    pub(crate) fn insert(&mut self, fact: GroundFact, origin: Origin, round: usize) -> bool {
        if self.entries.contains_key(&fact) {
            return false;
        }
        self.entries.insert(fact, Entry { origin, round, traces: Vec::new() });
        true
    }

    /// Records a derivation. Returns `true` if the fact is new.
    pub(crate) fn insert_derived(&mut self, trace: DerivationTrace, round: usize, keep_alternatives: bool) -> bool {
        match self.entries.get_mut(&trace.fact) {
            None => {
                let fact = trace.fact.clone();
                self.entries.insert(fact, Entry { origin: Origin::Derived, round, traces: vec![trace] });
                true
            }
            Some(entry) => {
                if keep_alternatives && entry.origin == Origin::Derived && !entry.traces.contains(&trace) {
                    entry.traces.push(trace);
                }
                false
            }
        }
    }

    pub fn contains(&self, fact: &GroundFact) -> bool {
        self.entries.contains_key(fact)
    }

    pub fn origin(&self, fact: &GroundFact) -> Option<&Origin> {
        self.entries.get(fact).map(|e| &e.origin)
    }

    /// Round in which the fact became known; 0 for asserted facts and
    /// their closure.
    pub fn round(&self, fact: &GroundFact) -> Option<usize> {
        self.entries.get(fact).map(|e| e.round)
    }

    /// All recorded traces; the first is the one used by explanations.
    pub fn traces(&self, fact: &GroundFact) -> &[DerivationTrace] {
        self.entries.get(fact).map_or(&[], |e| e.traces.as_slice())
    }

    pub fn first_trace(&self, fact: &GroundFact) -> Option<&DerivationTrace> {
        self.traces(fact).first()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroundFact, &Origin)> {
        self.entries.iter().map(|(f, e)| (f, &e.origin))
    }

    pub fn facts(&self) -> impl Iterator<Item = &GroundFact> {
        self.entries.keys()
    }

    pub fn fact_set(&self) -> BTreeSet<GroundFact> {
        self.entries.keys().cloned().collect()
    }

    /// Facts produced by rules, with their first trace.
    pub fn derived(&self) -> impl Iterator<Item = (&GroundFact, &DerivationTrace)> {
        self.entries
            .iter()
            .filter(|(_, e)| e.origin == Origin::Derived)
            .filter_map(|(f, e)| e.traces.first().map(|t| (f, t)))
    }

    pub fn derived_set(&self) -> BTreeSet<GroundFact> {
        self.derived().map(|(f, _)| f.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of rule rounds until no new fact appeared.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// One line per fact, `<origin> <fact>` plus the first rule trace for
    /// derived facts, sorted lexicographically.
    pub fn dump(&self) -> String {
        let mut lines: Vec<String> = self
            .entries
            .iter()
            .map(|(fact, entry)| match entry.traces.first() {
                Some(t) if entry.origin == Origin::Derived => {
                    format!("derived {fact} rule={} bindings={}", t.rule_label(), t.bindings_text())
                }
                _ => format!("{} {fact}", entry.origin.label()),
            })
            .collect();
        lines.sort();
        let mut out = String::new();
        for line in lines {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Every recorded trace with its premises, one per line, sorted.
    pub fn trace_dump(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        for entry in self.entries.values() {
            for t in &entry.traces {
                let premises: Vec<String> = t.premises.iter().map(ToString::to_string).collect();
                let mut line = String::new();
                let _ = write!(
                    line,
                    "derived {} rule={} bindings={} premises=[{}]",
                    t.fact,
                    t.rule_label(),
                    t.bindings_text(),
                    premises.join("; ")
                );
                lines.push(line);
            }
        }
        lines.sort();
        lines.iter().map(|l| format!("{l}\n")).collect()
    }
}
