use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::engine::{Bindings, FactBase, Origin};
use crate::fact::{quoted, GroundFact};
use crate::rules::RuleCatalog;

use super::{Assumption, Ledger, LedgerError, LinkIssue, PassageRef, SourceDoc};

/// A premise of a rule instantiation. Derived premises have their own
/// entry in [`TraceReport::facts`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PremiseRef {
    pub fact: GroundFact,
    pub origin: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactTrace {
    pub fact: GroundFact,
    /// Rule label of the first derivation, e.g. `R4` or `R1/2`.
    pub rule: String,
    pub bindings: Bindings,
    pub premises: Vec<PremiseRef>,
    /// Every rule on the derivation path, in catalog order.
    pub chain: Vec<String>,
    /// Passages cited by the rules of `chain`.
    pub passages: Vec<String>,
    /// Assumptions the rules of `chain` rely on.
    pub assumptions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleEntry {
    pub id: String,
    pub gloss: String,
    pub passages: Vec<String>,
    pub assumptions: Vec<String>,
}

/// Derived facts linked to rules, passages, documents and assumptions.
///
/// Every id that appears anywhere in the report is defined in one of its
/// sections, and all sections are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub facts: Vec<FactTrace>,
    pub rules: Vec<RuleEntry>,
    pub passages: Vec<PassageRef>,
    pub docs: Vec<SourceDoc>,
    pub assumptions: Vec<Assumption>,
}

struct Builder<'a> {
    base: &'a FactBase,
    catalog: &'a RuleCatalog,
    chains: BTreeMap<GroundFact, BTreeSet<usize>>,
}

impl Builder<'_> {
    /// Catalog positions of every rule used to establish `fact`.
    fn chain(&mut self, fact: &GroundFact) -> BTreeSet<usize> {
        if let Some(done) = self.chains.get(fact) {
            return done.clone();
        }
        let mut out = BTreeSet::new();
        match self.base.origin(fact) {
            Some(Origin::Derived) => {
                let trace = self.base.first_trace(fact).expect("derived facts carry a trace");
                if let Some(pos) = self.catalog.rules.iter().position(|r| r.id == trace.rule_id) {
                    out.insert(pos);
                }
                for premise in &trace.premises {
                    out.extend(self.chain(premise));
                }
            }
            Some(Origin::Closure { premise, .. }) => out = self.chain(premise),
            _ => {}
        }
        self.chains.insert(fact.clone(), out.clone());
        out
    }
}

/// Builds the trace report of every derived fact in `base`.
///
/// Fails if any rule of the catalog cites a passage or assumption the
/// ledger does not define.
pub fn trace_report(base: &FactBase, catalog: &RuleCatalog, ledger: &Ledger) -> Result<TraceReport, LedgerError> {
    build(base, catalog, ledger, base.derived().map(|(f, _)| f.clone()).collect())
}

impl TraceReport {
    /// The report restricted to `fact` and the derived facts it depends on.
    pub fn for_fact(
        base: &FactBase,
        catalog: &RuleCatalog,
        ledger: &Ledger,
        fact: &GroundFact,
    ) -> Result<TraceReport, LedgerError> {
        let mut wanted = BTreeSet::new();
        let mut stack = vec![fact.clone()];
        while let Some(f) = stack.pop() {
            match base.origin(&f) {
                Some(Origin::Derived) => {
                    if wanted.insert(f.clone()) {
                        stack.extend(base.first_trace(&f).into_iter().flat_map(|t| t.premises.iter().cloned()));
                    }
                }
                Some(Origin::Closure { premise, .. }) => stack.push(premise.clone()),
                _ => {}
            }
        }
        build(base, catalog, ledger, wanted)
    }

    /// Plain-text rendering; byte-identical for identical inputs.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn build(
    base: &FactBase,
    catalog: &RuleCatalog,
    ledger: &Ledger,
    facts: BTreeSet<GroundFact>,
) -> Result<TraceReport, LedgerError> {
    if let Some(issue) = ledger
        .check_catalog(catalog)
        .into_iter()
        .find(|i| matches!(i, LinkIssue::DanglingPassage { .. } | LinkIssue::DanglingAssumption { .. }))
    {
        let (from, to) = match issue {
            LinkIssue::DanglingPassage { rule, passage } => (rule, passage),
            LinkIssue::DanglingAssumption { rule, assumption } => (rule, assumption),
            _ => unreachable!(),
        };
        return Err(LedgerError::DanglingReference { from, to });
    }

    let mut builder = Builder { base, catalog, chains: BTreeMap::new() };
    let mut used_rules = BTreeSet::new();
    let mut traces = Vec::new();
    for fact in facts {
        let Some(trace) = base.first_trace(&fact) else { continue };
        let chain = builder.chain(&fact);
        used_rules.extend(chain.iter().copied());
        let rules: Vec<_> = chain.iter().map(|&i| &catalog.rules[i]).collect();
        let passages: BTreeSet<String> =
            rules.iter().flat_map(|r| r.sources.iter().map(|s| s.passage.clone())).collect();
        let assumptions: BTreeSet<String> = rules.iter().flat_map(|r| r.assumptions.iter().cloned()).collect();
        traces.push(FactTrace {
            fact: fact.clone(),
            rule: trace.rule_label(),
            bindings: trace.bindings.clone(),
            premises: trace
                .premises
                .iter()
                .map(|p| PremiseRef { fact: p.clone(), origin: base.origin(p).map_or("asserted", Origin::label) })
                .collect(),
            chain: rules.iter().map(|r| r.id.clone()).collect(),
            passages: passages.into_iter().collect(),
            assumptions: assumptions.into_iter().collect(),
        });
    }

    let rules: Vec<RuleEntry> = used_rules
        .iter()
        .map(|&i| {
            let r = &catalog.rules[i];
            let mut passages: Vec<String> = r.sources.iter().map(|s| s.passage.clone()).collect();
            passages.sort();
            passages.dedup();
            let mut assumptions = r.assumptions.clone();
            assumptions.sort();
            assumptions.dedup();
            RuleEntry { id: r.id.clone(), gloss: r.gloss.clone(), passages, assumptions }
        })
        .collect();
    let passage_ids: BTreeSet<&String> = rules.iter().flat_map(|r| &r.passages).collect();
    let assumption_ids: BTreeSet<&String> = rules.iter().flat_map(|r| &r.assumptions).collect();
    let passages: Vec<PassageRef> = passage_ids.iter().map(|id| ledger.passage(id).expect("checked").clone()).collect();
    let doc_ids: BTreeSet<&String> = passages.iter().map(|p| &p.doc).collect();
    let docs = doc_ids.iter().map(|id| ledger.doc(id).expect("checked at load").clone()).collect();
    let assumptions = assumption_ids.iter().map(|id| ledger.assumption(id).expect("checked").clone()).collect();

    Ok(TraceReport { facts: traces, rules, passages, docs, assumptions })
}

impl fmt::Display for TraceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "derived facts: {}", self.facts.len())?;
        for t in &self.facts {
            writeln!(f)?;
            writeln!(f, "fact {}", t.fact)?;
            let bindings: Vec<String> = t.bindings.iter().map(|(k, v)| format!("?{k}={v}")).collect();
            writeln!(f, "  rule {} {{{}}}", t.rule, bindings.join(", "))?;
            for p in &t.premises {
                writeln!(f, "  premise {} {}", p.origin, p.fact)?;
            }
            writeln!(f, "  chain {}", t.chain.join(" "))?;
            if !t.passages.is_empty() {
                writeln!(f, "  passages {}", t.passages.join(" "))?;
            }
            if !t.assumptions.is_empty() {
                writeln!(f, "  assumptions {}", t.assumptions.join(" "))?;
            }
        }
        if !self.rules.is_empty() {
            writeln!(f)?;
        }
        for r in &self.rules {
            writeln!(f, "rule {} {}", r.id, quoted(&r.gloss))?;
            for p in &r.passages {
                writeln!(f, "  passage {p}")?;
            }
            for a in &r.assumptions {
                writeln!(f, "  assumption {a}")?;
            }
        }
        for p in &self.passages {
            writeln!(f, "passage {} {} {}", p.id, p.doc, quoted(&p.locator))?;
            writeln!(f, "  quote {}", quoted(&p.quote))?;
        }
        for d in &self.docs {
            let mut line = format!("source {} {}", d.id, quoted(&d.title));
            if let Some(e) = &d.edition {
                let _ = write!(line, " edition {}", quoted(e));
            }
            writeln!(f, "{line}")?;
        }
        for a in &self.assumptions {
            writeln!(f, "assumption {} [{}] {}", a.id, a.status, quoted(&a.statement))?;
            if let Some(j) = &a.justification {
                writeln!(f, "  justification {}", quoted(j))?;
            }
        }
        Ok(())
    }
}
