//! Knowledge sources, passages and assumptions, and the link from derived
//! facts back to them.
//!
//! Source file format, one declaration per line:
//!
//! ```text
//! source <id> "<title>" [edition "<text>"]
//! passage <id> <doc-id> "<locator>" "<quote>"
//! assumption <id> "<statement>" [justification "<text>"] [status open|supported|refuted]
//! ```
//!
//! Quotes are stored verbatim. A rule may repeat an excerpt of a passage
//! quote on its `source` line; the excerpt has to occur in the passage.

mod report;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rules::RuleCatalog;
use crate::syntax::{token_lines, Cursor, ParseError};

pub use report::{trace_report, FactTrace, PremiseRef, TraceReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceDoc {
    pub id: String,
    pub title: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edition: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassageRef {
    pub id: String,
    pub doc: String,
    pub locator: String,
    pub quote: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AssumptionStatus {
    #[default]
    Open,
    Supported,
    Refuted,
}

impl fmt::Display for AssumptionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssumptionStatus::Open => "open",
            AssumptionStatus::Supported => "supported",
            AssumptionStatus::Refuted => "refuted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assumption {
    pub id: String,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub justification: Option<String>,
    pub status: AssumptionStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("line {line}: {kind} `{id}` declared twice")]
    Duplicate { line: usize, kind: &'static str, id: String },
    #[error("line {line}: passage `{passage}` has an empty quote")]
    EmptyQuote { line: usize, passage: String },
    #[error("dangling reference from `{from}` to `{to}`")]
    DanglingReference { from: String, to: String },
}

/// Problems in the links between a rule catalog and a ledger.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum LinkIssue {
    DanglingPassage {
        rule: String,
        passage: String,
    },
    DanglingAssumption {
        rule: String,
        assumption: String,
    },
    /// The rule depends on an assumption marked refuted.
    RefutedAssumption {
        rule: String,
        assumption: String,
    },
    /// The excerpt on the rule's source line does not occur in the passage.
    QuoteMismatch {
        rule: String,
        passage: String,
    },
}

impl fmt::Display for LinkIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkIssue::DanglingPassage { rule, passage } => {
                write!(f, "DanglingReference: rule {rule} cites unknown passage `{passage}`")
            }
            LinkIssue::DanglingAssumption { rule, assumption } => {
                write!(f, "DanglingReference: rule {rule} relies on unknown assumption `{assumption}`")
            }
            LinkIssue::RefutedAssumption { rule, assumption } => {
                write!(f, "RefutedAssumption: rule {rule} relies on refuted assumption `{assumption}`")
            }
            LinkIssue::QuoteMismatch { rule, passage } => {
                write!(f, "QuoteMismatch: rule {rule} quotes text not found in passage `{passage}`")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ledger {
    docs: BTreeMap<String, SourceDoc>,
    passages: BTreeMap<String, PassageRef>,
    assumptions: BTreeMap<String, Assumption>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn doc(&self, id: &str) -> Option<&SourceDoc> {
        self.docs.get(id)
    }

    pub fn docs(&self) -> impl Iterator<Item = &SourceDoc> {
        self.docs.values()
    }

    pub fn passage(&self, id: &str) -> Option<&PassageRef> {
        self.passages.get(id)
    }

    pub fn passages(&self) -> impl Iterator<Item = &PassageRef> {
        self.passages.values()
    }

    pub fn assumption(&self, id: &str) -> Option<&Assumption> {
        self.assumptions.get(id)
    }

    pub fn assumptions(&self) -> impl Iterator<Item = &Assumption> {
        self.assumptions.values()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty() && self.passages.is_empty() && self.assumptions.is_empty()
    }

    /// Changes the status of an assumption. Returns false if it is unknown.
    pub fn set_status(&mut self, id: &str, status: AssumptionStatus) -> bool {
        match self.assumptions.get_mut(id) {
            Some(a) => {
                a.status = status;
                true
            }
            None => false,
        }
    }

    /// Checks every rule's source and assumption links. The result is sorted.
    pub fn check_catalog(&self, catalog: &RuleCatalog) -> Vec<LinkIssue> {
        let mut issues = Vec::new();
        for rule in &catalog.rules {
            for link in &rule.sources {
                match self.passages.get(&link.passage) {
                    None => {
                        issues.push(LinkIssue::DanglingPassage { rule: rule.id.clone(), passage: link.passage.clone() })
                    }
                    Some(p) => {
                        if let Some(q) = &link.quote {
                            if q.is_empty() || !p.quote.contains(q.as_str()) {
                                issues.push(LinkIssue::QuoteMismatch {
                                    rule: rule.id.clone(),
                                    passage: link.passage.clone(),
                                });
                            }
                        }
                    }
                }
            }
            for a in &rule.assumptions {
                match self.assumptions.get(a) {
                    None => issues.push(LinkIssue::DanglingAssumption { rule: rule.id.clone(), assumption: a.clone() }),
                    Some(x) if x.status == AssumptionStatus::Refuted => {
                        issues.push(LinkIssue::RefutedAssumption { rule: rule.id.clone(), assumption: a.clone() })
                    }
                    Some(_) => {}
                }
            }
        }
        issues.sort();
        issues.dedup();
        issues
    }

    /// Ids of the rules that rely on assumption `id`, in catalog order.
    pub fn dependent_rules<'c>(&self, catalog: &'c RuleCatalog, id: &str) -> Vec<&'c str> {
        catalog.rules.iter().filter(|r| r.assumptions.iter().any(|a| a == id)).map(|r| r.id.as_str()).collect()
    }
}

/// Parses a source file and checks that every passage names a declared
/// document.
pub fn load_sources(text: &str) -> Result<Ledger, LedgerError> {
    let mut ledger = Ledger::new();
    let mut passage_lines = Vec::new();
    for line in token_lines(text) {
        let (line_no, raw, tokens) = line?;
        let mut cursor = Cursor::new(&tokens, line_no, raw);
        if cursor.eat_keyword("source") {
            let id = cursor.expect_ident("document id")?;
            let title = cursor.expect_str("title")?;
            let edition = if cursor.eat_keyword("edition") { Some(cursor.expect_str("edition")?) } else { None };
            cursor.expect_end()?;
            if ledger.docs.contains_key(&id) {
                return Err(LedgerError::Duplicate { line: line_no, kind: "source", id });
            }
            ledger.docs.insert(id.clone(), SourceDoc { id, title, edition });
        } else if cursor.eat_keyword("passage") {
            let id = cursor.expect_ident("passage id")?;
            let doc = cursor.expect_ident("document id")?;
            let locator = cursor.expect_str("locator")?;
            let quote = cursor.expect_str("quote")?;
            cursor.expect_end()?;
            if quote.is_empty() {
                return Err(LedgerError::EmptyQuote { line: line_no, passage: id });
            }
            if ledger.passages.contains_key(&id) {
                return Err(LedgerError::Duplicate { line: line_no, kind: "passage", id });
            }
            passage_lines.push(id.clone());
            ledger.passages.insert(id.clone(), PassageRef { id, doc, locator, quote });
        } else if cursor.eat_keyword("assumption") {
            let id = cursor.expect_ident("assumption id")?;
            let statement = cursor.expect_str("statement")?;
            let mut justification = None;
            let mut status = None;
            loop {
                if justification.is_none() && cursor.eat_keyword("justification") {
                    justification = Some(cursor.expect_str("justification")?);
                } else if status.is_none() && cursor.eat_keyword("status") {
                    status = Some(if cursor.eat_keyword("open") {
                        AssumptionStatus::Open
                    } else if cursor.eat_keyword("supported") {
                        AssumptionStatus::Supported
                    } else if cursor.eat_keyword("refuted") {
                        AssumptionStatus::Refuted
                    } else {
                        return Err(cursor.error(&["`open`", "`supported`", "`refuted`"]).into());
                    });
                } else if cursor.at_end() {
                    break;
                } else {
                    return Err(cursor.error(&["`justification`", "`status`", "end of line"]).into());
                }
            }
            if ledger.assumptions.contains_key(&id) {
                return Err(LedgerError::Duplicate { line: line_no, kind: "assumption", id });
            }
            ledger
                .assumptions
                .insert(id.clone(), Assumption { id, statement, justification, status: status.unwrap_or_default() });
        } else {
            return Err(cursor.error(&["`source`", "`passage`", "`assumption`"]).into());
        }
    }
    for id in passage_lines {
        let p = &ledger.passages[&id];
        if !ledger.docs.contains_key(&p.doc) {
            return Err(LedgerError::DanglingReference { from: id, to: p.doc.clone() });
        }
    }
    Ok(ledger)
}
