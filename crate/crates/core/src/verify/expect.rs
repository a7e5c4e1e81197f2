use thiserror::Error;

use crate::fact::GroundFact;
use crate::syntax::{parse_ground_atom, token_lines, Cursor, ParseError};

/// What an expert expects the rule catalog to produce for one scenario.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expectation {
    pub scenario_id: String,
    pub must_derive: Vec<GroundFact>,
    pub must_not_derive: Vec<GroundFact>,
    pub note: String,
    /// Notes of `flag source_gap` lines: the expert judged the inferred
    /// behavior conformant but not the behavior actually wanted.
    pub source_gaps: Vec<String>,
}

impl Expectation {
    pub fn new(scenario_id: impl Into<String>) -> Self {
        Self { scenario_id: scenario_id.into(), ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpectationError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("line {line}: `{directive}` before any `expect` line")]
    OutsideBlock { line: usize, directive: &'static str },
    #[error("line {line}: scenario `{scenario}` already has an expectation")]
    Duplicate { line: usize, scenario: String },
    #[error("line {line}: `{fact}` is both required and forbidden")]
    Contradictory { line: usize, fact: GroundFact },
}

/// Parses an expectation file:
///
/// ```text
/// expect <scenario-id>
///   note "<text>"
///   must <ground atom>
///   forbid <ground atom>
///   flag source_gap "<note>"
/// ```
pub fn parse_expectations(text: &str) -> Result<Vec<Expectation>, ExpectationError> {
    let mut out: Vec<Expectation> = Vec::new();
    for line in token_lines(text) {
        let (line_no, raw, tokens) = line?;
        let mut cursor = Cursor::new(&tokens, line_no, raw);
        if cursor.eat_keyword("expect") {
            let id = cursor.expect_ident("scenario id")?;
            cursor.expect_end()?;
            if out.iter().any(|e| e.scenario_id == id) {
                return Err(ExpectationError::Duplicate { line: line_no, scenario: id });
            }
            out.push(Expectation::new(id));
            continue;
        }
        let directive = if cursor.eat_keyword("must") {
            "must"
        } else if cursor.eat_keyword("forbid") {
            "forbid"
        } else if cursor.eat_keyword("note") {
            "note"
        } else if cursor.eat_keyword("flag") {
            "flag"
        } else {
            return Err(cursor.error(&["`expect`", "`must`", "`forbid`", "`note`", "`flag`"]).into());
        };
        let Some(current) = out.last_mut() else {
            return Err(ExpectationError::OutsideBlock { line: line_no, directive });
        };
        match directive {
            "must" | "forbid" => {
                let fact = parse_ground_atom(&mut cursor)?;
                cursor.expect_end()?;
                let (this, other) = if directive == "must" {
                    (&mut current.must_derive, &current.must_not_derive)
                } else {
                    (&mut current.must_not_derive, &current.must_derive)
                };
                if other.contains(&fact) {
                    return Err(ExpectationError::Contradictory { line: line_no, fact });
                }
                if !this.contains(&fact) {
                    this.push(fact);
                }
            }
            "note" => {
                let note = cursor.expect_str("note")?;
                cursor.expect_end()?;
                if !current.note.is_empty() {
                    current.note.push('\n');
                }
                current.note.push_str(&note);
            }
            _ => {
                cursor.expect_keyword("source_gap")?;
                let note = cursor.expect_str("note")?;
                cursor.expect_end()?;
                current.source_gaps.push(note);
            }
        }
    }
    Ok(out)
}
