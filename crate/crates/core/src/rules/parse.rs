use thiserror::Error;

use crate::syntax::{parse_call, token_lines, Arg, Cursor, ParseError, Token};

use super::{Atom, Rule, RuleCatalog, SourceLink, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("rule {rule}: head variable ?{variable} does not occur in the body")]
    UnsafeVariable { rule: String, variable: String },
    #[error("rule {rule} (line {line}): missing `{missing}` clause")]
    Incomplete { rule: String, line: usize, missing: &'static str },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Open {
    None,
    Body,
    Head,
}

struct Pending {
    rule: Rule,
    line: usize,
    informal: bool,
    open: Open,
}

impl Pending {
    fn finish(self) -> Result<Rule, RuleError> {
        let Pending { rule, line, informal, .. } = self;
        if !informal {
            if rule.body.is_empty() {
                return Err(RuleError::Incomplete { rule: rule.id, line, missing: "when" });
            }
            if rule.head.is_empty() {
                return Err(RuleError::Incomplete { rule: rule.id, line, missing: "then" });
            }
            if let Some(v) = rule.unsafe_variables().first() {
                return Err(RuleError::UnsafeVariable { rule: rule.id.clone(), variable: v.to_string() });
            }
        }
        Ok(rule)
    }
}

fn parse_atom(cursor: &mut Cursor<'_>) -> Result<Atom, ParseError> {
    let (predicate, args) = parse_call(cursor)?;
    if let Some((_, (line, column))) = args.get(2) {
        return Err(ParseError::new(*line, *column, &["`)`"], "third argument"));
    }
    let args = args
        .into_iter()
        .map(|(arg, _)| match arg {
            Arg::Var(v) => Term::Var(v),
            Arg::Name(n) => Term::Individual(n),
            Arg::Lit(l) => Term::Literal(l),
        })
        .collect();
    Ok(Atom { predicate, args })
}

/// Parses `atom (& atom)*`. With `stop_at_then`, a `then` keyword ends the
/// conjunction and `true` is returned.
fn parse_conjunction(cursor: &mut Cursor<'_>, into: &mut Vec<Atom>, stop_at_then: bool) -> Result<bool, ParseError> {
    loop {
        into.push(parse_atom(cursor)?);
        if cursor.at_end() {
            return Ok(false);
        }
        if stop_at_then && cursor.eat_keyword("then") {
            return Ok(true);
        }
        if !cursor.eat(&Token::Amp) {
            let expected: &[&str] = if stop_at_then { &["`&`", "`then`"] } else { &["`&`"] };
            return Err(cursor.error(expected));
        }
    }
}

fn parse_body_line(cursor: &mut Cursor<'_>, pending: &mut Pending) -> Result<(), ParseError> {
    if parse_conjunction(cursor, &mut pending.rule.body, true)? {
        parse_conjunction(cursor, &mut pending.rule.head, false)?;
        pending.open = Open::Head;
    } else {
        pending.open = Open::Body;
    }
    Ok(())
}

/// Parses a rule file into a catalog, preserving file order.
pub fn parse_rules(text: &str) -> Result<RuleCatalog, RuleError> {
    let mut rules = Vec::new();
    let mut pending: Option<Pending> = None;
    for line in token_lines(text) {
        let (line_no, raw, tokens) = line?;
        let mut cursor = Cursor::new(&tokens, line_no, raw);
        if cursor.eat_keyword("rule") {
            if let Some(done) = pending.take() {
                rules.push(done.finish()?);
            }
            let id = cursor.expect_ident("rule id")?;
            let gloss = cursor.expect_str("quoted gloss")?;
            cursor.expect_end()?;
            pending = Some(Pending {
                rule: Rule {
                    id,
                    gloss,
                    sources: Vec::new(),
                    assumptions: Vec::new(),
                    body: Vec::new(),
                    head: Vec::new(),
                },
                line: line_no,
                informal: false,
                open: Open::None,
            });
            continue;
        }
        let Some(current) = pending.as_mut() else {
            return Err(cursor.error(&["`rule`"]).into());
        };
        let formal_started = !current.rule.body.is_empty() || !current.rule.head.is_empty();
        if cursor.eat_keyword("source") {
            let passage = cursor.expect_ident("passage id")?;
            let quote = match cursor.peek() {
                Some(Token::Str(_)) => Some(cursor.expect_str("quote")?),
                _ => None,
            };
            cursor.expect_end()?;
            current.rule.sources.push(SourceLink { passage, quote });
            current.open = Open::None;
        } else if cursor.eat_keyword("assumption") {
            let id = cursor.expect_ident("assumption id")?;
            cursor.expect_end()?;
            current.rule.assumptions.push(id);
            current.open = Open::None;
        } else if !current.informal && current.rule.body.is_empty() && cursor.eat_keyword("when") {
            parse_body_line(&mut cursor, current)?;
        } else if !current.rule.body.is_empty() && current.rule.head.is_empty() && cursor.eat_keyword("then") {
            parse_conjunction(&mut cursor, &mut current.rule.head, false)?;
            current.open = Open::Head;
        } else if !current.informal && !formal_started && cursor.eat_keyword("informal") {
            cursor.expect_end()?;
            current.informal = true;
        } else if current.open != Open::None && cursor.eat(&Token::Amp) {
            if current.open == Open::Body {
                parse_body_line(&mut cursor, current)?;
            } else {
                parse_conjunction(&mut cursor, &mut current.rule.head, false)?;
            }
        } else {
            let mut expected = vec!["`rule`", "`source`", "`assumption`"];
            if current.informal {
                // nothing formal may follow
            } else if current.rule.body.is_empty() {
                expected.extend(["`when`", "`informal`"]);
            } else if current.rule.head.is_empty() {
                expected.push("`then`");
            }
            if current.open != Open::None {
                expected.push("`&`");
            }
            return Err(cursor.error(&expected).into());
        }
    }
    if let Some(done) = pending.take() {
        rules.push(done.finish()?);
    }
    Ok(RuleCatalog { rules })
}
