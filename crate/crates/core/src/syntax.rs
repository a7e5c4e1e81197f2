//! Line lexer and token cursor shared by every text format the engine reads.
//!
//! All formats are line oriented: a `#` outside a string starts a comment,
//! tokens never span lines.

use std::fmt;

use thiserror::Error;

use crate::fact::{GroundFact, Literal, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    /// Variable name without the leading `?`.
    Var(String),
    Str(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Amp,
    Colon,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Var(s) => write!(f, "`?{s}`"),
            Token::Str(s) => write!(f, "string {}", crate::fact::quoted(s)),
            Token::Int(i) => write!(f, "integer {i}"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Comma => f.write_str("`,`"),
            Token::Amp => f.write_str("`&`"),
            Token::Colon => f.write_str("`:`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub token: Token,
    pub line: usize,
    pub column: usize,
}

/// A syntax error with a 1-based position and the set of tokens that would
/// have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: expected {}, found {found}", expected_list(.expected))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

fn expected_list(expected: &[String]) -> String {
    match expected {
        [] => "nothing".to_string(),
        [one] => one.clone(),
        many => format!("one of {}", many.join(", ")),
    }
}

impl ParseError {
    pub fn new(line: usize, column: usize, expected: &[&str], found: impl Into<String>) -> Self {
        Self { line, column, expected: expected.iter().map(|s| s.to_string()).collect(), found: found.into() }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

/// Splits one line into tokens. Columns count characters, starting at 1.
pub fn tokenize_line(line: &str, line_no: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let push = |tokens: &mut Vec<Spanned>, token| tokens.push(Spanned { token, line: line_no, column });
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '(' => {
                push(&mut tokens, Token::LParen);
                i += 1;
            }
            ')' => {
                push(&mut tokens, Token::RParen);
                i += 1;
            }
            ',' => {
                push(&mut tokens, Token::Comma);
                i += 1;
            }
            '&' => {
                push(&mut tokens, Token::Amp);
                i += 1;
            }
            ':' => {
                push(&mut tokens, Token::Colon);
                i += 1;
            }
            '"' => {
                let mut value = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => {
                            return Err(ParseError::new(line_no, i + 1, &["`\"`"], "end of line"));
                        }
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            let escaped = match chars.get(i + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('t') => '\t',
                                other => {
                                    let found = other.map_or("end of line".to_string(), |c| format!("`\\{c}`"));
                                    return Err(ParseError::new(
                                        line_no,
                                        i + 1,
                                        &["`\\\"`", "`\\\\`", "`\\n`", "`\\t`"],
                                        found,
                                    ));
                                }
                            };
                            value.push(escaped);
                            i += 2;
                        }
                        Some(&c) => {
                            value.push(c);
                            i += 1;
                        }
                    }
                }
                push(&mut tokens, Token::Str(value));
            }
            '?' => {
                let start = i + 1;
                let mut end = start;
                if !chars.get(start).is_some_and(|c| c.is_ascii_alphabetic()) {
                    let found = chars.get(start).map_or("end of line".to_string(), |c| format!("`{c}`"));
                    return Err(ParseError::new(line_no, start + 1, &["variable name"], found));
                }
                while chars.get(end).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    end += 1;
                }
                push(&mut tokens, Token::Var(chars[start..end].iter().collect()));
                i = end;
            }
            c if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                let mut end = i + 1;
                while chars.get(end).is_some_and(|d| d.is_ascii_digit()) {
                    end += 1;
                }
                let text: String = chars[i..end].iter().collect();
                let value = text
                    .parse::<i64>()
                    .map_err(|_| ParseError::new(line_no, column, &["64-bit integer"], format!("`{text}`")))?;
                push(&mut tokens, Token::Int(value));
                i = end;
            }
            c if is_ident_start(c) => {
                let mut end = i + 1;
                while chars.get(end).is_some_and(|c| is_ident_continue(*c)) {
                    end += 1;
                }
                push(&mut tokens, Token::Ident(chars[i..end].iter().collect()));
                i = end;
            }
            other => {
                return Err(ParseError::new(line_no, column, &["token"], format!("`{other}`")));
            }
        }
    }
    Ok(tokens)
}

/// Cursor over the tokens of one line.
pub struct Cursor<'a> {
    tokens: &'a [Spanned],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(tokens: &'a [Spanned], line: usize, text: &str) -> Self {
        let end_column = text.split('#').next().unwrap_or("").trim_end().chars().count() + 1;
        Self { tokens, pos: 0, line, end_column }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos).map(|s| &s.token)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    /// Position of the next token, or of the end of the line.
    pub fn position(&self) -> (usize, usize) {
        match self.tokens.get(self.pos) {
            Some(s) => (s.line, s.column),
            None => (self.line, self.end_column),
        }
    }

    pub fn error(&self, expected: &[&str]) -> ParseError {
        let (line, column) = self.position();
        let found = self.peek().map_or("end of line".to_string(), ToString::to_string);
        ParseError::new(line, column, expected, found)
    }

    pub fn bump(&mut self) -> Option<&'a Token> {
        let token = self.peek();
        if token.is_some() {
            self.pos += 1;
        }
        token
    }

    pub fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_keyword(&mut self, keyword: &str) -> bool {
        match self.peek() {
            Some(Token::Ident(s)) if s == keyword => {
                self.pos += 1;
                true
            }
            _ => false,
        }
    }

    pub fn expect(&mut self, token: &Token, label: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&[label]))
        }
    }

    pub fn expect_keyword(&mut self, keyword: &str) -> Result<(), ParseError> {
        if self.eat_keyword(keyword) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{keyword}`")]))
        }
    }

    pub fn expect_ident(&mut self, label: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.error(&[label])),
        }
    }

    pub fn expect_str(&mut self, label: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token::Str(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.error(&[label])),
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(&["end of line"]))
        }
    }
}

/// A raw argument of a predicate call, before it is interpreted as a rule
/// term or a ground value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Var(String),
    Name(String),
    Lit(Literal),
}

/// An argument with its (line, column).
pub type PositionedArg = (Arg, (usize, usize));

/// Parses `name(arg, ...)` and returns the name and the arguments with their
/// positions.
pub fn parse_call(cursor: &mut Cursor<'_>) -> Result<(String, Vec<PositionedArg>), ParseError> {
    let name = cursor.expect_ident("predicate name")?;
    cursor.expect(&Token::LParen, "`(`")?;
    let mut args = Vec::new();
    loop {
        let pos = cursor.position();
        let arg = match cursor.peek() {
            Some(Token::Var(v)) => Arg::Var(v.clone()),
            Some(Token::Ident(s)) if s == "true" => Arg::Lit(Literal::Bool(true)),
            Some(Token::Ident(s)) if s == "false" => Arg::Lit(Literal::Bool(false)),
            Some(Token::Ident(s)) => Arg::Name(s.clone()),
            Some(Token::Int(i)) => Arg::Lit(Literal::Int(*i)),
            Some(Token::Str(s)) => Arg::Lit(Literal::Str(s.clone())),
            _ => return Err(cursor.error(&["variable", "individual", "literal"])),
        };
        cursor.bump();
        args.push((arg, pos));
        if cursor.eat(&Token::Comma) {
            continue;
        }
        if cursor.eat(&Token::RParen) {
            break;
        }
        return Err(cursor.error(&["`,`", "`)`"]));
    }
    Ok((name, args))
}

/// Parses a variable-free atom with one or two arguments.
pub fn parse_ground_atom(cursor: &mut Cursor<'_>) -> Result<GroundFact, ParseError> {
    let (name, args) = parse_call(cursor)?;
    if args.len() > 2 {
        let (line, column) = args[2].1;
        return Err(ParseError::new(line, column, &["`)`"], "third argument"));
    }
    let mut values = Vec::with_capacity(args.len());
    for (arg, (line, column)) in args {
        values.push(match arg {
            Arg::Name(n) => Value::Individual(n),
            Arg::Lit(l) => Value::Literal(l),
            Arg::Var(v) => {
                return Err(ParseError::new(line, column, &["individual", "literal"], format!("`?{v}`")));
            }
        });
    }
    Ok(GroundFact::new(name, values))
}

/// Iterates the non-blank, non-comment lines of a file as `(line number, text, tokens)`.
pub fn token_lines(text: &str) -> impl Iterator<Item = Result<(usize, &str, Vec<Spanned>), ParseError>> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line_no = i + 1;
        match tokenize_line(line, line_no) {
            Ok(tokens) if tokens.is_empty() => None,
            Ok(tokens) => Some(Ok((line_no, line, tokens))),
            Err(e) => Some(Err(e)),
        }
    })
}
