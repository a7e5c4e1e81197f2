//! Ground values and facts shared by scenes, the inference engine and the
//! verification harness.

use std::fmt;

use serde::Serialize;

/// A literal constant. Only the three kinds a data property may range over.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum Literal {
    Bool(bool),
    Int(i64),
    Str(String),
}

impl Literal {
    pub fn kind(&self) -> LiteralKind {
        match self {
            Literal::Bool(_) => LiteralKind::Bool,
            Literal::Int(_) => LiteralKind::Int,
            Literal::Str(_) => LiteralKind::String,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Bool(b) => write!(f, "{b}"),
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Str(s) => write_quoted(f, s),
        }
    }
}

/// Writes `s` as a double-quoted string using the escapes the lexer accepts.
pub(crate) fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

pub(crate) fn quoted(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    write_quoted(&mut out, s).expect("writing to a String cannot fail");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiteralKind {
    Bool,
    Int,
    String,
}

impl fmt::Display for LiteralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiteralKind::Bool => "bool",
            LiteralKind::Int => "int",
            LiteralKind::String => "string",
        })
    }
}

/// An argument of a ground fact: a named individual or a literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Individual(String),
    Literal(Literal),
}

impl Value {
    pub fn individual(name: impl Into<String>) -> Self {
        Value::Individual(name.into())
    }

    pub fn as_individual(&self) -> Option<&str> {
        match self {
            Value::Individual(name) => Some(name),
            Value::Literal(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Individual(name) => f.write_str(name),
            Value::Literal(lit) => lit.fmt(f),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// How a fact relates to the ontology, decided by its shape alone: unary facts
/// are class assertions, binary facts with a literal object are data facts,
/// everything else is an object fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactKind {
    ClassAssertion,
    ObjectFact,
    DataFact,
}

/// A variable-free atom, e.g. `besteht_aus(fuueb, streif)` or `Zone(zoneRot)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundFact {
    pub predicate: String,
    pub args: Vec<Value>,
}

impl GroundFact {
    pub fn new(predicate: impl Into<String>, args: Vec<Value>) -> Self {
        Self { predicate: predicate.into(), args }
    }

    pub fn class(class: impl Into<String>, individual: impl Into<String>) -> Self {
        Self::new(class, vec![Value::Individual(individual.into())])
    }

    pub fn object(property: impl Into<String>, subject: impl Into<String>, object: impl Into<String>) -> Self {
        Self::new(property, vec![Value::Individual(subject.into()), Value::Individual(object.into())])
    }

    pub fn data(property: impl Into<String>, subject: impl Into<String>, value: Literal) -> Self {
        Self::new(property, vec![Value::Individual(subject.into()), Value::Literal(value)])
    }

    pub fn kind(&self) -> FactKind {
        match self.args.as_slice() {
            [_] => FactKind::ClassAssertion,
            [_, Value::Literal(_)] => FactKind::DataFact,
            _ => FactKind::ObjectFact,
        }
    }

    pub fn subject(&self) -> Option<&Value> {
        self.args.first()
    }

    /// Individuals named anywhere in the fact.
    pub fn individuals(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Value::as_individual)
    }

    /// Parses a single ground atom such as `anhalten_in(ego, zoneBlau1)`.
    pub fn parse(text: &str) -> Result<Self, crate::syntax::ParseError> {
        let tokens = crate::syntax::tokenize_line(text, 1)?;
        let mut cursor = crate::syntax::Cursor::new(&tokens, 1, text);
        let fact = crate::syntax::parse_ground_atom(&mut cursor)?;
        cursor.expect_end()?;
        Ok(fact)
    }
}

impl fmt::Display for GroundFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            arg.fmt(f)?;
        }
        f.write_str(")")
    }
}

impl Serialize for GroundFact {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
