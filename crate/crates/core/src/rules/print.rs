//! Canonical text form. Parsing the output yields the same AST.

use std::fmt;

use crate::fact::quoted;

use super::{Atom, Rule, RuleCatalog, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Individual(i) => f.write_str(i),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl fmt::Display for Atom {
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

fn write_conjunction(f: &mut fmt::Formatter<'_>, keyword: &str, atoms: &[Atom]) -> fmt::Result {
    for (i, atom) in atoms.iter().enumerate() {
        if i == 0 {
            writeln!(f, "  {keyword} {atom}")?;
        } else {
            writeln!(f, "     & {atom}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rule {} {}", self.id, quoted(&self.gloss))?;
        for source in &self.sources {
            match &source.quote {
                Some(q) => writeln!(f, "  source {} {}", source.passage, quoted(q))?,
                None => writeln!(f, "  source {}", source.passage)?,
            }
        }
        for assumption in &self.assumptions {
            writeln!(f, "  assumption {assumption}")?;
        }
        if self.is_formal() {
            write_conjunction(f, "when", &self.body)?;
            write_conjunction(f, "then", &self.head)
        } else {
            writeln!(f, "  informal")
        }
    }
}

impl fmt::Display for RuleCatalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, rule) in self.rules.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            rule.fmt(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::rules::parse_rules;

    #[test]
    fn canonical_form() {
        let text = "rule R4 \"stop\"\n source stvo-26-1 \"warten\"\n when Ego(?ego) & Zone(?z) & ist_Pfadzone(?z, true)\n then anhalten_in(?ego, ?z)\n\nrule R0 \"u\"\n informal\n";
        let catalog = parse_rules(text).unwrap();
        let printed = catalog.to_string();
        assert_eq!(
            printed,
            "rule R4 \"stop\"\n  source stvo-26-1 \"warten\"\n  when Ego(?ego)\n     & Zone(?z)\n     & ist_Pfadzone(?z, true)\n  then anhalten_in(?ego, ?z)\n\nrule R0 \"u\"\n  informal\n"
        );
        assert_eq!(parse_rules(&printed).unwrap(), catalog);
    }
}
