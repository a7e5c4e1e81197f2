use crate::fact::LiteralKind;
use crate::syntax::{token_lines, Cursor};

use super::{ClassDecl, DataPropDecl, ObjPropDecl, Ontology, OntologyError};

fn at(line: usize) -> impl FnOnce(OntologyError) -> OntologyError {
    move |e| OntologyError::AtLine { line, source: Box::new(e) }
}

/// Parses the ontology format and validates the result.
///
/// ```text
/// class <Name> [subclass_of <Name>]
/// disjoint <Name> <Name>
/// objprop <name> [domain <Class>] [range <Class>] [symmetric]
/// dataprop <name> [domain <Class>] range (bool|int|string)
/// ```
pub fn parse_ontology(text: &str) -> Result<Ontology, OntologyError> {
    let mut onto = Ontology::new();
    let mut disjoint = Vec::new();
    for line in token_lines(text) {
        let (line_no, raw, tokens) = line?;
        let mut cursor = Cursor::new(&tokens, line_no, raw);
        if cursor.eat_keyword("class") {
            let name = cursor.expect_ident("class name")?;
            let parent =
                if cursor.eat_keyword("subclass_of") { Some(cursor.expect_ident("parent class name")?) } else { None };
            if !cursor.at_end() {
                return Err(cursor.error(&["`subclass_of`", "end of line"]).into());
            }
            onto.add_class(ClassDecl { name, parent }).map_err(at(line_no))?;
        } else if cursor.eat_keyword("disjoint") {
            let a = cursor.expect_ident("class name")?;
            let b = cursor.expect_ident("class name")?;
            cursor.expect_end()?;
            disjoint.push((line_no, a, b));
        } else if cursor.eat_keyword("objprop") {
            let mut decl = ObjPropDecl::new(cursor.expect_ident("property name")?);
            loop {
                if decl.domain.is_none() && cursor.eat_keyword("domain") {
                    decl.domain = Some(cursor.expect_ident("class name")?);
                } else if decl.range.is_none() && cursor.eat_keyword("range") {
                    decl.range = Some(cursor.expect_ident("class name")?);
                } else if !decl.symmetric && cursor.eat_keyword("symmetric") {
                    decl.symmetric = true;
                } else if cursor.at_end() {
                    break;
                } else {
                    return Err(cursor.error(&["`domain`", "`range`", "`symmetric`", "end of line"]).into());
                }
            }
            onto.add_object_property(decl).map_err(at(line_no))?;
        } else if cursor.eat_keyword("dataprop") {
            let name = cursor.expect_ident("property name")?;
            let domain = if cursor.eat_keyword("domain") { Some(cursor.expect_ident("class name")?) } else { None };
            cursor.expect_keyword("range")?;
            let range = if cursor.eat_keyword("bool") {
                LiteralKind::Bool
            } else if cursor.eat_keyword("int") {
                LiteralKind::Int
            } else if cursor.eat_keyword("string") {
                LiteralKind::String
            } else {
                return Err(cursor.error(&["`bool`", "`int`", "`string`"]).into());
            };
            cursor.expect_end()?;
            onto.add_data_property(DataPropDecl { name, domain, range }).map_err(at(line_no))?;
        } else {
            return Err(cursor.error(&["`class`", "`disjoint`", "`objprop`", "`dataprop`"]).into());
        }
    }
    for (line_no, a, b) in disjoint {
        for name in [&a, &b] {
            if onto.class(name).is_none() {
                return Err(at(line_no)(OntologyError::UnresolvedReference {
                    from: "disjoint".into(),
                    name: name.clone(),
                }));
            }
        }
        onto.add_disjoint(a, b);
    }
    onto.validate()?;
    Ok(onto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::PredicateKind;

    #[test]
    fn parses_all_declaration_kinds() {
        let onto = parse_ontology(
            r#"
            # forward references are fine
            class Z293_Zebrastreifen subclass_of Verkehrszeichen
            class Verkehrszeichen subclass_of Verkehrsinfrastruktur
            class Verkehrsinfrastruktur
            class Zone
            disjoint Zone Verkehrsinfrastruktur
            objprop ist_neben domain Zone range Zone symmetric
            objprop ist_in
            dataprop sachverhalt_gilt range bool
            dataprop ist_Pfadzone domain Zone range bool
            "#,
        )
        .unwrap();
        assert_eq!(onto.class("Z293_Zebrastreifen").unwrap().parent.as_deref(), Some("Verkehrszeichen"));
        assert!(onto.is_symmetric("ist_neben"));
        assert!(!onto.is_symmetric("ist_in"));
        assert_eq!(onto.predicate_kind("ist_Pfadzone"), Some(PredicateKind::DataProperty(LiteralKind::Bool)));
        assert_eq!(onto.disjoint_pairs().count(), 1);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_ontology("class A\ndataprop p range float\n").unwrap_err();
        let OntologyError::Syntax(e) = err else { panic!("{err:?}") };
        assert_eq!((e.line, e.column), (2, 18));

        let err = parse_ontology("class A\nclass A\n").unwrap_err();
        assert!(matches!(err, OntologyError::AtLine { line: 2, .. }));

        let err = parse_ontology("class A subclass_of B\nclass B subclass_of A\n").unwrap_err();
        assert_eq!(err, OntologyError::CycleDetected(vec!["A".into(), "B".into()]));

        let err = parse_ontology("class A\ndisjoint A B\n").unwrap_err();
        assert!(matches!(err, OntologyError::AtLine { line: 2, .. }));
    }
}
