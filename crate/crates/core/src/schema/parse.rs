use std::sync::Arc;

use crate::lexer::{tokenize, Cursor, Pos, Tok};
use crate::rules::parse_clause;

use super::{validate_schema, Column, ColumnType, DiagnosticKind, Level, Schema, Severity, Signature};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("syntax error at {pos}: expected {expected}, found {found}")]
    Syntax { pos: Pos, expected: String, found: String },
    #[error("signature `{0}` declared more than once")]
    DuplicateSignature(String),
    #[error("signature `{signature}`: column `{column}` refers to unknown entity type `{entity}`")]
    UnknownEntityType {
        signature: String,
        column: String,
        entity: String,
    },
    #[error("signature `{signature}`: property column `{column}` cannot carry a role")]
    RoleOnProperty { signature: String, column: String },
    #[error("signature `{0}` has more than one `self` column")]
    MultipleSelfRef(String),
    #[error("signature `{signature}`: {message}")]
    Invalid { signature: String, message: String },
}

/// Parse and validate a domain file. The first error-level diagnostic is
/// returned as an error.
pub fn parse_domain(text: &str) -> Result<Schema, SchemaError> {
    let schema = parse_domain_unchecked(text)?;
    for d in validate_schema(&schema) {
        if d.severity != Severity::Error {
            continue;
        }
        let signature = d.signature.clone();
        return Err(match d.kind {
            DiagnosticKind::DuplicateSignature => SchemaError::DuplicateSignature(signature),
            DiagnosticKind::UnknownEntityType { column, entity } => SchemaError::UnknownEntityType {
                signature,
                column,
                entity,
            },
            DiagnosticKind::RoleOnProperty { column } => SchemaError::RoleOnProperty { signature, column },
            DiagnosticKind::MultipleSelfRef => SchemaError::MultipleSelfRef(signature),
            _ => SchemaError::Invalid {
                signature,
                message: d.message,
            },
        });
    }
    Ok(schema)
}

/// Parse without running [`validate_schema`]; only syntax errors surface.
pub fn parse_domain_unchecked(text: &str) -> Result<Schema, SchemaError> {
    let toks = tokenize(text).map_err(|e| SchemaError::Syntax {
        pos: e.pos,
        expected: "a valid token".into(),
        found: e.message,
    })?;
    let mut c = Cursor::new(toks);
    let bracketed = is_keyword(&c, "begin_domain");
    if bracketed {
        c.next();
        expect(&mut c, &Tok::Dot, "`.`")?;
    }
    let mut sigs: Vec<Signature> = Vec::new();
    loop {
        if bracketed && is_keyword(&c, "end_domain") {
            c.next();
            expect(&mut c, &Tok::Dot, "`.`")?;
            if !c.at_eof() {
                return Err(syntax(&c, "end of input after `end_domain.`"));
            }
            break;
        }
        if c.at_eof() {
            if bracketed {
                return Err(syntax(&c, "`end_domain.`"));
            }
            break;
        }
        if is_keyword(&c, "signature") {
            sigs.push(parse_header(&mut c)?);
            continue;
        }
        // clause attached to the current header
        let Some(current) = sigs.last_mut() else {
            return Err(syntax(&c, "`signature`"));
        };
        let rule = parse_clause(&mut c).map_err(|e| SchemaError::Syntax {
            pos: e.pos,
            expected: e.expected,
            found: e.found,
        })?;
        current.rules.push(rule);
    }
    Ok(Schema::from_signatures(sigs))
}

fn is_keyword(c: &Cursor, kw: &str) -> bool {
    matches!(c.peek(), Tok::Ident(s) if s == kw)
}

fn syntax(c: &Cursor, expected: &str) -> SchemaError {
    SchemaError::Syntax {
        pos: c.pos(),
        expected: expected.to_string(),
        found: c.peek().to_string(),
    }
}

fn expect(c: &mut Cursor, tok: &Tok, what: &str) -> Result<(), SchemaError> {
    if c.eat(tok) {
        Ok(())
    } else {
        Err(syntax(c, what))
    }
}

fn ident(c: &mut Cursor, what: &str) -> Result<String, SchemaError> {
    match c.peek().clone() {
        Tok::Ident(s) => {
            c.next();
            Ok(s)
        }
        _ => Err(syntax(c, what)),
    }
}

fn parse_header(c: &mut Cursor) -> Result<Signature, SchemaError> {
    let pos = c.pos();
    c.next(); // `signature`
    let name = ident(c, "a signature name")?;
    let mut columns = Vec::new();
    if c.eat(&Tok::LParen) {
        loop {
            columns.push(parse_column(c, columns.len() + 1)?);
            if c.eat(&Tok::Comma) {
                continue;
            }
            expect(c, &Tok::RParen, "`,` or `)`")?;
            break;
        }
    }
    expect(c, &Tok::ColonColon, "`::`")?;
    let level = match ident(c, "`extensional` or `intensional`")?.as_str() {
        "extensional" => Level::Extensional,
        "intensional" => Level::Intensional,
        other => {
            return Err(SchemaError::Syntax {
                pos: c.pos(),
                expected: "`extensional` or `intensional`".into(),
                found: format!("identifier `{other}`"),
            })
        }
    };
    expect(c, &Tok::Dot, "`.`")?;
    let mut sig = Signature::new(&name, columns, level);
    sig.pos = Some(pos);
    Ok(sig)
}

fn parse_column(c: &mut Cursor, position: usize) -> Result<Column, SchemaError> {
    let name = ident(c, "a column name")?;
    let mut role: Option<String> = None;
    if c.eat(&Tok::At) {
        role = Some(match c.peek().clone() {
            Tok::Ident(s) | Tok::Number(s) => {
                c.next();
                s
            }
            _ => return Err(syntax(c, "a role name")),
        });
    }
    expect(c, &Tok::ColonColon, "`::`")?;
    let ty = ident(c, "a column type")?;
    let ctype = match ty.as_str() {
        "self" => ColumnType::SelfRef,
        "property" => ColumnType::Property,
        other => ColumnType::EntityRef(Arc::from(other)),
    };
    Ok(Column {
        name: Arc::from(name.as_str()),
        ctype,
        explicit_role: role.is_some(),
        role: Arc::from(role.unwrap_or_else(|| position.to_string()).as_str()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_two_header() {
        let s = parse_domain(
            "signature student(student_id::self)::extensional.\n\
             signature professor(professor_id::self)::extensional.\n\
             signature advised_by(p1::student, p2::professor)::extensional.",
        )
        .unwrap();
        let a = s.signature("advised_by").unwrap();
        assert_eq!(a.level, Level::Extensional);
        assert_eq!(a.columns.len(), 2);
        assert_eq!(a.columns[0].ctype, ColumnType::EntityRef(Arc::from("student")));
        assert_eq!(&*a.columns[0].role, "1");
        assert_eq!(&*a.columns[1].role, "2");
    }

    #[test]
    fn zero_arity_signature() {
        let s = parse_domain("signature mutagenic::extensional.").unwrap();
        let m = s.signature("mutagenic").unwrap();
        assert!(m.columns.is_empty());
        assert_eq!(m.relational_arity(), 0);
    }

    #[test]
    fn shared_role() {
        let s = parse_domain(
            "signature atm(atom_id::self, element::property)::extensional.\n\
             signature bnd(atom_1@b::atm, atom_2@b::atm, type::property)::intensional.\n\
             bnd(A,B,T) :- b(A,B,T).",
        )
        .unwrap();
        let b = s.signature("bnd").unwrap();
        assert_eq!(&*b.columns[0].role, "b");
        assert_eq!(&*b.columns[1].role, "b");
        assert_eq!(b.rules.len(), 1);
    }

    #[test]
    fn syntax_error_has_location() {
        let e = parse_domain("signature advised_by(p1::student p2::professor)::extensional.").unwrap_err();
        match e {
            SchemaError::Syntax { pos, .. } => assert_eq!((pos.line, pos.col), (1, 34)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let e = parse_domain(
            "signature student(id::self)::extensional.\n\
             signature advised_by(p1::student, p2::teacher)::extensional.",
        )
        .unwrap_err();
        assert!(matches!(e, SchemaError::UnknownEntityType { ref entity, .. } if entity == "teacher"));

        let e =
            parse_domain("signature atm(id::self)::extensional.\nsignature atm(id::self)::extensional.").unwrap_err();
        assert_eq!(e, SchemaError::DuplicateSignature("atm".into()));

        let e = parse_domain("signature a(id::self, v@r::property)::extensional.").unwrap_err();
        assert!(matches!(e, SchemaError::RoleOnProperty { .. }));

        let e = parse_domain("signature a(x::self, y::self)::extensional.").unwrap_err();
        assert_eq!(e, SchemaError::MultipleSelfRef("a".into()));
    }

    #[test]
    fn markers_must_balance() {
        assert!(parse_domain("begin_domain.\nsignature m::extensional.\nend_domain.\n").is_ok());
        assert!(parse_domain("begin_domain.\nsignature m::extensional.\n").is_err());
        assert!(parse_domain("begin_domain.\nend_domain.\nfoo.").is_err());
    }

    #[test]
    fn clause_before_header_rejected() {
        assert!(parse_domain("p(X) :- q(X).").is_err());
    }
}
