use std::sync::Arc;

use crate::atom::Constant;
use crate::lexer::{tokenize, Cursor, Pos, Tok};

use super::{AggKind, Aggregation, AtomPattern, CmpOp, Literal, Rule, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: expected {expected}, found {found}")]
pub struct RuleSyntaxError {
    pub pos: Pos,
    pub expected: String,
    pub found: String,
}

fn err(c: &Cursor, expected: &str) -> RuleSyntaxError {
    RuleSyntaxError {
        pos: c.pos(),
        expected: expected.to_string(),
        found: c.peek().to_string(),
    }
}

/// Parse a whole text of clauses.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>, RuleSyntaxError> {
    let toks = tokenize(text).map_err(|e| RuleSyntaxError {
        pos: e.pos,
        expected: "a token".into(),
        found: e.message,
    })?;
    let mut c = Cursor::new(toks);
    let mut out = Vec::new();
    while !c.at_eof() {
        out.push(parse_clause(&mut c)?);
    }
    Ok(out)
}

/// Parse `head.` or `head :- body.` at the cursor.
pub fn parse_clause(c: &mut Cursor) -> Result<Rule, RuleSyntaxError> {
    let head = parse_atom_pattern(c)?;
    let mut body = Vec::new();
    if c.eat(&Tok::Neck) {
        body = parse_conjunction(c)?;
    }
    if !c.eat(&Tok::Dot) {
        return Err(err(c, "`.` or `:-`"));
    }
    Ok(Rule { head, body })
}

fn parse_conjunction(c: &mut Cursor) -> Result<Vec<Literal>, RuleSyntaxError> {
    let mut lits = vec![parse_literal(c)?];
    while c.eat(&Tok::Comma) {
        lits.push(parse_literal(c)?);
    }
    Ok(lits)
}

fn parse_literal(c: &mut Cursor) -> Result<Literal, RuleSyntaxError> {
    if c.eat(&Tok::NotProvable) {
        let parens = c.eat(&Tok::LParen);
        let lit = parse_literal(c)?;
        if parens && !c.eat(&Tok::RParen) {
            return Err(err(c, "`)`"));
        }
        return match lit {
            Literal::Pos(a) => Ok(Literal::Neg(a)),
            Literal::Cmp { lhs, op, rhs } => Ok(Literal::Cmp {
                lhs,
                op: op.negate(),
                rhs,
            }),
            _ => Err(err(c, "an atom or comparison after `\\+`")),
        };
    }
    // aggregation: Var = kind { ... }
    if let (Tok::Var(v), Tok::Eq, Tok::Ident(k), Tok::LBrace) = (c.peek(), c.peek_at(1), c.peek_at(2), c.peek_at(3)) {
        if let Some(kind) = AggKind::from_name(k) {
            let result: Arc<str> = Arc::from(v.as_str());
            c.next();
            c.next();
            c.next();
            c.next();
            let mut vars = Vec::new();
            loop {
                match c.peek().clone() {
                    Tok::Var(name) => {
                        c.next();
                        vars.push(Arc::from(name.as_str()));
                    }
                    _ => return Err(err(c, "a variable")),
                }
                if !c.eat(&Tok::Comma) {
                    break;
                }
            }
            if !c.eat(&Tok::Colon) {
                return Err(err(c, "`:`"));
            }
            let body = parse_conjunction(c)?;
            if !c.eat(&Tok::RBrace) {
                return Err(err(c, "`}`"));
            }
            return Ok(Literal::Agg(Aggregation {
                kind,
                vars,
                body,
                result,
            }));
        }
    }
    if let Tok::Ident(_) = c.peek() {
        if !is_cmp(c.peek_at(1)) {
            return Ok(Literal::Pos(parse_atom_pattern(c)?));
        }
    }
    let lhs = parse_term(c)?;
    let op = match c.peek() {
        Tok::Eq => CmpOp::Eq,
        Tok::NotEq => CmpOp::Ne,
        Tok::Lt => CmpOp::Lt,
        Tok::Le => CmpOp::Le,
        Tok::Gt => CmpOp::Gt,
        Tok::Ge => CmpOp::Ge,
        _ => return Err(err(c, "a comparison operator")),
    };
    c.next();
    let rhs = parse_term(c)?;
    Ok(Literal::Cmp { lhs, op, rhs })
}

fn is_cmp(t: &Tok) -> bool {
    matches!(t, Tok::Eq | Tok::NotEq | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge)
}

pub(crate) fn parse_atom_pattern(c: &mut Cursor) -> Result<AtomPattern, RuleSyntaxError> {
    let predicate = match c.peek().clone() {
        Tok::Ident(name) => {
            c.next();
            name
        }
        _ => return Err(err(c, "a predicate name")),
    };
    let mut args = Vec::new();
    if c.eat(&Tok::LParen) {
        args.push(parse_term(c)?);
        while c.eat(&Tok::Comma) {
            args.push(parse_term(c)?);
        }
        if !c.eat(&Tok::RParen) {
            return Err(err(c, "`,` or `)`"));
        }
    }
    Ok(AtomPattern {
        predicate: Arc::from(predicate.as_str()),
        args,
    })
}

fn parse_term(c: &mut Cursor) -> Result<Term, RuleSyntaxError> {
    let t = match c.peek().clone() {
        Tok::Var(v) => Term::Var(Arc::from(v.as_str())),
        Tok::Ident(s) => {
            if matches!(c.peek_at(1), Tok::LParen) {
                return Err(err(c, "a constant or variable (functors are not supported)"));
            }
            Term::Const(Constant::sym(&s))
        }
        Tok::Quoted(s) => Term::Const(Constant::sym(&s)),
        Tok::Number(n) => Term::Const(Constant::parse(&n)),
        _ => return Err(err(c, "a constant or variable")),
    };
    c.next();
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_listing_style_rule() {
        let rules = parse_rules(
            "on_same_course(S,P) :- professor(P), student(S), ta(Course,S,Term), taught_by(Course,P,Term).",
        )
        .unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].body.len(), 4);
        assert_eq!(
            rules[0].to_string(),
            "on_same_course(S,P) :- professor(P), student(S), ta(Course,S,Term), taught_by(Course,P,Term)."
        );
    }

    #[test]
    fn aggregation_and_negation() {
        let src = "n(S,P,N) :- student(S), professor(P), N = count { Pub : publication(Pub,S), publication(Pub,P) }.\n\
                   atm(A,E) :- a(A,E), \\+(E = h).\n\
                   lonely(X) :- student(X), \\+ advised(X).";
        let rules = parse_rules(src).unwrap();
        assert!(matches!(rules[0].body[2], Literal::Agg(_)));
        assert!(matches!(rules[1].body[1], Literal::Cmp { op: CmpOp::Ne, .. }));
        assert!(matches!(rules[2].body[1], Literal::Neg(_)));
        // round trip
        let again: Vec<String> = parse_rules(&rules.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"))
            .unwrap()
            .iter()
            .map(|r| r.to_string())
            .collect();
        let first: Vec<String> = rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(again, first);
    }

    #[test]
    fn rejects_functors() {
        assert!(parse_rules("p(X) :- q(f(X)).").is_err());
    }

    #[test]
    fn missing_dot_reports_position() {
        let e = parse_rules("p(X) :- q(X)").unwrap_err();
        assert_eq!(e.pos.line, 1);
        assert!(e.expected.contains('.'));
    }
}
