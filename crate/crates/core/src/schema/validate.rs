use std::collections::HashSet;
use std::fmt;

use crate::rules::{check_rule_safety, stratify};

use super::{ColumnType, Level, Schema};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    DuplicateSignature,
    UnknownEntityType {
        column: String,
        entity: String,
    },
    RoleOnProperty {
        column: String,
    },
    MultipleSelfRef,
    /// E-relation with more than one identifier column.
    EntityArity,
    RulesOnExtensional,
    HeadArity,
    UnsafeRule,
    Unstratifiable,
    NoRules,
    EmptyRole,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub signature: String,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}: {}: {}", self.signature, self.message)
    }
}

fn diag(severity: Severity, signature: &str, kind: DiagnosticKind, message: String) -> Diagnostic {
    Diagnostic {
        severity,
        signature: signature.to_string(),
        kind,
        message,
    }
}

/// Check every schema invariant. An empty result means the schema is valid.
pub fn validate_schema(s: &Schema) -> Vec<Diagnostic> {
    use Severity::*;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for sig in s.signatures() {
        if !seen.insert(sig.name.clone()) {
            out.push(diag(
                Error,
                &sig.name,
                DiagnosticKind::DuplicateSignature,
                "declared more than once".into(),
            ));
        }
    }
    for sig in s.signatures() {
        let selfs = sig.columns.iter().filter(|c| c.ctype == ColumnType::SelfRef).count();
        if selfs > 1 {
            out.push(diag(
                Error,
                &sig.name,
                DiagnosticKind::MultipleSelfRef,
                "more than one `self` column".into(),
            ));
        }
        if selfs == 1 && sig.relational_arity() != 1 {
            out.push(diag(
                Error,
                &sig.name,
                DiagnosticKind::EntityArity,
                format!(
                    "entity signature must have exactly one identifier column, found {}",
                    sig.relational_arity()
                ),
            ));
        }
        for c in &sig.columns {
            match &c.ctype {
                ColumnType::Property if c.explicit_role => out.push(diag(
                    Error,
                    &sig.name,
                    DiagnosticKind::RoleOnProperty {
                        column: c.name.to_string(),
                    },
                    format!("property column `{}` cannot carry a role", c.name),
                )),
                ColumnType::EntityRef(e) if !s.signature(e).is_some_and(|t| t.is_entity()) => out.push(diag(
                    Error,
                    &sig.name,
                    DiagnosticKind::UnknownEntityType {
                        column: c.name.to_string(),
                        entity: e.to_string(),
                    },
                    format!("column `{}` refers to unknown entity type `{e}`", c.name),
                )),
                _ => {}
            }
            if c.is_identifier() && c.role.is_empty() {
                out.push(diag(
                    Error,
                    &sig.name,
                    DiagnosticKind::EmptyRole,
                    format!("column `{}` has an empty role", c.name),
                ));
            }
        }
        match sig.level {
            Level::Extensional if !sig.rules.is_empty() => out.push(diag(
                Error,
                &sig.name,
                DiagnosticKind::RulesOnExtensional,
                "extensional signature cannot carry clauses".into(),
            )),
            Level::Intensional if !sig.rules.iter().any(|r| r.head.predicate == sig.name) => out.push(diag(
                Warning,
                &sig.name,
                DiagnosticKind::NoRules,
                "intensional signature has no defining clause; it will never hold".into(),
            )),
            _ => {}
        }
        for r in &sig.rules {
            if let Some(target) = s.signature(&r.head.predicate) {
                if target.columns.len() != r.head.args.len() {
                    out.push(diag(
                        Error,
                        &sig.name,
                        DiagnosticKind::HeadArity,
                        format!(
                            "clause head `{}` has arity {}, signature declares {}",
                            r.head,
                            r.head.args.len(),
                            target.columns.len()
                        ),
                    ));
                }
            }
            if let Err(e) = check_rule_safety(r) {
                out.push(diag(Error, &sig.name, DiagnosticKind::UnsafeRule, e.to_string()));
            }
        }
    }
    if let Err(e) = stratify(&s.all_rules()) {
        out.push(diag(Error, "<program>", DiagnosticKind::Unstratifiable, e.to_string()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::parse_domain_unchecked;

    #[test]
    fn listing_two_is_clean() {
        let s = parse_domain_unchecked(
            "signature has_position(professor_id::professor, position::property)::extensional.\n\
             signature advised_by(p1::student, p2::professor)::extensional.\n\
             signature student(student_id::self)::extensional.\n\
             signature professor(professor_id::self)::extensional.",
        )
        .unwrap();
        assert_eq!(validate_schema(&s), vec![]);
    }

    #[test]
    fn constructed_violations() {
        let s = parse_domain_unchecked(
            "signature student(id::self)::extensional.\nsignature advised_by(p1::student, p2::teacher)::extensional.",
        )
        .unwrap();
        let d = validate_schema(&s);
        assert_eq!(d.len(), 1);
        assert!(matches!(d[0].kind, DiagnosticKind::UnknownEntityType { .. }));

        let s = parse_domain_unchecked("signature atm(id::self)::extensional.\nsignature atm(id::self)::extensional.")
            .unwrap();
        let d = validate_schema(&s);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::DuplicateSignature);
    }

    #[test]
    fn rule_problems() {
        let s = parse_domain_unchecked(
            "signature p(x::property)::intensional.\np(X) :- \\+ q(X).\n\
             signature q(x::property)::intensional.\nq(X) :- r(X), \\+ p(X).\n\
             signature e(x::self)::extensional.\ne(a).",
        )
        .unwrap();
        let kinds: Vec<_> = validate_schema(&s).into_iter().map(|d| d.kind).collect();
        assert!(kinds.contains(&DiagnosticKind::UnsafeRule));
        assert!(kinds.contains(&DiagnosticKind::Unstratifiable));
        assert!(kinds.contains(&DiagnosticKind::RulesOnExtensional));
    }

    #[test]
    fn entity_with_two_identifiers() {
        let s = parse_domain_unchecked("signature a(x::self)::extensional.\nsignature b(x::self, y::a)::extensional.")
            .unwrap();
        let kinds: Vec<_> = validate_schema(&s).into_iter().map(|d| d.kind).collect();
        assert_eq!(kinds, vec![DiagnosticKind::EntityArity]);
    }
}
