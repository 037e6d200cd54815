//! Datalog-lite rules for intensional signatures.
//!
//! Syntax: `head :- lit1, ..., litn.` where a literal is a positive atom,
//! a negated atom `\+ atom`, a comparison (`=`, `\=`, `<`, `=<`, `>`, `>=`)
//! or an aggregation `N = count { Vars : conjunction }` (also `min`, `max`,
//! `sum`). Aggregations over an empty group yield no binding, like
//! `setof/3`.

mod eval;
mod parse;
mod stratify;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::atom::Constant;

pub use eval::{check_rule_safety, evaluate_intensional, evaluate_program, EvalError};
pub use parse::{parse_clause, parse_rules, RuleSyntaxError};
pub use stratify::{dependency_closure, stratify, StratifyError, Stratum};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Arc<str>),
    Const(Constant),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Arc::from(name))
    }

    pub fn as_var(&self) -> Option<&Arc<str>> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomPattern {
    pub predicate: Arc<str>,
    pub args: Vec<Term>,
}

impl AtomPattern {
    pub fn vars(&self) -> impl Iterator<Item = &Arc<str>> {
        self.args.iter().filter_map(Term::as_var)
    }
}

impl fmt::Display for AtomPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AtomPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Ge => CmpOp::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "\\=",
            CmpOp::Lt => "<",
            CmpOp::Le => "=<",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggKind {
    Count,
    Min,
    Max,
    Sum,
}

impl AggKind {
    pub fn name(self) -> &'static str {
        match self {
            AggKind::Count => "count",
            AggKind::Min => "min",
            AggKind::Max => "max",
            AggKind::Sum => "sum",
        }
    }

    pub fn from_name(s: &str) -> Option<AggKind> {
        Some(match s {
            "count" => AggKind::Count,
            "min" => AggKind::Min,
            "max" => AggKind::Max,
            "sum" => AggKind::Sum,
            _ => return None,
        })
    }
}

/// `result = kind { vars : body }`.
///
/// `count` counts distinct `vars` tuples; `min`, `max` and `sum` fold the
/// first variable of each distinct tuple.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Aggregation {
    pub kind: AggKind,
    pub vars: Vec<Arc<str>>,
    pub body: Vec<Literal>,
    pub result: Arc<str>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Pos(AtomPattern),
    Neg(AtomPattern),
    Cmp { lhs: Term, op: CmpOp, rhs: Term },
    Agg(Aggregation),
}

impl Literal {
    /// Variables mentioned by the literal that are visible to the enclosing
    /// conjunction. Variables local to an aggregation body are excluded.
    pub fn outer_vars(&self) -> BTreeSet<Arc<str>> {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a.vars().cloned().collect(),
            Literal::Cmp { lhs, rhs, .. } => [lhs, rhs].into_iter().filter_map(Term::as_var).cloned().collect(),
            Literal::Agg(agg) => {
                let mut s: BTreeSet<Arc<str>> = BTreeSet::new();
                s.insert(agg.result.clone());
                s
            }
        }
    }

    /// Predicates referenced, tagged with whether the reference is
    /// non-monotone (negated or under an aggregate).
    pub fn predicate_refs(&self, out: &mut Vec<(Arc<str>, bool)>, nonmono: bool) {
        match self {
            Literal::Pos(a) => out.push((a.predicate.clone(), nonmono)),
            Literal::Neg(a) => out.push((a.predicate.clone(), true)),
            Literal::Cmp { .. } => {}
            Literal::Agg(agg) => {
                for l in &agg.body {
                    l.predicate_refs(out, true);
                }
            }
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Neg(a) => write!(f, "\\+ {a}"),
            Literal::Cmp { lhs, op, rhs } => write!(f, "{lhs} {} {rhs}", op.symbol()),
            Literal::Agg(agg) => {
                write!(f, "{} = {} {{ ", agg.result, agg.kind.name())?;
                for (i, v) in agg.vars.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(v)?;
                }
                f.write_str(" : ")?;
                write_conj(f, &agg.body)?;
                f.write_str(" }")
            }
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_conj(f: &mut fmt::Formatter<'_>, lits: &[Literal]) -> fmt::Result {
    for (i, l) in lits.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: AtomPattern,
    pub body: Vec<Literal>,
}

impl Rule {
    /// Every predicate the body depends on, with the non-monotone flag.
    pub fn dependencies(&self) -> Vec<(Arc<str>, bool)> {
        let mut out = Vec::new();
        for l in &self.body {
            l.predicate_refs(&mut out, false);
        }
        out
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            write_conj(f, &self.body)?;
        }
        f.write_str(".")
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
