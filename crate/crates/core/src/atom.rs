//! Ground atoms and constants.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use ordered_float::OrderedFloat;

/// A constant symbol appearing in a ground atom.
///
/// A constant is numeric iff its source text parses as a decimal number;
/// everything else is a symbol.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Constant {
    Sym(Arc<str>),
    Num(OrderedFloat<f64>),
}

impl Constant {
    pub fn sym(s: &str) -> Self {
        Constant::Sym(Arc::from(s))
    }

    pub fn num(v: f64) -> Self {
        Constant::Num(OrderedFloat(v))
    }

    /// Classify a token: numeric if it parses as a decimal number.
    pub fn parse(text: &str) -> Self {
        if is_decimal(text) {
            if let Ok(v) = text.parse::<f64>() {
                return Constant::num(v);
            }
        }
        Constant::sym(text)
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Constant::Num(_))
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Constant::Num(v) => Some(v.0),
            Constant::Sym(_) => None,
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Constant::Sym(s) => Some(s),
            Constant::Num(_) => None,
        }
    }
}

/// Decimal literal: optional sign, digits, optional fraction, optional exponent.
pub fn is_decimal(text: &str) -> bool {
    let b = text.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'-' || b[i] == b'+') {
        i += 1;
    }
    let start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    if i == start {
        return false;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == frac {
            return false;
        }
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'-' || b[i] == b'+') {
            i += 1;
        }
        let exp = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp {
            return false;
        }
    }
    i == b.len()
}

// Numbers sort before symbols; within a kind the natural order applies.
impl Ord for Constant {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Constant::Num(a), Constant::Num(b)) => a.cmp(b),
            (Constant::Sym(a), Constant::Sym(b)) => a.cmp(b),
            (Constant::Num(_), Constant::Sym(_)) => Ordering::Less,
            (Constant::Sym(_), Constant::Num(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Constant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Sym(s) => {
                if needs_quotes(s) {
                    write!(f, "'{}'", s.replace('\'', "\\'"))
                } else {
                    f.write_str(s)
                }
            }
            Constant::Num(v) => fmt_number(v.0, f),
        }
    }
}

impl fmt::Debug for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn fmt_number(v: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        write!(f, "{}", v as i64)
    } else {
        write!(f, "{v}")
    }
}

/// Symbols that would not re-lex as a bare lowercase identifier get quoted.
fn needs_quotes(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return true,
    }
    !chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A predicate applied to constants.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: Arc<str>,
    pub args: Vec<Constant>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Constant>) -> Self {
        Atom {
            predicate: Arc::from(predicate),
            args,
        }
    }

    /// Convenience constructor; every argument goes through [`Constant::parse`].
    pub fn parse_args(predicate: &str, args: &[&str]) -> Self {
        Atom::new(predicate, args.iter().map(|a| Constant::parse(a)).collect())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for Atom {
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

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Ordered set of ground atoms; iteration order is deterministic.
pub type AtomSet = BTreeSet<Atom>;
