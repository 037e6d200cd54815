//! Domain declarations: signatures, columns, roles and the schema they form.

mod parse;
mod validate;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::lexer::Pos;
use crate::rules::Rule;

pub use parse::{parse_domain, parse_domain_unchecked, SchemaError};
pub use validate::{validate_schema, Diagnostic, DiagnosticKind, Severity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnType {
    /// Identifier of an entity set declared elsewhere.
    EntityRef(Arc<str>),
    /// Numeric or categorical attribute; kind is decided at load time.
    Property,
    /// The identifier of the entity set being declared.
    SelfRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: Arc<str>,
    pub ctype: ColumnType,
    pub role: Arc<str>,
    /// Whether the role was written with `@role`.
    pub explicit_role: bool,
}

impl Column {
    pub fn is_identifier(&self) -> bool {
        !matches!(self.ctype, ColumnType::Property)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Extensional,
    Intensional,
}

impl Level {
    pub fn keyword(self) -> &'static str {
        match self {
            Level::Extensional => "extensional",
            Level::Intensional => "intensional",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub name: Arc<str>,
    pub columns: Vec<Column>,
    pub level: Level,
    /// Clauses written under the header. Heads may name helper predicates.
    pub rules: Vec<Rule>,
    pub is_kernel_point: bool,
    pub is_target: bool,
    pub pos: Option<Pos>,
}

impl Signature {
    pub fn new(name: &str, columns: Vec<Column>, level: Level) -> Self {
        Signature {
            name: Arc::from(name),
            columns,
            level,
            rules: Vec::new(),
            is_kernel_point: false,
            is_target: false,
            pos: None,
        }
    }

    /// An E-relation introduces an entity set through a `self` column.
    pub fn is_entity(&self) -> bool {
        self.columns.iter().any(|c| c.ctype == ColumnType::SelfRef)
    }

    /// Number of identifier (non-property) columns.
    pub fn relational_arity(&self) -> usize {
        self.columns.iter().filter(|c| c.is_identifier()).count()
    }

    pub fn property_count(&self) -> usize {
        self.columns.len() - self.relational_arity()
    }

    pub fn identifier_columns(&self) -> impl Iterator<Item = (usize, &Column)> {
        self.columns.iter().enumerate().filter(|(_, c)| c.is_identifier())
    }

    pub fn property_columns(&self) -> impl Iterator<Item = (usize, &Column)> {
        self.columns.iter().enumerate().filter(|(_, c)| !c.is_identifier())
    }

    /// Entity set that the identifier in column `col` belongs to.
    pub fn entity_set_of(&self, col: usize) -> Option<&Arc<str>> {
        match &self.columns.get(col)?.ctype {
            ColumnType::EntityRef(e) => Some(e),
            ColumnType::SelfRef => Some(&self.name),
            ColumnType::Property => None,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "signature {}", self.name)?;
        if !self.columns.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.columns.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&c.name)?;
                if c.explicit_role {
                    write!(f, "@{}", c.role)?;
                }
                f.write_str("::")?;
                match &c.ctype {
                    ColumnType::EntityRef(e) => f.write_str(e)?,
                    ColumnType::Property => f.write_str("property")?,
                    ColumnType::SelfRef => f.write_str("self")?,
                }
            }
            f.write_str(")")?;
        }
        write!(f, "::{}.", self.level.keyword())?;
        for r in &self.rules {
            write!(f, "\n{r}")?;
        }
        Ok(())
    }
}

/// An ordered set of signatures. Immutable once validated.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Schema {
    signatures: Vec<Signature>,
    index: HashMap<Arc<str>, usize>,
}

impl Schema {
    /// Build a schema without validating it; duplicates keep the first
    /// occurrence in the lookup index.
    pub fn from_signatures(signatures: Vec<Signature>) -> Self {
        let mut index = HashMap::new();
        for (i, s) in signatures.iter().enumerate() {
            index.entry(s.name.clone()).or_insert(i);
        }
        Schema { signatures, index }
    }

    pub fn signatures(&self) -> &[Signature] {
        &self.signatures
    }

    pub fn signature(&self, name: &str) -> Option<&Signature> {
        self.index.get(name).map(|&i| &self.signatures[i])
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Names of all E-relations.
    pub fn entity_sets(&self) -> BTreeSet<Arc<str>> {
        self.signatures
            .iter()
            .filter(|s| s.is_entity())
            .map(|s| s.name.clone())
            .collect()
    }

    /// Every clause of every signature, in declaration order.
    pub fn all_rules(&self) -> Vec<Rule> {
        self.signatures.iter().flat_map(|s| s.rules.iter().cloned()).collect()
    }

    /// Flag the named signatures as kernel points (clearing all others).
    pub fn set_kernel_points(&mut self, names: &[&str]) -> Result<(), String> {
        for n in names {
            if !self.is_declared(n) {
                return Err(format!("unknown kernel-point signature `{n}`"));
            }
        }
        for s in &mut self.signatures {
            s.is_kernel_point = names.contains(&&*s.name);
        }
        Ok(())
    }

    pub fn set_targets(&mut self, names: &[&str]) {
        for s in &mut self.signatures {
            s.is_target = names.contains(&&*s.name);
        }
    }

    pub fn has_kernel_points(&self) -> bool {
        self.signatures.iter().any(|s| s.is_kernel_point)
    }

    /// Canonical text form; parsing it yields an equal schema.
    pub fn pretty(&self) -> String {
        let mut out = String::from("begin_domain.\n");
        for s in &self.signatures {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out.push_str("end_domain.\n");
        out
    }
}
