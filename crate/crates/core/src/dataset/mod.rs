//! Interpretations: loading fact files, deriving intensional atoms,
//! property-kind inference, job partitioning and slicing.

mod job;
mod slice;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::atom::{Atom, AtomSet, Constant};
use crate::lexer::{tokenize, Cursor, Pos, Tok};
use crate::rules::{evaluate_intensional, EvalError};
use crate::schema::Schema;

pub use job::{infer_partition, CaseLevel, Job, Target, TaskKind};
pub use slice::{build_slices, SliceSystem};

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at {pos}: {message}")]
    Parse { pos: Pos, message: String },
    #[error("arity mismatch at {pos}: `{atom}` has {found} argument(s), expected {expected}")]
    ArityMismatch {
        pos: Pos,
        atom: String,
        expected: usize,
        found: usize,
    },
    #[error("property column {column} of `{signature}` mixes numeric and symbolic values")]
    MixedPropertyKind { signature: String, column: String },
    #[error("duplicate interpretation id `{0}`")]
    DuplicateInterpretation(String),
    #[error("unknown target signature `{0}`")]
    UnknownTarget(String),
    #[error("target `{0}` is an entity set and cannot be predicted")]
    UnsupportedTarget(String),
    #[error("slice key column holds values that cannot be ordered together: {0}")]
    UnorderableKey(String),
    #[error("{0}")]
    BadSliceKey(String),
    #[error("interpretation `{id}`: {source}")]
    Eval {
        id: String,
        #[source]
        source: EvalError,
    },
}

/// A finite set of ground atoms under the closed-world assumption.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation {
    pub id: Arc<str>,
    pub atoms: AtomSet,
}

impl Interpretation {
    pub fn new(id: &str, atoms: AtomSet) -> Self {
        Interpretation {
            id: Arc::from(id),
            atoms,
        }
    }

    pub fn atoms_of<'a>(&'a self, pred: &'a str) -> impl Iterator<Item = &'a Atom> + 'a {
        self.atoms.iter().filter(move |a| &*a.predicate == pred)
    }
}

/// Parse fact-file text: `interpretation <id>.` opens a block; each
/// following `pred(c1,...,cn).` line is a ground atom of that block.
pub fn parse_facts(text: &str, schema: &Schema) -> Result<Vec<Interpretation>, DatasetError> {
    let toks = tokenize(text).map_err(|e| DatasetError::Parse {
        pos: e.pos,
        message: e.message,
    })?;
    let mut c = Cursor::new(toks);
    let mut out: Vec<Interpretation> = Vec::new();
    let mut arities: HashMap<Arc<str>, usize> = HashMap::new();
    let perr = |c: &Cursor, what: &str| DatasetError::Parse {
        pos: c.pos(),
        message: format!("expected {what}, found {}", c.peek()),
    };
    while !c.at_eof() {
        let pos = c.pos();
        let Tok::Ident(pred) = c.peek().clone() else {
            return Err(perr(&c, "a predicate name or `interpretation`"));
        };
        if pred == "interpretation" && !matches!(c.peek_at(1), Tok::LParen) {
            c.next();
            let id = match c.next().tok {
                Tok::Ident(s) | Tok::Quoted(s) | Tok::Number(s) => s,
                _ => {
                    return Err(DatasetError::Parse {
                        pos,
                        message: "expected an interpretation id".into(),
                    })
                }
            };
            if !c.eat(&Tok::Dot) {
                return Err(perr(&c, "`.`"));
            }
            if out.iter().any(|i| *i.id == *id) {
                return Err(DatasetError::DuplicateInterpretation(id));
            }
            out.push(Interpretation::new(&id, AtomSet::new()));
            continue;
        }
        c.next();
        let mut args = Vec::new();
        if c.eat(&Tok::LParen) {
            loop {
                match c.next().tok {
                    Tok::Ident(s) | Tok::Quoted(s) => args.push(Constant::sym(&s)),
                    Tok::Number(s) => args.push(Constant::parse(&s)),
                    Tok::Var(v) => {
                        return Err(DatasetError::Parse {
                            pos: c.pos(),
                            message: format!("facts must be ground, found variable `{v}`"),
                        })
                    }
                    other => {
                        return Err(DatasetError::Parse {
                            pos: c.pos(),
                            message: format!("expected a constant, found {other}"),
                        })
                    }
                }
                if c.eat(&Tok::Comma) {
                    continue;
                }
                if !c.eat(&Tok::RParen) {
                    return Err(perr(&c, "`,` or `)`"));
                }
                break;
            }
        }
        if !c.eat(&Tok::Dot) {
            return Err(perr(&c, "`.`"));
        }
        let atom = Atom::new(&pred, args);
        let expected = match schema.signature(&pred) {
            Some(sig) => sig.columns.len(),
            None => *arities.entry(atom.predicate.clone()).or_insert(atom.arity()),
        };
        if expected != atom.arity() {
            return Err(DatasetError::ArityMismatch {
                pos,
                atom: atom.to_string(),
                expected,
                found: atom.arity(),
            });
        }
        let Some(current) = out.last_mut() else {
            return Err(DatasetError::Parse {
                pos,
                message: "fact outside an `interpretation <id>.` block".into(),
            });
        };
        current.atoms.insert(atom);
    }
    PropertyKinds::infer(schema, &out)?;
    Ok(out)
}

/// Read and parse a fact file.
pub fn load_interpretations(path: &Path, schema: &Schema) -> Result<Vec<Interpretation>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_facts(&text, schema)
}

/// Add the intensional atoms derived from each interpretation's facts.
pub fn derive_all(schema: &Schema, interps: &mut [Interpretation]) -> Result<(), DatasetError> {
    use rayon::prelude::*;
    let derived: Vec<Result<AtomSet, DatasetError>> = interps
        .par_iter()
        .map(|i| {
            evaluate_intensional(schema, &i.atoms).map_err(|source| DatasetError::Eval {
                id: i.id.to_string(),
                source,
            })
        })
        .collect();
    for (i, d) in interps.iter_mut().zip(derived) {
        i.atoms.extend(d?);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropertyKind {
    Numeric,
    Categorical,
}

/// Kind of every property column, decided by scanning a whole dataset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropertyKinds {
    kinds: BTreeMap<(Arc<str>, usize), PropertyKind>,
}

impl PropertyKinds {
    /// A column is numeric iff every value seen in it parses as a number.
    pub fn infer(schema: &Schema, interps: &[Interpretation]) -> Result<PropertyKinds, DatasetError> {
        let mut seen: BTreeMap<(Arc<str>, usize), (bool, bool)> = BTreeMap::new();
        for sig in schema.signatures() {
            for (col, _) in sig.property_columns() {
                seen.insert((sig.name.clone(), col), (false, false));
            }
        }
        for i in interps {
            for a in &i.atoms {
                let Some(sig) = schema.signature(&a.predicate) else {
                    continue;
                };
                for (col, _) in sig.property_columns() {
                    let Some(v) = a.args.get(col) else { continue };
                    let e = seen.get_mut(&(sig.name.clone(), col)).expect("registered");
                    if v.is_numeric() {
                        e.0 = true;
                    } else {
                        e.1 = true;
                    }
                }
            }
        }
        let mut kinds = BTreeMap::new();
        for ((sig, col), (num, sym)) in seen {
            if num && sym {
                let name = schema
                    .signature(&sig)
                    .map(|s| s.columns[col].name.to_string())
                    .unwrap_or_default();
                return Err(DatasetError::MixedPropertyKind {
                    signature: sig.to_string(),
                    column: name,
                });
            }
            let k = if num {
                PropertyKind::Numeric
            } else {
                PropertyKind::Categorical
            };
            kinds.insert((sig, col), k);
        }
        Ok(PropertyKinds { kinds })
    }

    pub fn get(&self, signature: &str, col: usize) -> PropertyKind {
        self.kinds
            .get(&(Arc::from(signature), col))
            .copied()
            .unwrap_or(PropertyKind::Categorical)
    }

    /// Force a column's kind (e.g. treat small integer codes as categories).
    pub fn set(&mut self, signature: &str, col: usize, kind: PropertyKind) {
        self.kinds.insert((Arc::from(signature), col), kind);
    }

    pub fn has_numeric(&self) -> bool {
        self.kinds.values().any(|k| *k == PropertyKind::Numeric)
    }

    pub fn has_categorical(&self) -> bool {
        self.kinds.values().any(|k| *k == PropertyKind::Categorical)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize, PropertyKind)> {
        self.kinds.iter().map(|((s, c), k)| (&**s, *c, *k))
    }
}

/// Loaded interpretations closed under the intensional rules, plus the
/// property kinds inferred over all of them.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub interpretations: Vec<Interpretation>,
    pub kinds: PropertyKinds,
}

impl Dataset {
    pub fn from_text(text: &str, schema: &Schema) -> Result<Dataset, DatasetError> {
        let mut interpretations = parse_facts(text, schema)?;
        derive_all(schema, &mut interpretations)?;
        let kinds = PropertyKinds::infer(schema, &interpretations)?;
        Ok(Dataset { interpretations, kinds })
    }

    pub fn load(path: &Path, schema: &Schema) -> Result<Dataset, DatasetError> {
        let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Dataset::from_text(&text, schema)
    }

    pub fn get(&self, id: &str) -> Option<&Interpretation> {
        self.interpretations.iter().find(|i| &*i.id == id)
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "interpretation {}.", Constant::sym(&self.id))?;
        for a in &self.atoms {
            writeln!(f, "{a}.")?;
        }
        Ok(())
    }
}
