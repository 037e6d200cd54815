use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::atom::{Atom, AtomSet, Constant};
use crate::schema::Schema;

use super::{DatasetError, Interpretation};

/// A partition of an interpretation's atoms into totally ordered slices.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceSystem {
    /// Slice keys in increasing order.
    pub keys: Vec<Constant>,
    /// Index into `keys` for every atom.
    pub assignment: BTreeMap<Atom, usize>,
}

impl SliceSystem {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn index_of(&self, key: &Constant) -> Option<usize> {
        self.keys.binary_search(key).ok()
    }

    pub fn slice(&self, i: usize) -> AtomSet {
        self.frame(&[i])
    }

    /// Union of the given slices.
    pub fn frame(&self, indices: &[usize]) -> AtomSet {
        self.assignment
            .iter()
            .filter(|(_, i)| indices.contains(i))
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// Input available when predicting slice `t`: inputs of every slice up
    /// to and including `t`, outputs of slices strictly before `t`.
    pub fn history_input(&self, x: &AtomSet, y: &AtomSet, t: usize) -> AtomSet {
        let mut out = AtomSet::new();
        for (a, &i) in &self.assignment {
            if (i <= t && x.contains(a)) || (i < t && y.contains(a)) {
                out.insert(a.clone());
            }
        }
        out
    }
}

/// Slice `interp` by the values of `column` in `relation`.
///
/// Atoms of `relation` take the key in that column. An entity takes the
/// smallest key among keyed atoms mentioning it; any other atom takes the
/// largest key among its keyed identifiers. What is still unkeyed falls in
/// the first slice.
pub fn build_slices(
    interp: &Interpretation,
    schema: &Schema,
    relation: &str,
    column: &str,
) -> Result<SliceSystem, DatasetError> {
    let sig = schema
        .signature(relation)
        .ok_or_else(|| DatasetError::BadSliceKey(format!("unknown slice relation `{relation}`")))?;
    let col = sig
        .columns
        .iter()
        .position(|c| &*c.name == column)
        .ok_or_else(|| DatasetError::BadSliceKey(format!("`{relation}` has no column `{column}`")))?;

    let keys: BTreeSet<Constant> = interp
        .atoms_of(relation)
        .filter_map(|a| a.args.get(col).cloned())
        .collect();
    if keys.iter().any(Constant::is_numeric) && keys.iter().any(|k| !k.is_numeric()) {
        let shown: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
        return Err(DatasetError::UnorderableKey(shown.join(", ")));
    }
    let keys: Vec<Constant> = keys.into_iter().collect();
    let idx = |k: &Constant| keys.binary_search(k).expect("collected key");

    // identifiers of an atom as (entity set, id)
    let ids = |a: &Atom| -> Vec<(Arc<str>, Constant)> {
        match schema.signature(&a.predicate) {
            Some(s) => s
                .identifier_columns()
                .filter_map(|(c, _)| Some((s.entity_set_of(c)?.clone(), a.args.get(c)?.clone())))
                .collect(),
            None => Vec::new(),
        }
    };

    let mut atom_key: BTreeMap<Atom, usize> = BTreeMap::new();
    let mut entity_key: BTreeMap<(Arc<str>, Constant), usize> = BTreeMap::new();
    for a in interp.atoms_of(relation) {
        let k = idx(&a.args[col]);
        atom_key.insert(a.clone(), k);
        for e in ids(a) {
            let slot = entity_key.entry(e).or_insert(k);
            *slot = (*slot).min(k);
        }
    }
    let is_entity_atom = |a: &Atom| schema.signature(&a.predicate).is_some_and(|s| s.is_entity());
    for a in &interp.atoms {
        if atom_key.contains_key(a) || is_entity_atom(a) {
            continue;
        }
        if let Some(k) = ids(a).iter().filter_map(|e| entity_key.get(e)).max() {
            atom_key.insert(a.clone(), *k);
        }
    }
    let mut late: BTreeMap<(Arc<str>, Constant), usize> = BTreeMap::new();
    for a in &interp.atoms {
        let Some(&k) = atom_key.get(a) else { continue };
        for e in ids(a) {
            if !entity_key.contains_key(&e) {
                let slot = late.entry(e).or_insert(k);
                *slot = (*slot).min(k);
            }
        }
    }
    entity_key.extend(late);

    let mut assignment = BTreeMap::new();
    for a in &interp.atoms {
        let k = match atom_key.get(a) {
            Some(&k) => k,
            None if is_entity_atom(a) => ids(a).first().and_then(|e| entity_key.get(e)).copied().unwrap_or(0),
            None => ids(a)
                .iter()
                .filter_map(|e| entity_key.get(e))
                .max()
                .copied()
                .unwrap_or(0),
        };
        assignment.insert(a.clone(), k);
    }
    let keys = if keys.is_empty() && !assignment.is_empty() {
        vec![Constant::num(0.0)]
    } else {
        keys
    };
    Ok(SliceSystem { keys, assignment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::parse_facts;
    use crate::schema::parse_domain;

    fn movies() -> (Schema, Interpretation) {
        let s = parse_domain(
            "signature movie(id::self, year::property)::extensional.\n\
             signature actor(id::self)::extensional.\n\
             signature acted_in(a::actor, m::movie)::extensional.\n\
             signature blockbuster(m::movie)::extensional.",
        )
        .unwrap();
        let i = parse_facts(
            "interpretation imdb.\n\
             movie(m1,1995). movie(m2,1996). movie(m3,1997). movie(m4,1997).\n\
             actor(a). actor(b). actor(c).\n\
             acted_in(a,m1). acted_in(a,m3). acted_in(b,m2). acted_in(c,m4).\n\
             blockbuster(m1). blockbuster(m3).",
            &s,
        )
        .unwrap()
        .remove(0);
        (s, i)
    }

    #[test]
    fn keyed_by_year() {
        let (s, i) = movies();
        let sl = build_slices(&i, &s, "movie", "year").unwrap();
        let years: Vec<String> = sl.keys.iter().map(|k| k.to_string()).collect();
        assert_eq!(years, ["1995", "1996", "1997"]);
        assert_eq!(sl.assignment.len(), i.atoms.len());
        let total: usize = (0..sl.len()).map(|t| sl.slice(t).len()).sum();
        assert_eq!(total, i.atoms.len());
        // actor a first appears in 1995
        assert_eq!(sl.assignment[&Atom::parse_args("actor", &["a"])], 0);
        assert_eq!(sl.assignment[&Atom::parse_args("acted_in", &["a", "m3"])], 2);
    }

    #[test]
    fn train_and_test_frames_are_ordered() {
        let (s, i) = movies();
        let sl = build_slices(&i, &s, "movie", "year").unwrap();
        let train = sl.frame(&[0, 1]);
        let test = sl.frame(&[2]);
        assert!(train.is_disjoint(&test));
        let max_train = train.iter().map(|a| sl.assignment[a]).max().unwrap();
        let min_test = test.iter().map(|a| sl.assignment[a]).min().unwrap();
        assert!(max_train <= min_test);
    }

    #[test]
    fn single_slice() {
        let (s, _) = movies();
        let i = parse_facts("interpretation x.\nmovie(m1,2000). actor(a). acted_in(a,m1).", &s)
            .unwrap()
            .remove(0);
        let sl = build_slices(&i, &s, "movie", "year").unwrap();
        assert_eq!(sl.len(), 1);
        assert_eq!(sl.slice(0), i.atoms);
    }

    #[test]
    fn history_input_is_literal() {
        let (s, i) = movies();
        let sl = build_slices(&i, &s, "movie", "year").unwrap();
        let (y, x): (AtomSet, AtomSet) = i.atoms.iter().cloned().partition(|a| &*a.predicate == "blockbuster");
        let h = sl.history_input(&x, &y, 2);
        assert!(h.contains(&Atom::parse_args("blockbuster", &["m1"])));
        assert!(!h.contains(&Atom::parse_args("blockbuster", &["m3"])));
        assert!(h.contains(&Atom::parse_args("movie", &["m3", "1997"])));
    }

    #[test]
    fn unorderable() {
        let s = parse_domain("signature ev(id::self, at::property)::extensional.").unwrap();
        let i = Interpretation::new(
            "x",
            [
                Atom::parse_args("ev", &["a", "1"]),
                Atom::parse_args("ev", &["b", "late"]),
            ]
            .into(),
        );
        assert!(matches!(
            build_slices(&i, &s, "ev", "at"),
            Err(DatasetError::UnorderableKey(_))
        ));
    }
}
