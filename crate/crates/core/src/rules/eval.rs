//! Bottom-up semi-naive evaluation, one stratum at a time.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use crate::atom::{Atom, AtomSet, Constant};
use crate::schema::Schema;

use super::{stratify, AggKind, AtomPattern, CmpOp, Literal, Rule, StratifyError, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("rule `{rule}` is not range restricted: variable(s) {vars} cannot be bound")]
    NotRangeRestricted { rule: String, vars: String },
    #[error("rule `{rule}`: aggregate result `{var}` must be a fresh variable")]
    AggregateResultBound { rule: String, var: String },
    #[error(transparent)]
    Stratify(#[from] StratifyError),
}

type Tuple = Vec<Constant>;

#[derive(Default)]
struct Relation {
    tuples: Vec<Tuple>,
    set: HashSet<Tuple>,
    index: Vec<HashMap<Constant, Vec<usize>>>,
}

impl Relation {
    fn insert(&mut self, t: Tuple) -> bool {
        if self.set.contains(&t) {
            return false;
        }
        if self.index.len() < t.len() {
            self.index.resize_with(t.len(), HashMap::new);
        }
        let id = self.tuples.len();
        for (col, c) in t.iter().enumerate() {
            self.index[col].entry(c.clone()).or_default().push(id);
        }
        self.set.insert(t.clone());
        self.tuples.push(t);
        true
    }

    /// Candidate tuple ids given the bound columns; `None` means scan all.
    fn candidates(&self, bound: &[(usize, &Constant)]) -> Option<&[usize]> {
        let mut best: Option<&[usize]> = None;
        for (col, c) in bound {
            let ids: &[usize] = match self.index.get(*col).and_then(|ix| ix.get(*c)) {
                Some(v) => v,
                None => &[],
            };
            if best.is_none_or(|b| ids.len() < b.len()) {
                best = Some(ids);
            }
        }
        best
    }
}

#[derive(Default)]
struct Db {
    rels: HashMap<Arc<str>, Relation>,
}

impl Db {
    fn insert(&mut self, pred: &Arc<str>, t: Tuple) -> bool {
        self.rels.entry(pred.clone()).or_default().insert(t)
    }

    fn contains(&self, pred: &str, t: &Tuple) -> bool {
        self.rels.get(pred).is_some_and(|r| r.set.contains(t))
    }
}

#[derive(Clone, Debug)]
enum Slot {
    Var(usize),
    Const(Constant),
}

#[derive(Clone, Debug)]
enum Step {
    Scan {
        pred: Arc<str>,
        args: Vec<Slot>,
        /// position in the original body, used to pick the delta relation
        body_pos: usize,
    },
    NotExists {
        pred: Arc<str>,
        args: Vec<Slot>,
    },
    Compare {
        lhs: Slot,
        op: CmpOp,
        rhs: Slot,
    },
    Aggregate {
        kind: AggKind,
        vars: Vec<usize>,
        body: Vec<Step>,
        result: usize,
    },
}

struct CompiledRule {
    head_pred: Arc<str>,
    head: Vec<Slot>,
    steps: Vec<Step>,
    nvars: usize,
    /// (body position, predicate) of every top-level positive literal
    positives: Vec<(usize, Arc<str>)>,
}

struct VarTable {
    ids: HashMap<Arc<str>, usize>,
    anon: usize,
}

impl VarTable {
    fn id(&mut self, v: &Arc<str>) -> usize {
        let key: Arc<str> = if &**v == "_" {
            self.anon += 1;
            Arc::from(format!("_#{}", self.anon))
        } else {
            v.clone()
        };
        let n = self.ids.len();
        *self.ids.entry(key).or_insert(n)
    }

    fn slot(&mut self, t: &Term) -> Slot {
        match t {
            Term::Var(v) => Slot::Var(self.id(v)),
            Term::Const(c) => Slot::Const(c.clone()),
        }
    }
}

/// Pre-compiled literal with resolved variable ids.
enum CLit {
    Pos(Arc<str>, Vec<Slot>, usize),
    Neg(Arc<str>, Vec<Slot>),
    Cmp(Slot, CmpOp, Slot),
    Agg {
        kind: AggKind,
        vars: Vec<usize>,
        body: Vec<CLit>,
        result: usize,
    },
}

fn slot_vars(s: &[Slot]) -> impl Iterator<Item = usize> + '_ {
    s.iter().filter_map(|x| match x {
        Slot::Var(v) => Some(*v),
        Slot::Const(_) => None,
    })
}

impl CLit {
    fn all_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            CLit::Pos(_, a, _) | CLit::Neg(_, a) => out.extend(slot_vars(a)),
            CLit::Cmp(l, _, r) => {
                out.extend(slot_vars(std::slice::from_ref(l)).chain(slot_vars(std::slice::from_ref(r))))
            }
            CLit::Agg { body, result, vars, .. } => {
                out.insert(*result);
                out.extend(vars.iter().copied());
                for l in body {
                    l.all_vars(out);
                }
            }
        }
    }
}

fn compile_lits(lits: &[Literal], vt: &mut VarTable) -> Vec<CLit> {
    lits.iter()
        .enumerate()
        .map(|(i, l)| match l {
            Literal::Pos(a) => CLit::Pos(a.predicate.clone(), a.args.iter().map(|t| vt.slot(t)).collect(), i),
            Literal::Neg(a) => CLit::Neg(a.predicate.clone(), a.args.iter().map(|t| vt.slot(t)).collect()),
            Literal::Cmp { lhs, op, rhs } => CLit::Cmp(vt.slot(lhs), *op, vt.slot(rhs)),
            Literal::Agg(agg) => {
                let result = vt.id(&agg.result);
                let vars = agg.vars.iter().map(|v| vt.id(v)).collect();
                let body = compile_lits(&agg.body, vt);
                CLit::Agg {
                    kind: agg.kind,
                    vars,
                    body,
                    result,
                }
            }
        })
        .collect()
}

/// Order `lits` into executable steps given `bound` variables. `outside`
/// holds the variables visible outside each literal (used to decide which
/// variables of negations and aggregates are shared).
fn plan(mut lits: Vec<(CLit, BTreeSet<usize>)>, bound: &mut BTreeSet<usize>) -> Result<Vec<Step>, BTreeSet<usize>> {
    let mut steps = Vec::new();
    while !lits.is_empty() {
        let ready = |l: &CLit, shared: &BTreeSet<usize>, bound: &BTreeSet<usize>| -> bool {
            match l {
                CLit::Pos(..) => true,
                CLit::Neg(_, args) => slot_vars(args)
                    .filter(|v| shared.contains(v))
                    .all(|v| bound.contains(&v)),
                CLit::Cmp(l, op, r) => {
                    let lb = match l {
                        Slot::Var(v) => bound.contains(v),
                        Slot::Const(_) => true,
                    };
                    let rb = match r {
                        Slot::Var(v) => bound.contains(v),
                        Slot::Const(_) => true,
                    };
                    (lb && rb) || (*op == CmpOp::Eq && (lb || rb))
                }
                CLit::Agg { body, result, .. } => {
                    let mut inner = BTreeSet::new();
                    for b in body {
                        b.all_vars(&mut inner);
                    }
                    inner
                        .iter()
                        .filter(|v| shared.contains(v) && *v != result)
                        .all(|v| bound.contains(v))
                }
            }
        };
        let pick = lits
            .iter()
            .position(|(l, s)| !matches!(l, CLit::Pos(..)) && ready(l, s, bound))
            .or_else(|| {
                // positive literal with most bound arguments
                lits.iter()
                    .enumerate()
                    .filter_map(|(i, (l, _))| match l {
                        CLit::Pos(_, args, _) => Some((
                            i,
                            slot_vars(args).filter(|v| bound.contains(v)).count()
                                + args.iter().filter(|a| matches!(a, Slot::Const(_))).count(),
                        )),
                        _ => None,
                    })
                    .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                    .map(|(i, _)| i)
            });
        let Some(i) = pick else {
            let mut missing = BTreeSet::new();
            for (l, _) in &lits {
                l.all_vars(&mut missing);
            }
            return Err(missing.difference(bound).copied().collect());
        };
        let (lit, shared) = lits.remove(i);
        steps.push(match lit {
            CLit::Pos(pred, args, body_pos) => {
                bound.extend(slot_vars(&args));
                Step::Scan { pred, args, body_pos }
            }
            CLit::Neg(pred, args) => Step::NotExists { pred, args },
            CLit::Cmp(l, op, r) => {
                bound.extend(slot_vars(std::slice::from_ref(&l)).chain(slot_vars(std::slice::from_ref(&r))));
                Step::Compare { lhs: l, op, rhs: r }
            }
            CLit::Agg {
                kind,
                vars,
                body,
                result,
            } => {
                let mut inner_bound = bound.clone();
                let inner = with_sharing(body, &shared);
                let body_steps = plan(inner, &mut inner_bound)?;
                if let Some(v) = vars.iter().find(|v| !inner_bound.contains(v)) {
                    return Err(BTreeSet::from([*v]));
                }
                bound.insert(result);
                Step::Aggregate {
                    kind,
                    vars,
                    body: body_steps,
                    result,
                }
            }
        });
    }
    Ok(steps)
}

/// Pair every literal with the set of variables occurring outside it
/// (in `context` or in the other literals).
fn with_sharing(lits: Vec<CLit>, context: &BTreeSet<usize>) -> Vec<(CLit, BTreeSet<usize>)> {
    let var_sets: Vec<BTreeSet<usize>> = lits
        .iter()
        .map(|l| {
            let mut s = BTreeSet::new();
            l.all_vars(&mut s);
            s
        })
        .collect();
    lits.into_iter()
        .enumerate()
        .map(|(i, l)| {
            let mut shared = context.clone();
            for (j, s) in var_sets.iter().enumerate() {
                if j != i {
                    shared.extend(s.iter().copied());
                }
            }
            (l, shared)
        })
        .collect()
}

fn compile(rule: &Rule) -> Result<CompiledRule, EvalError> {
    let mut vt = VarTable {
        ids: HashMap::new(),
        anon: 0,
    };
    let head: Vec<Slot> = rule.head.args.iter().map(|t| vt.slot(t)).collect();
    let lits = compile_lits(&rule.body, &mut vt);
    // aggregate results must be fresh
    for l in &rule.body {
        if let Literal::Agg(agg) = l {
            let clash = rule.body.iter().any(|o| match o {
                Literal::Pos(a) => a.vars().any(|v| *v == agg.result),
                Literal::Agg(other) => !std::ptr::eq(other, agg) && other.result == agg.result,
                _ => false,
            });
            if clash {
                return Err(EvalError::AggregateResultBound {
                    rule: rule.to_string(),
                    var: agg.result.to_string(),
                });
            }
        }
    }
    let head_vars: BTreeSet<usize> = slot_vars(&head).collect();
    let mut bound = BTreeSet::new();
    let names = |ids: &BTreeSet<usize>, vt: &VarTable| -> String {
        let mut v: Vec<&str> = vt
            .ids
            .iter()
            .filter(|(_, i)| ids.contains(i))
            .map(|(n, _)| &**n)
            .collect();
        v.sort();
        v.join(", ")
    };
    let steps = plan(with_sharing(lits, &head_vars), &mut bound).map_err(|missing| EvalError::NotRangeRestricted {
        rule: rule.to_string(),
        vars: names(&missing, &vt),
    })?;
    let unbound: BTreeSet<usize> = head_vars.difference(&bound).copied().collect();
    if !unbound.is_empty() {
        return Err(EvalError::NotRangeRestricted {
            rule: rule.to_string(),
            vars: names(&unbound, &vt),
        });
    }
    Ok(CompiledRule {
        head_pred: rule.head.predicate.clone(),
        head,
        steps,
        nvars: vt.ids.len(),
        positives: rule
            .body
            .iter()
            .enumerate()
            .filter_map(|(i, l)| match l {
                Literal::Pos(AtomPattern { predicate, .. }) => Some((i, predicate.clone())),
                _ => None,
            })
            .collect(),
    })
}

/// Check range restriction and aggregate freshness without evaluating.
pub fn check_rule_safety(rule: &Rule) -> Result<(), EvalError> {
    compile(rule).map(|_| ())
}

struct Ctx<'a> {
    db: &'a Db,
    delta: Option<(usize, &'a Relation)>,
}

fn value<'b>(s: &'b Slot, b: &'b [Option<Constant>]) -> Option<&'b Constant> {
    match s {
        Slot::Const(c) => Some(c),
        Slot::Var(v) => b[*v].as_ref(),
    }
}

fn compare(a: &Constant, op: CmpOp, b: &Constant) -> Result<bool, EvalError> {
    if a.is_numeric() != b.is_numeric() {
        return Err(EvalError::TypeMismatch(format!("cannot compare `{a}` with `{b}`")));
    }
    Ok(match op {
        CmpOp::Eq => a == b,
        CmpOp::Ne => a != b,
        _ => {
            let (Some(x), Some(y)) = (a.as_f64(), b.as_f64()) else {
                return Err(EvalError::TypeMismatch(format!(
                    "ordering comparison needs numbers, got `{a}` and `{b}`"
                )));
            };
            match op {
                CmpOp::Lt => x < y,
                CmpOp::Le => x <= y,
                CmpOp::Gt => x > y,
                CmpOp::Ge => x >= y,
                CmpOp::Eq | CmpOp::Ne => unreachable!(),
            }
        }
    })
}

/// Receives each complete binding.
type Emit<'a> = dyn FnMut(&[Option<Constant>]) -> Result<(), EvalError> + 'a;

fn solve(ctx: &Ctx<'_>, steps: &[Step], b: &mut Vec<Option<Constant>>, emit: &mut Emit<'_>) -> Result<(), EvalError> {
    let Some((step, rest)) = steps.split_first() else {
        return emit(b);
    };
    match step {
        Step::Scan { pred, args, body_pos } => {
            let rel = match ctx.delta {
                Some((pos, d)) if pos == *body_pos => Some(d),
                _ => ctx.db.rels.get(pred),
            };
            let Some(rel) = rel else { return Ok(()) };
            let bound: Vec<(usize, &Constant)> = args
                .iter()
                .enumerate()
                .filter_map(|(i, s)| value(s, b).map(|c| (i, c)))
                .collect();
            // clone so the borrow of `b` ends before we bind
            let bound: Vec<(usize, Constant)> = bound.into_iter().map(|(i, c)| (i, c.clone())).collect();
            let bref: Vec<(usize, &Constant)> = bound.iter().map(|(i, c)| (*i, c)).collect();
            let ids: Vec<usize> = match rel.candidates(&bref) {
                Some(ids) => ids.to_vec(),
                None => (0..rel.tuples.len()).collect(),
            };
            for id in ids {
                let t = &rel.tuples[id];
                if t.len() != args.len() {
                    continue;
                }
                let mut newly = Vec::new();
                let mut ok = true;
                for (i, s) in args.iter().enumerate() {
                    match s {
                        Slot::Const(c) => {
                            if *c != t[i] {
                                ok = false;
                                break;
                            }
                        }
                        Slot::Var(v) => match &b[*v] {
                            Some(c) => {
                                if *c != t[i] {
                                    ok = false;
                                    break;
                                }
                            }
                            None => {
                                b[*v] = Some(t[i].clone());
                                newly.push(*v);
                            }
                        },
                    }
                }
                if ok {
                    solve(ctx, rest, b, emit)?;
                }
                for v in newly {
                    b[v] = None;
                }
            }
            Ok(())
        }
        Step::NotExists { pred, args } => {
            let exists = if args.iter().all(|s| value(s, b).is_some()) {
                let t: Tuple = args.iter().map(|s| value(s, b).unwrap().clone()).collect();
                ctx.db.contains(pred, &t)
            } else {
                // wildcard positions: existential check by scanning
                let sub = Ctx {
                    db: ctx.db,
                    delta: None,
                };
                let mut found = false;
                let probe = [Step::Scan {
                    pred: pred.clone(),
                    args: args.clone(),
                    body_pos: usize::MAX,
                }];
                let mut scratch = b.clone();
                solve(&sub, &probe, &mut scratch, &mut |_| {
                    found = true;
                    Ok(())
                })?;
                found
            };
            if exists {
                Ok(())
            } else {
                solve(ctx, rest, b, emit)
            }
        }
        Step::Compare { lhs, op, rhs } => {
            match (value(lhs, b).cloned(), value(rhs, b).cloned()) {
                (Some(x), Some(y)) => {
                    if compare(&x, *op, &y)? {
                        solve(ctx, rest, b, emit)?;
                    }
                }
                (Some(x), None) | (None, Some(x)) => {
                    // `=` with one free side binds it
                    let free = match (lhs, rhs) {
                        (Slot::Var(v), _) if b[*v].is_none() => *v,
                        (_, Slot::Var(v)) => *v,
                        _ => unreachable!(),
                    };
                    b[free] = Some(x);
                    solve(ctx, rest, b, emit)?;
                    b[free] = None;
                }
                (None, None) => unreachable!("planner guarantees a bound side"),
            }
            Ok(())
        }
        Step::Aggregate {
            kind,
            vars,
            body,
            result,
        } => {
            let sub = Ctx {
                db: ctx.db,
                delta: None,
            };
            let mut group: BTreeSet<Vec<Constant>> = BTreeSet::new();
            let mut scratch = b.clone();
            solve(&sub, body, &mut scratch, &mut |bb| {
                group.insert(vars.iter().map(|v| bb[*v].clone().expect("bound")).collect());
                Ok(())
            })?;
            if group.is_empty() {
                return Ok(());
            }
            let agg = match kind {
                AggKind::Count => Constant::num(group.len() as f64),
                _ => {
                    let mut vals = Vec::with_capacity(group.len());
                    for t in &group {
                        match t[0].as_f64() {
                            Some(x) => vals.push(x),
                            None => {
                                return Err(EvalError::TypeMismatch(format!(
                                    "{} over non-numeric value `{}`",
                                    kind.name(),
                                    t[0]
                                )))
                            }
                        }
                    }
                    let v = match kind {
                        AggKind::Sum => vals.iter().sum(),
                        AggKind::Min => vals.iter().copied().fold(f64::INFINITY, f64::min),
                        AggKind::Max => vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                        AggKind::Count => unreachable!(),
                    };
                    Constant::num(v)
                }
            };
            b[*result] = Some(agg);
            solve(ctx, rest, b, emit)?;
            b[*result] = None;
            Ok(())
        }
    }
}

fn fire(rule: &CompiledRule, ctx: &Ctx<'_>, out: &mut Vec<Tuple>) -> Result<(), EvalError> {
    let mut b = vec![None; rule.nvars];
    solve(ctx, &rule.steps, &mut b, &mut |bb| {
        let t: Tuple = rule
            .head
            .iter()
            .map(|s| value(s, bb).cloned().expect("range restricted"))
            .collect();
        out.push(t);
        Ok(())
    })
}

/// Minimal model of `rules` over `facts`; returns the atoms of rule-head
/// predicates (including head atoms already present in `facts`).
pub fn evaluate_program(rules: &[Rule], facts: &AtomSet) -> Result<AtomSet, EvalError> {
    let strata = stratify(rules)?;
    let mut db = Db::default();
    for a in facts {
        db.insert(&a.predicate, a.args.clone());
    }
    for stratum in &strata {
        let compiled: Vec<CompiledRule> = stratum.rules.iter().map(compile).collect::<Result<_, _>>()?;
        // naive first round over the full database
        let mut delta: HashMap<Arc<str>, Relation> = HashMap::new();
        for r in &compiled {
            let mut out = Vec::new();
            fire(r, &Ctx { db: &db, delta: None }, &mut out)?;
            for t in out {
                if !db.contains(&r.head_pred, &t) {
                    delta.entry(r.head_pred.clone()).or_default().insert(t);
                }
            }
        }
        // semi-naive rounds: one body literal reads the delta at a time
        while !delta.is_empty() {
            for (p, rel) in &delta {
                for t in &rel.tuples {
                    db.insert(p, t.clone());
                }
            }
            let mut next: HashMap<Arc<str>, Relation> = HashMap::new();
            for r in &compiled {
                for (pos, predicate) in &r.positives {
                    let Some(d) = delta.get(predicate) else { continue };
                    let mut out = Vec::new();
                    fire(
                        r,
                        &Ctx {
                            db: &db,
                            delta: Some((*pos, d)),
                        },
                        &mut out,
                    )?;
                    for t in out {
                        if !db.contains(&r.head_pred, &t) {
                            next.entry(r.head_pred.clone()).or_default().insert(t);
                        }
                    }
                }
            }
            delta = next;
        }
    }
    let heads: BTreeSet<&Arc<str>> = rules.iter().map(|r| &r.head.predicate).collect();
    let mut out = AtomSet::new();
    for h in heads {
        if let Some(rel) = db.rels.get(h) {
            for t in &rel.tuples {
                out.insert(Atom {
                    predicate: h.clone(),
                    args: t.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Derive every intensional (and auxiliary) atom of `schema` from the
/// extensional atoms of one interpretation.
pub fn evaluate_intensional(schema: &Schema, extensional: &AtomSet) -> Result<AtomSet, EvalError> {
    for a in extensional {
        if let Some(sig) = schema.signature(&a.predicate) {
            if sig.columns.len() != a.arity() {
                return Err(EvalError::TypeMismatch(format!(
                    "`{a}` has arity {}, signature `{}` declares {}",
                    a.arity(),
                    sig.name,
                    sig.columns.len()
                )));
            }
        }
    }
    let rules = schema.all_rules();
    let mut derived = evaluate_program(&rules, extensional)?;
    for a in &derived {
        if let Some(sig) = schema.signature(&a.predicate) {
            if sig.columns.len() != a.arity() {
                return Err(EvalError::TypeMismatch(format!(
                    "derived `{a}` does not match signature `{}`",
                    sig.name
                )));
            }
        }
    }
    derived.retain(|a| !extensional.contains(a));
    Ok(derived)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::parse_rules;

    fn facts(src: &str) -> AtomSet {
        parse_rules(src)
            .unwrap()
            .into_iter()
            .map(|r| Atom {
                predicate: r.head.predicate.clone(),
                args: r
                    .head
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Const(c) => c.clone(),
                        Term::Var(_) => panic!("non-ground fact"),
                    })
                    .collect(),
            })
            .collect()
    }

    #[test]
    fn transitive_closure() {
        let rules = parse_rules("path(X,Y) :- edge(X,Y).\npath(X,Z) :- path(X,Y), edge(Y,Z).").unwrap();
        let db = facts("edge(a,b). edge(b,c). edge(c,d).");
        let out = evaluate_program(&rules, &db).unwrap();
        assert_eq!(out.len(), 6);
        assert!(out.contains(&Atom::parse_args("path", &["a", "d"])));
    }

    #[test]
    fn negation_and_comparison() {
        let rules = parse_rules(
            "atm(A,E) :- a(A,E), \\+(E = h).\nlonely(X) :- node(X), \\+ edge(X,_).\nbig(X) :- w(X,V), V >= 2.",
        )
        .unwrap();
        let db = facts("a(a1,c). a(a2,h). node(n1). node(n2). edge(n1,n2). w(p,1). w(q,2.5).");
        let out = evaluate_program(&rules, &db).unwrap();
        assert!(out.contains(&Atom::parse_args("atm", &["a1", "c"])));
        assert!(!out.contains(&Atom::parse_args("atm", &["a2", "h"])));
        assert!(out.contains(&Atom::parse_args("lonely", &["n2"])));
        assert!(!out.contains(&Atom::parse_args("lonely", &["n1"])));
        assert!(out.contains(&Atom::parse_args("big", &["q"])));
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn aggregates() {
        let rules = parse_rules(
            "deg(X,N) :- node(X), N = count { Y : edge(X,Y) }.\n\
             tot(S) :- S = sum { V, K : w(K,V) }.\n\
             lo(M) :- M = min { V, K : w(K,V) }.\n\
             hi(M) :- M = max { V, K : w(K,V) }.",
        )
        .unwrap();
        let db = facts("node(a). node(b). edge(a,b). edge(a,c). w(p,1). w(q,2.5). w(r,1).");
        let out = evaluate_program(&rules, &db).unwrap();
        assert!(out.contains(&Atom::parse_args("deg", &["a", "2"])));
        // empty group: no atom for b
        assert!(!out
            .iter()
            .any(|a| &*a.predicate == "deg" && a.args[0] == Constant::sym("b")));
        assert!(out.contains(&Atom::parse_args("tot", &["4.5"])));
        assert!(out.contains(&Atom::parse_args("lo", &["1"])));
        assert!(out.contains(&Atom::parse_args("hi", &["2.5"])));
    }

    #[test]
    fn mixed_kind_comparison_is_an_error() {
        let rules = parse_rules("p(X) :- q(X), X < 3.").unwrap();
        let db = facts("q(abc).");
        assert!(matches!(evaluate_program(&rules, &db), Err(EvalError::TypeMismatch(_))));
    }

    #[test]
    fn unsafe_rule_rejected() {
        let rules = parse_rules("p(X,Y) :- q(X).").unwrap();
        assert!(matches!(
            evaluate_program(&rules, &AtomSet::new()),
            Err(EvalError::NotRangeRestricted { .. })
        ));
        let rules = parse_rules("p(X) :- q(X), \\+ r(X, Y), s(Y).").unwrap();
        // Y is bound by s(Y), so the negation waits for it
        assert!(evaluate_program(&rules, &AtomSet::new()).is_ok());
    }

    #[test]
    fn empty_database_empty_model() {
        let rules = parse_rules("p(X) :- q(X).").unwrap();
        assert!(evaluate_program(&rules, &AtomSet::new()).unwrap().is_empty());
    }

    #[test]
    fn ground_facts_in_rules() {
        let rules = parse_rules("bond_type(1, single).\nbnd(A,B,T) :- b(A,B,N), bond_type(N,T).").unwrap();
        let db = facts("b(x,y,1).");
        let out = evaluate_program(&rules, &db).unwrap();
        assert!(out.contains(&Atom::parse_args("bnd", &["x", "y", "single"])));
    }
}
