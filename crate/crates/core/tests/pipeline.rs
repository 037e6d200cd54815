//! Library pipeline runs across the job taxonomy.

use std::fmt::Write;
use std::sync::Arc;

use relkit_core::dataset::{build_slices, CaseLevel, Dataset, Job, TaskKind};
use relkit_core::eval::{run_cv, CvOptions, FoldPlan};
use relkit_core::kernel::{KernelConfig, MatchKind, TupleMode};
use relkit_core::learn::{Loss, TrainConfig};
use relkit_core::schema::parse_domain;

/// Small molecules: a nitro group makes a molecule mutagenic.
fn molecules() -> String {
    let mut s = String::new();
    for m in 0..8 {
        let _ = writeln!(s, "interpretation mol{m}.");
        let nitro = m % 2 == 0;
        let _ = writeln!(
            s,
            "a(m{m}c1,c). a(m{m}c2,c). a(m{m}h1,h). a(m{m}x,{}).",
            if nitro { "n" } else { "o" }
        );
        let _ = writeln!(s, "b(m{m}c1,m{m}c2,1). b(m{m}c2,m{m}x,2). b(m{m}c1,m{m}h1,1).");
        let group = if nitro { "nitro" } else { "hydroxyl" };
        let _ = writeln!(s, "sub(m{m}g,{group},1). subat(m{m}g,m{m}x,1). subat(m{m}g,m{m}c2,1).");
        if nitro {
            let _ = writeln!(s, "mutagenic.");
        }
    }
    s
}

#[test]
fn interpretation_classification() {
    let s = parse_domain(include_str!("../fixtures/bursi.domain")).unwrap();
    let ds = Dataset::from_text(&molecules(), &s).unwrap();
    // hydrogens are dropped by the atm rule
    assert_eq!(ds.interpretations[0].atoms_of("atm").count(), 3);
    assert_eq!(ds.interpretations[0].atoms_of("bnd").count(), 2);
    let job = Job::new(&s, &["mutagenic"], &ds.kinds).unwrap();
    assert_eq!(job.targets[0].level, CaseLevel::Interpretation);
    let ids: Vec<Arc<str>> = ds.interpretations.iter().map(|i| i.id.clone()).collect();
    let plan = FoldPlan::leave_one_out(&ids).unwrap();
    let mut k = KernelConfig::new(1, 1, MatchKind::Hard);
    k.tuple_mode = TupleMode::from_kinds(&ds.kinds);
    let r = run_cv(&s, &ds, &job, &k, &TrainConfig::default(), &plan, &CvOptions::default()).unwrap();
    let t = &r.tasks[0];
    assert_eq!(t.folds.len(), 8);
    assert_eq!(t.predictions.len(), 8);
    assert_eq!(t.pooled("accuracy"), Some(1.0));
}

#[test]
fn interpretation_regression() {
    let s = parse_domain(
        "signature atm(id::self, element::property)::extensional.\n\
         signature bond(a@b::atm, b@b::atm)::extensional.\n\
         signature biodegradation(halflife::property)::extensional.",
    )
    .unwrap();
    let mut facts = String::new();
    for m in 0..12 {
        let carbons = 1 + m % 4;
        let _ = writeln!(facts, "interpretation d{m}.\natm(m{m}o,o).");
        for c in 0..carbons {
            let _ = writeln!(facts, "atm(m{m}c{c},c). bond(m{m}o,m{m}c{c}).");
        }
        let _ = writeln!(facts, "biodegradation({}).", 0.5 * carbons as f64);
    }
    let ds = Dataset::from_text(&facts, &s).unwrap();
    let job = Job::new(&s, &["biodegradation"], &ds.kinds).unwrap();
    assert_eq!(job.targets[0].task, TaskKind::Regression);
    let ids: Vec<Arc<str>> = ds.interpretations.iter().map(|i| i.id.clone()).collect();
    let plan = FoldPlan::k_fold(&ids, 3, 1, 2).unwrap();
    let tc = TrainConfig {
        loss: Loss::Squared,
        epochs: 200,
        eta0: 0.05,
        lambda: 1e-6,
        ..TrainConfig::default()
    };
    let k = KernelConfig::new(0, 1, MatchKind::Soft);
    let r = run_cv(&s, &ds, &job, &k, &tc, &plan, &CvOptions::default()).unwrap();
    let t = &r.tasks[0];
    assert_eq!(t.kind, "regression");
    let rmse = t.pooled("rmse").unwrap();
    assert!(rmse.is_finite() && rmse < 1.0, "rmse {rmse}");
    assert!(t.pooled("scc").unwrap() > 0.5);
}

#[test]
fn slice_forward_over_years() {
    let s = parse_domain(
        "signature movie(id::self, year::property, genre::property)::extensional.\n\
         signature actor(id::self)::extensional.\n\
         signature acted_in(a::actor, m::movie)::extensional.\n\
         signature blockbuster(m::movie)::extensional.",
    )
    .unwrap();
    let mut facts = String::from("interpretation imdb.\n");
    for y in 1995..=2005 {
        for m in 0..4 {
            let genre = ["action", "drama"][m % 2];
            let _ = writeln!(facts, "movie(m{y}_{m},{y},{genre}). acted_in(a{m},m{y}_{m}).");
            if m % 2 == 0 {
                let _ = writeln!(facts, "blockbuster(m{y}_{m}).");
            }
        }
    }
    for a in 0..4 {
        let _ = writeln!(facts, "actor(a{a}).");
    }
    let ds = Dataset::from_text(&facts, &s).unwrap();
    let slices = build_slices(&ds.interpretations[0], &s, "movie", "year").unwrap();
    let plan = FoldPlan::slice_forward("imdb", &slices, 2).unwrap();
    let job = Job::new(&s, &["blockbuster"], &ds.kinds).unwrap();
    let r = run_cv(
        &s,
        &ds,
        &job,
        &KernelConfig::default(),
        &TrainConfig::default(),
        &plan,
        &CvOptions::default(),
    )
    .unwrap();
    let names: Vec<&str> = r.tasks[0].folds.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(
        names,
        ["1997", "1998", "1999", "2000", "2001", "2002", "2003", "2004", "2005"]
    );
    assert_eq!(r.tasks[0].pooled("auroc"), Some(1.0));
}

#[test]
fn multiclass_entities_report_contingency() {
    let s = parse_domain(
        "signature person(id::self)::extensional.\n\
         signature course(id::self)::extensional.\n\
         signature teaches(p::person, c::course)::extensional.\n\
         signature takes(p::person, c::course)::extensional.\n\
         signature role(p::person, kind::property)::extensional.",
    )
    .unwrap();
    let mut facts = String::new();
    for g in 0..6 {
        let _ = writeln!(facts, "interpretation g{g}.\ncourse(c{g}).");
        for p in 0..5 {
            let _ = writeln!(facts, "person(p{g}_{p}).");
            if p == 0 {
                let _ = writeln!(facts, "teaches(p{g}_{p},c{g}). role(p{g}_{p},faculty).");
            } else {
                let _ = writeln!(facts, "takes(p{g}_{p},c{g}). role(p{g}_{p},student).");
            }
        }
    }
    let ds = Dataset::from_text(&facts, &s).unwrap();
    let job = Job::new(&s, &["role"], &ds.kinds).unwrap();
    assert_eq!(job.targets[0].task, TaskKind::Multiclass);
    let ids: Vec<Arc<str>> = ds.interpretations.iter().map(|i| i.id.clone()).collect();
    let plan = FoldPlan::k_fold(&ids, 3, 1, 9).unwrap();
    let r = run_cv(
        &s,
        &ds,
        &job,
        &KernelConfig::default(),
        &TrainConfig::default(),
        &plan,
        &CvOptions::default(),
    )
    .unwrap();
    let t = &r.tasks[0];
    let table = t.contingency.as_ref().unwrap();
    assert_eq!(table.classes, ["faculty", "student"]);
    assert_eq!(t.pooled("accuracy"), Some(1.0));
    assert!(r.to_text().contains("faculty"));
}
