use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use relkit_core::dataset::{build_slices, Dataset, Job, PropertyKinds};
use relkit_core::eval::{run_cv, CvOptions, FoldPlan};
use relkit_core::graph::{adjacency_dump, export_dot, graphicalize};
use relkit_core::kernel::{KernelConfig, MatchKind, TupleMode};
use relkit_core::learn::{
    assemble_cases, read_bundle, task_units, train as fit, write_bundle, AssembleOptions, Loss, ModelBundle,
    TrainConfig,
};
use relkit_core::schema::{parse_domain, parse_domain_unchecked, validate_schema, Schema, Severity};
use relkit_core::synth::{planted_facts, PlantedConfig, PLANTED_DOMAIN};

use crate::config::ConfigFile;
use crate::error::CliError;
use crate::{DataArgs, KernelArgs, PlanArgs, TargetArgs, TrainArgs};

fn required(cfg: &ConfigFile, flag: &Option<PathBuf>, key: &str) -> Result<PathBuf, CliError> {
    cfg.pick(flag.clone(), key)?
        .ok_or_else(|| CliError::Usage(format!("missing --{key}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Runtime(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_schema(cfg: &ConfigFile, data: &DataArgs) -> Result<Schema, CliError> {
    let path = required(cfg, &data.domain, "domain")?;
    Ok(parse_domain(&read(&path)?)?)
}

fn load(cfg: &ConfigFile, data: &DataArgs) -> Result<(Schema, Dataset), CliError> {
    let schema = load_schema(cfg, data)?;
    let facts = required(cfg, &data.facts, "facts")?;
    let ds = Dataset::load(&facts, &schema)?;
    Ok((schema, ds))
}

fn targets(cfg: &ConfigFile, t: &TargetArgs) -> Result<Vec<String>, CliError> {
    let names = cfg.list(&t.targets, "target");
    if names.is_empty() {
        return Err(CliError::Usage("missing --target".into()));
    }
    Ok(names)
}

fn job(cfg: &ConfigFile, schema: &Schema, kinds: &PropertyKinds, t: &TargetArgs) -> Result<Job, CliError> {
    let names = targets(cfg, t)?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(Job::new(schema, &refs, kinds)?)
}

fn assemble_options(cfg: &ConfigFile, t: &TargetArgs, seed: u64) -> Result<AssembleOptions, CliError> {
    Ok(AssembleOptions {
        max_negatives: cfg.pick(t.max_negatives, "max-negatives")?,
        seed,
    })
}

/// Mark kernel-point signatures on the schema; returns whether any are set.
fn kernel_points(cfg: &ConfigFile, schema: &mut Schema, k: &KernelArgs) -> Result<bool, CliError> {
    let names = cfg.list(&k.kernel_points, "kernel-points");
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    schema.set_kernel_points(&refs).map_err(CliError::Usage)?;
    Ok(!names.is_empty())
}

fn kernel_config(
    cfg: &ConfigFile,
    k: &KernelArgs,
    kinds: &PropertyKinds,
    points: bool,
) -> Result<KernelConfig, CliError> {
    let mut kc = KernelConfig::default();
    if let Some(r) = cfg.pick(k.radius, "radius")? {
        kc.max_radius = r;
    }
    if let Some(d) = cfg.pick(k.distance, "distance")? {
        kc.max_distance = d;
    }
    if let Some(m) = cfg.pick(k.match_kind.clone(), "match")? {
        kc.match_kind = m.parse::<MatchKind>().map_err(CliError::Usage)?;
    }
    if let Some(b) = cfg.pick(k.hash_bits, "hash-bits")? {
        kc.hash_bits = b;
    }
    kc.tuple_mode = TupleMode::from_kinds(kinds);
    kc.use_kernel_points = points;
    kc.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(kc)
}

fn train_config(cfg: &ConfigFile, t: &TrainArgs) -> Result<TrainConfig, CliError> {
    let mut tc = TrainConfig::default();
    if let Some(l) = cfg.pick(t.loss.clone(), "loss")? {
        tc.loss = l.parse::<Loss>().map_err(CliError::Usage)?;
    }
    if let Some(e) = cfg.pick(t.epochs, "epochs")? {
        tc.epochs = e;
    }
    if let Some(e) = cfg.pick(t.eta, "eta")? {
        tc.eta0 = e;
    }
    if let Some(l) = cfg.pick(t.lambda, "lambda")? {
        tc.lambda = l;
    }
    if let Some(s) = cfg.pick(t.seed, "seed")? {
        tc.seed = s;
    }
    tc.validate().map_err(CliError::from)?;
    Ok(tc)
}

pub fn check(cfg: &ConfigFile, data: &DataArgs) -> Result<(), CliError> {
    let path = required(cfg, &data.domain, "domain")?;
    let schema = parse_domain_unchecked(&read(&path)?)?;
    let diags = validate_schema(&schema);
    for d in &diags {
        eprintln!("{d}");
    }
    if let Some(d) = diags.iter().find(|d| d.severity == Severity::Error) {
        return Err(CliError::Usage(format!("domain: {}", d.message)));
    }
    let mut summary = format!("domain: {} signature(s)\n", schema.signatures().len());
    if let Some(facts) = cfg.pick(data.facts.clone(), "facts")? {
        let ds = Dataset::load(&facts, &schema)?;
        let mut atoms = 0;
        for i in &ds.interpretations {
            let g = graphicalize(&schema, &ds.kinds, &i.atoms)?;
            atoms += i.atoms.len();
            let _ = writeln!(
                summary,
                "interpretation {}: {} atoms, {} entity and {} relation vertices, {} edges",
                i.id,
                i.atoms.len(),
                g.entity_count(),
                g.relation_count(),
                g.edges().len()
            );
        }
        let _ = writeln!(
            summary,
            "facts: {} interpretation(s), {atoms} atoms",
            ds.interpretations.len()
        );
    }
    write(None, &summary)
}

pub fn derive(cfg: &ConfigFile, data: &DataArgs, out: Option<&Path>) -> Result<(), CliError> {
    let (_, ds) = load(cfg, data)?;
    let text: String = ds.interpretations.iter().map(|i| i.to_string()).collect();
    write(out, &text)
}

pub fn graph(cfg: &ConfigFile, data: &DataArgs, dot: Option<&Path>) -> Result<(), CliError> {
    let (schema, ds) = load(cfg, data)?;
    let mut graphs = Vec::new();
    for i in &ds.interpretations {
        graphs.push((i.id.clone(), graphicalize(&schema, &ds.kinds, &i.atoms)?));
    }
    match dot {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
            for (id, g) in &graphs {
                write(Some(&dir.join(format!("{id}.dot"))), &export_dot(g))?;
            }
            Ok(())
        }
        None => {
            let mut text = String::new();
            for (id, g) in &graphs {
                let _ = writeln!(text, "# {id}");
                text.push_str(&adjacency_dump(g));
            }
            write(None, &text)
        }
    }
}

pub fn featurize(
    cfg: &ConfigFile,
    data: &DataArgs,
    t: &TargetArgs,
    k: &KernelArgs,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let (mut schema, ds) = load(cfg, data)?;
    let points = kernel_points(cfg, &mut schema, k)?;
    let kc = kernel_config(cfg, k, &ds.kinds, points)?;
    let job = job(cfg, &schema, &ds.kinds, t)?;
    let opts = assemble_options(cfg, t, 0)?;
    let mut text = String::new();
    for unit in task_units(&schema, &job, &ds.kinds, &ds.interpretations) {
        for c in assemble_cases(&schema, &job, &unit, &ds.interpretations, &ds.kinds, &kc, &opts)? {
            text.push_str(&c.features.to_svm_line(&c.label.to_string()));
            text.push('\n');
        }
    }
    write(out, &text)
}

pub fn train(
    cfg: &ConfigFile,
    data: &DataArgs,
    t: &TargetArgs,
    k: &KernelArgs,
    tr: &TrainArgs,
    out: &Path,
) -> Result<(), CliError> {
    let (mut schema, ds) = load(cfg, data)?;
    let points = kernel_points(cfg, &mut schema, k)?;
    let kc = kernel_config(cfg, k, &ds.kinds, points)?;
    let tc = train_config(cfg, tr)?;
    let job = job(cfg, &schema, &ds.kinds, t)?;
    let opts = assemble_options(cfg, t, tc.seed)?;
    let mut bundle = ModelBundle { models: Vec::new() };
    for unit in task_units(&schema, &job, &ds.kinds, &ds.interpretations) {
        let cases = assemble_cases(&schema, &job, &unit, &ds.interpretations, &ds.kinds, &kc, &opts)?;
        let data: Vec<_> = cases.into_iter().map(|c| (c.features, c.label)).collect();
        let model = fit(&data, unit.task.clone(), &kc, &tc)?;
        eprintln!("trained `{}` on {} cases", unit.name, data.len());
        bundle.models.push((unit.name, model));
    }
    write(Some(out), &write_bundle(&bundle))
}

pub fn predict(
    cfg: &ConfigFile,
    data: &DataArgs,
    t: &TargetArgs,
    k: &KernelArgs,
    model: &Path,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let bundle = read_bundle(&read(model)?)?;
    let (mut schema, ds) = load(cfg, data)?;
    let points = kernel_points(cfg, &mut schema, k)?;
    let job = job(cfg, &schema, &ds.kinds, t)?;
    let requested = if k.given() || points {
        Some(kernel_config(cfg, k, &ds.kinds, points)?)
    } else {
        None
    };
    let mut text = String::new();
    for mut unit in task_units(&schema, &job, &ds.kinds, &ds.interpretations) {
        let m = bundle
            .get(&unit.name)
            .ok_or_else(|| CliError::Usage(format!("model file has no model for `{}`", unit.name)))?;
        if let Some(kc) = &requested {
            m.check_kernel(kc)?;
        }
        if m.kernel.use_kernel_points && !points {
            return Err(CliError::Usage("model uses kernel points; pass --kernel-points".into()));
        }
        unit.task = m.task.clone();
        let opts = assemble_options(cfg, t, m.train.seed)?;
        for c in assemble_cases(&schema, &job, &unit, &ds.interpretations, &ds.kinds, &m.kernel, &opts)? {
            let p = m.predict(&c.features);
            let _ = writeln!(text, "{} {:?} {}", c.id, p.score, p.label);
        }
    }
    write(out, &text)
}

pub struct RunSpec {
    pub data: DataArgs,
    pub target: TargetArgs,
    pub kernel: KernelArgs,
    pub train: TrainArgs,
    pub plan: PlanArgs,
}

fn fold_plan(cfg: &ConfigFile, schema: &Schema, ds: &Dataset, p: &PlanArgs, seed: u64) -> Result<FoldPlan, CliError> {
    let ids: Vec<Arc<str>> = ds.interpretations.iter().map(|i| i.id.clone()).collect();
    let folds = cfg.pick(p.folds, "folds")?;
    let loo = cfg.flag(p.loo, "loo")?;
    let slice = cfg.pick(p.slice_key.clone(), "slice-key")?;
    let chosen = usize::from(folds.is_some()) + usize::from(loo) + usize::from(slice.is_some());
    if chosen > 1 {
        return Err(CliError::Usage("use only one of --folds, --loo and --slice-key".into()));
    }
    if let Some(key) = slice {
        let (rel, col) = key
            .split_once('.')
            .ok_or_else(|| CliError::Usage(format!("--slice-key `{key}` must be relation.column")))?;
        let interp = match cfg.pick(p.slice_interpretation.clone(), "slice-interpretation")? {
            Some(id) => ds
                .get(&id)
                .ok_or_else(|| CliError::Usage(format!("no interpretation `{id}`")))?,
            None if ds.interpretations.len() == 1 => &ds.interpretations[0],
            None => {
                return Err(CliError::Usage(
                    "several interpretations; pass --slice-interpretation".into(),
                ))
            }
        };
        let slices = build_slices(interp, schema, rel, col)?;
        let width = cfg.pick(p.frame, "frame")?.unwrap_or(2);
        return Ok(FoldPlan::slice_forward(&interp.id, &slices, width)?);
    }
    if loo {
        return Ok(FoldPlan::leave_one_out(&ids)?);
    }
    let k = folds.unwrap_or(10.min(ids.len()));
    let reps = cfg.pick(p.repetitions, "repetitions")?.unwrap_or(1);
    Ok(FoldPlan::k_fold(&ids, k, reps, seed)?)
}

pub fn evaluate(
    cfg: &ConfigFile,
    spec: &RunSpec,
    out: Option<&Path>,
    predictions: Option<&Path>,
) -> Result<(), CliError> {
    let (mut schema, ds) = load(cfg, &spec.data)?;
    let points = kernel_points(cfg, &mut schema, &spec.kernel)?;
    let kc = kernel_config(cfg, &spec.kernel, &ds.kinds, points)?;
    let tc = train_config(cfg, &spec.train)?;
    let job = job(cfg, &schema, &ds.kinds, &spec.target)?;
    let plan = fold_plan(cfg, &schema, &ds, &spec.plan, tc.seed)?;
    let opts = CvOptions {
        assemble: assemble_options(cfg, &spec.target, tc.seed)?,
    };
    let report = run_cv(&schema, &ds, &job, &kc, &tc, &plan, &opts)?;
    if let Some(p) = predictions {
        write(Some(p), &report.predictions_text())?;
    }
    if let Some(o) = out {
        write(Some(o), &report.to_machine())?;
    }
    write(None, &report.to_text())
}

pub fn synth(domain_out: &Path, facts_out: &Path, interpretations: usize, seed: u64) -> Result<(), CliError> {
    let cfg = PlantedConfig {
        interpretations,
        seed,
        ..PlantedConfig::default()
    };
    write(Some(domain_out), PLANTED_DOMAIN)?;
    write(Some(facts_out), &planted_facts(&cfg))
}
