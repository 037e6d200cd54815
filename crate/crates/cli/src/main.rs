//! `relkit`: check, derive, graphicalize, featurize, train, predict and
//! evaluate relational learning jobs from the command line.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "relkit", version, about = "Relational learning with graph kernels")]
struct Cli {
    /// Worker threads for per-interpretation and per-fold work.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// `key = value` file supplying defaults for any long flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct DataArgs {
    #[arg(long)]
    pub domain: Option<PathBuf>,
    #[arg(long)]
    pub facts: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct TargetArgs {
    /// Target signature; repeat for several.
    #[arg(long = "target")]
    pub targets: Vec<String>,
    /// Keep at most this many negative link cases per interpretation.
    #[arg(long)]
    pub max_negatives: Option<usize>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct KernelArgs {
    /// Maximum neighborhood radius r*.
    #[arg(long)]
    pub radius: Option<usize>,
    /// Maximum root distance d*.
    #[arg(long)]
    pub distance: Option<usize>,
    /// Neighborhood match: hard or soft.
    #[arg(long = "match")]
    pub match_kind: Option<String>,
    /// Signature whose vertices may be roots; repeat for several.
    #[arg(long = "kernel-points")]
    pub kernel_points: Vec<String>,
    /// Feature index width in bits.
    #[arg(long)]
    pub hash_bits: Option<u32>,
}

impl KernelArgs {
    fn given(&self) -> bool {
        self.radius.is_some() || self.distance.is_some() || self.match_kind.is_some() || self.hash_bits.is_some()
    }
}

#[derive(Args, Debug, Default, Clone)]
pub struct TrainArgs {
    /// hinge, logistic or squared.
    #[arg(long)]
    pub loss: Option<String>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Initial learning rate.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Regularization strength.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct PlanArgs {
    /// k-fold cross-validation over interpretations.
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Leave one interpretation out.
    #[arg(long)]
    pub loo: bool,
    /// Slice-forward evaluation keyed by `relation.column`.
    #[arg(long)]
    pub slice_key: Option<String>,
    /// Interpretation to slice; defaults to the only one.
    #[arg(long)]
    pub slice_interpretation: Option<String>,
    /// Number of slices in a training frame.
    #[arg(long)]
    pub frame: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a domain and fact file.
    Check {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Print interpretations with their intensional atoms.
    Derive {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the graph of every interpretation.
    Graphicalize {
        #[command(flatten)]
        data: DataArgs,
        /// Directory receiving one `<id>.dot` file per interpretation.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Write one sparse feature line per case.
    Featurize {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit one model per task on all interpretations.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        train: TrainArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score the cases of a fact file with a trained model.
    Predict {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate and report metrics.
    Evaluate {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        train: TrainArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Machine-readable `fold metric value` report.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        predictions: Option<PathBuf>,
    },
    /// Write the planted-rule benchmark.
    Synth {
        #[arg(long)]
        domain_out: PathBuf,
        #[arg(long)]
        facts_out: PathBuf,
        #[arg(long, default_value_t = 50)]
        interpretations: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<(), error::CliError> {
    let cfg = match &cli.config {
        Some(p) => config::ConfigFile::load(p)?,
        None => config::ConfigFile::default(),
    };
    if let Some(n) = cfg.pick(cli.jobs, "jobs")? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| error::CliError::Runtime(e.to_string()))?;
    }
    use commands as c;
    match cli.command {
        Command::Check { data } => c::check(&cfg, &data),
        Command::Derive { data, out } => c::derive(&cfg, &data, out.as_deref()),
        Command::Graphicalize { data, dot } => c::graph(&cfg, &data, dot.as_deref()),
        Command::Featurize {
            data,
            target,
            kernel,
            out,
        } => c::featurize(&cfg, &data, &target, &kernel, out.as_deref()),
        Command::Train {
            data,
            target,
            kernel,
            train,
            out,
        } => c::train(&cfg, &data, &target, &kernel, &train, &out),
        Command::Predict {
            data,
            target,
            kernel,
            model,
            out,
        } => c::predict(&cfg, &data, &target, &kernel, &model, out.as_deref()),
        Command::Evaluate {
            data,
            target,
            kernel,
            train,
            plan,
            out,
            predictions,
        } => c::evaluate(
            &cfg,
            &c::RunSpec {
                data,
                target,
                kernel,
                train,
                plan,
            },
            out.as_deref(),
            predictions.as_deref(),
        ),
        Command::Synth {
            domain_out,
            facts_out,
            interpretations,
            seed,
        } => c::synth(&domain_out, &facts_out, interpretations, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("relkit: {e}");
            ExitCode::from(e.code())
        }
    }
}
