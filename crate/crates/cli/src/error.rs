use relkit_core::dataset::DatasetError;
use relkit_core::eval::EvalError;
use relkit_core::graph::GraphError;
use relkit_core::learn::LearnError;
use relkit_core::schema::SchemaError;

/// Failure of a subcommand, carrying its exit code class.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable syntax or facts that violate the schema: exit 1.
    #[error("{0}")]
    Usage(String),
    /// Well-formed input that cannot be processed: exit 2.
    #[error("{0}")]
    Data(String),
    /// Failures while learning, predicting or writing results: exit 3.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Usage(format!("domain: {e}"))
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::Io { .. }
            | DatasetError::Parse { .. }
            | DatasetError::ArityMismatch { .. }
            | DatasetError::DuplicateInterpretation(_) => CliError::Usage(format!("facts: {e}")),
            DatasetError::UnknownTarget(_) | DatasetError::UnsupportedTarget(_) | DatasetError::BadSliceKey(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Usage(format!("facts: {e}"))
    }
}

impl From<LearnError> for CliError {
    fn from(e: LearnError) -> Self {
        match e {
            LearnError::Graph(g) => g.into(),
            LearnError::Dataset(d) => d.into(),
            LearnError::ModelFormat { .. } => CliError::Usage(format!("model: {e}")),
            LearnError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Learn(l) => l.into(),
            EvalError::Dataset(d) => d.into(),
            EvalError::InvalidPlan(_) => CliError::Usage(e.to_string()),
            EvalError::DegenerateLabels => CliError::Runtime(e.to_string()),
        }
    }
}
