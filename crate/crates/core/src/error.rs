use std::path::PathBuf;

/// Errors raised by the library and the experiment runner.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("axis `{0}` is conditioned on but has not been produced by an earlier factor")]
    DanglingAxis(String),

    #[error("unknown axis `{0}`")]
    UnknownAxis(String),

    #[error("axis sets overlap on `{0}`")]
    OverlappingAxes(String),

    #[error("duplicate axis `{0}`")]
    DuplicateAxis(String),

    #[error("joint tensor would have {cells} cells, above the limit of {limit}")]
    TooLarge { cells: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidModel(Vec<crate::model::Violation>),

    #[error("enumeration cap exceeded: {what} needs {needed} items, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },

    #[error("no encoder strategy satisfies the rate constraint")]
    NoFeasibleEncoder,

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("config parse error in {path}: {message}")]
    ConfigParse { path: PathBuf, message: String },

    #[error("config validation error at `{field}`: {message}")]
    ConfigValidation { field: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short machine-readable tag, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::DanglingAxis(_) => "dangling_axis",
            Error::UnknownAxis(_) => "unknown_axis",
            Error::OverlappingAxes(_) => "overlapping_axes",
            Error::DuplicateAxis(_) => "duplicate_axis",
            Error::TooLarge { .. } => "too_large",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvalidModel(_) => "invalid_model",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::NoFeasibleEncoder => "no_feasible_encoder",
            Error::LinearProgram(_) => "linear_program",
            Error::ConfigParse { .. } => "config_parse",
            Error::ConfigValidation { .. } => "config_validation",
            Error::Io { .. } => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
