use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("degenerate lattice")]
    DegenerateLattice,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("search space of {size} candidates exceeds the bound {bound}")]
    SearchTooLarge { size: u128, bound: u128 },
    #[error("sublattice is not of finite index in the ambient lattice")]
    InfiniteIndex,
    #[error("component {component} of fibre {fibre} is not simple")]
    NonSimpleComponent { fibre: String, component: usize },
    #[error("inconsistent incidence: {0}")]
    Incidence(String),
    #[error("missing incidence data: {0}")]
    MissingIncidence(String),
    #[error("coset enumeration exceeded {0} cosets: possibly infinite or bound too small")]
    CosetBound(usize),
    #[error("inconsistent facts: {0}")]
    InconsistentFacts(String),
    #[error("facts underdetermine row: {0}")]
    Underdetermined(String),
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.line() == 0 {
            return Error::Invalid(e.to_string());
        }
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
