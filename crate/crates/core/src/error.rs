use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dense oracle refused {qubits} qubits (limit {limit}); raise FERTAPER_MAX_DENSE_QUBITS to override")]
    SizeGuard { qubits: usize, limit: usize },

    #[error("enumeration too large: {what} needs {needed} entries, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("invalid Hamiltonian: {0}")]
    InvalidHamiltonian(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error(
        "matrix is not {particles}-injective: columns {first:?} and {second:?} share syndrome"
    )]
    InjectivityViolation {
        particles: usize,
        first: Vec<usize>,
        second: Vec<usize>,
    },

    #[error("symmetry group is not reducible to Z-type by single-qubit rotations: {0}")]
    NotZReducible(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("term cannot be assigned to a bin: {0}")]
    Unassignable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    File {
        path: std::path::PathBuf,
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Attaches the file the error came from.
    pub fn in_file(self, path: impl AsRef<std::path::Path>) -> Error {
        Error::File {
            path: path.as_ref().to_path_buf(),
            source: Box::new(self),
        }
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))
}

pub fn write_file(path: &std::path::Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::from(e).in_file(path))
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
