use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty input: at least one positive count is required")]
    EmptyInput,
    #[error("non-positive entry {0}: message counts must be at least 1")]
    NonPositiveEntry(i64),
    #[error("unbalanced round {round}: {sent} messages sent but {received} received")]
    UnbalancedRound {
        round: String,
        sent: u64,
        received: u64,
    },
    #[error("size budget exceeded: {what} needs {needed}, limit is {limit}")]
    SizeBudgetExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("not a probability distribution: {0}")]
    NotADistribution(String),
    #[error("degenerate system: normalized entropy needs at least 2 users, got {0}")]
    DegenerateSystem(usize),
    #[error("compatibility matrix has no perfect matching; degree is undefined")]
    NoMatching,
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("parse error{}: {msg}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },
    #[error("unknown experiment {0:?} (expected fig1, fig2, fig5, fig6, saturation or ranking)")]
    UnknownExperiment(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn budget(what: &'static str, needed: impl ToString, limit: u64) -> Self {
        Error::SizeBudgetExceeded {
            what,
            needed: needed.to_string(),
            limit,
        }
    }

    pub(crate) fn parse(line: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeBudgetExceeded { .. } => 3,
            Error::Io(_) => 4,
            Error::NoMatching | Error::DegenerateSystem(_) | Error::VariableCountMismatch(..) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line() as usize);
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io.to_string()),
            other => Error::parse(line, format!("{other:?}")),
        }
    }
}
