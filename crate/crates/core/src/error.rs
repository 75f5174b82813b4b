use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the analysis kernels can report.
///
/// The CLI prints [`Error::name`] verbatim, so variant names are part of the
/// public contract.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("{0}")]
    InvariantViolation(String),
    #[error("expected 20 rows, found {0}")]
    WrongRowCount(usize),
    #[error("season {season} has no {column} column")]
    MissingColumn { season: String, column: &'static str },
    #[error("unknown season {0}")]
    UnknownSeason(String),
    #[error("values sum to zero")]
    ZeroTotal,
    #[error("mean is not positive ({0})")]
    NonPositiveTotal(f64),
    #[error("input has no spread")]
    DegenerateRange,
    #[error("densities are evaluated on different grids")]
    GridMismatch,
    #[error("column {0} is constant")]
    DegenerateColumn(&'static str),
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("no convergence after {0} sweeps")]
    NoConvergence(usize),
    #[error("nothing to plot")]
    EmptySeries,
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::MalformedRow { .. } => "MalformedRow",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::WrongRowCount(_) => "WrongRowCount",
            Error::MissingColumn { .. } => "MissingColumn",
            Error::UnknownSeason(_) => "UnknownSeason",
            Error::ZeroTotal => "ZeroTotal",
            Error::NonPositiveTotal(_) => "NonPositiveTotal",
            Error::DegenerateRange => "DegenerateRange",
            Error::GridMismatch => "GridMismatch",
            Error::DegenerateColumn(_) => "DegenerateColumn",
            Error::NotSymmetric(_) => "NotSymmetric",
            Error::NoConvergence(_) => "NoConvergence",
            Error::EmptySeries => "EmptySeries",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
