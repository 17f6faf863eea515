use thiserror::Error;

use crate::families::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters for {family}: {detail}")]
    InvalidParams { family: Family, detail: String },

    #[error("invalid observation window: {0}")]
    InvalidWindow(String),

    /// Truncation at `d` removes essentially all probability mass.
    #[error("degenerate window for {family}: F(d) = {f_d} leaves no mass above the deductible")]
    DegenerateWindow { family: Family, f_d: f64 },

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("insufficient data: {found} uncensored observations, at least {needed} required")]
    InsufficientData { found: usize, needed: usize },

    #[error("percentile matching for {family} found no solution: {detail}")]
    NoSolution { family: Family, detail: String },

    #[error("all criterion values are NA")]
    AllNa,

    #[error("empty input: {0}")]
    Empty(String),

    #[error("simulation study failed: {0}")]
    Study(String),

    #[error("data error at row {row}: {detail}")]
    Data { row: usize, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) | Error::InvalidWindow(_) => 2,
            Error::Data { .. }
            | Error::InvalidSample(_)
            | Error::InsufficientData { .. }
            | Error::Empty(_)
            | Error::Io(_)
            | Error::Csv(_)
            | Error::Json(_) => 3,
            Error::InvalidParams { .. }
            | Error::DegenerateWindow { .. }
            | Error::NoSolution { .. }
            | Error::AllNa
            | Error::Study(_)
            | Error::Numerical(_) => 4,
        }
    }
}
