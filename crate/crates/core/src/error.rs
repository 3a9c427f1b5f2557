use std::fmt;
use std::path::PathBuf;

/// Pipeline stage used to tag errors that escape [`crate::pipeline::run_pipeline`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Data,
    Split,
    Fit,
    Select,
    Nsga2,
    Rnsga2,
    BestResponse,
    Bargain,
    Oracle,
    Report,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Data => "data",
            Stage::Split => "split",
            Stage::Fit => "fit",
            Stage::Select => "select",
            Stage::Nsga2 => "nsga2",
            Stage::Rnsga2 => "rnsga2",
            Stage::BestResponse => "best-response",
            Stage::Bargain => "bargain",
            Stage::Oracle => "oracle",
            Stage::Report => "report",
        };
        f.write_str(name)
    }
}

#[derive(Debug)]
pub enum Error {
    /// Missing, unknown or duplicated column.
    Schema(String),
    /// A CSV cell could not be parsed. `row` is the 1-based data row.
    Parse {
        row: usize,
        column: String,
        value: String,
    },
    EmptyInput,
    /// A record violates a field invariant.
    Validation { row: usize, message: String },
    InsufficientData { needed: usize, got: usize },
    Bounds(String),
    DegenerateVariance(String),
    /// R² is undefined because the evaluation targets are constant.
    /// MSE and RMSE are still reported.
    DegenerateR2 { split: String, mse: f64, rmse: f64 },
    Dimension { expected: usize, got: usize },
    Domain(String),
    InvalidParams(String),
    /// An objective returned a non-finite value.
    Evaluation { genome: Vec<f64>, value: f64 },
    /// An individual was used before its objectives were computed.
    Unevaluated(usize),
    DegenerateRange(usize),
    /// No point satisfying the disagreement constraints was found.
    Infeasible { least_violating: Vec<f64>, violation: f64 },
    ModelQuality(Vec<(String, f64)>),
    GridTooLarge { points: f64, limit: f64 },
    Io { path: PathBuf, source: std::io::Error },
    Json(String),
    Staged { stage: Stage, source: Box<Error> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn at(self, stage: Stage) -> Self {
        match self {
            Error::Staged { .. } => self,
            other => Error::Staged {
                stage,
                source: Box::new(other),
            },
        }
    }

    /// The error with any stage tags removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Staged { source, .. } => source.root(),
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Schema(msg) => write!(f, "schema error: {msg}"),
            Error::Parse { row, column, value } => {
                write!(f, "parse error at row {row}, column `{column}`: cannot parse {value:?} as a number")
            }
            Error::EmptyInput => f.write_str("empty input: no data rows"),
            Error::Validation { row, message } => write!(f, "invalid record at row {row}: {message}"),
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need at least {needed} rows, got {got}")
            }
            Error::Bounds(msg) => write!(f, "bounds error: {msg}"),
            Error::DegenerateVariance(col) => write!(f, "column `{col}` has zero variance"),
            Error::DegenerateR2 { split, mse, rmse } => write!(
                f,
                "R² undefined on {split} split (constant target); mse = {mse}, rmse = {rmse}"
            ),
            Error::Dimension { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::Evaluation { genome, value } => {
                write!(f, "objective returned {value} at {genome:?}")
            }
            Error::Unevaluated(idx) => write!(f, "individual {idx} has not been evaluated"),
            Error::DegenerateRange(dim) => {
                write!(f, "ideal and nadir coincide in objective {dim}")
            }
            Error::Infeasible {
                least_violating,
                violation,
            } => write!(
                f,
                "no point meets the disagreement payoffs; least violating {least_violating:?} (violation {violation})"
            ),
            Error::ModelQuality(scores) => {
                f.write_str("too few surrogates pass the quality threshold; test R²:")?;
                for (name, r2) in scores {
                    write!(f, " {name}={r2:.4}")?;
                }
                Ok(())
            }
            Error::GridTooLarge { points, limit } => {
                write!(f, "oracle grid has {points} points, limit is {limit}")
            }
            Error::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Error::Json(msg) => write!(f, "json error: {msg}"),
            Error::Staged { stage, source } => write!(f, "[{stage}] {source}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            Error::Staged { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
