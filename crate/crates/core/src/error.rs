use thiserror::Error;

/// Errors raised across the library. CLI exit codes are derived from
/// [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point outside model domain")]
    PointOutsideDomain,

    #[error("polydisc not contained in model domain")]
    NotContained,

    #[error("delta must satisfy delta < {limit}, got {delta}")]
    DeltaTooLarge { delta: f64, limit: f64 },

    #[error("truncation order {order} is smaller than division degree {degree}")]
    TruncationTooSmall { order: u32, degree: usize },

    #[error("near-zero-on-boundary: |f| = {value:e} on the contour at base sample {sample}")]
    NearZeroOnBoundary { sample: usize, value: f64 },

    #[error("inconsistent-counts: winding integrals {values:?}")]
    InconsistentCounts { values: Vec<f64> },

    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),

    #[error("precision-insufficient: enclosure radius {radius:e} exceeds tolerance {tol:e}")]
    PrecisionInsufficient { radius: f64, tol: f64 },

    #[error("box-requires-higher-degree: box {index:?} with {points} points admits no hypersurface of degree {degree}")]
    BoxRequiresHigherDegree {
        index: Vec<u64>,
        points: usize,
        degree: u32,
    },

    #[error("tolerance-ambiguous: germ containment inconclusive at {point}")]
    ToleranceAmbiguous { point: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown scenario: {0}")]
    UnknownScenario(String),

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// 2 = configuration, 3 = verdict failure, 4 = numerical precision.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BoxRequiresHigherDegree { .. } | Error::ToleranceAmbiguous { .. } => 3,
            Error::PrecisionInsufficient { .. }
            | Error::NearZeroOnBoundary { .. }
            | Error::InconsistentCounts { .. } => 4,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
            _ => 2,
        }
    }
}
