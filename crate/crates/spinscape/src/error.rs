use thiserror::Error;

/// Every failure the library can report. Variant names double as the
/// error names printed by the command-line tool.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree {0} appears more than once")]
    DuplicateDegree(u32),
    #[error("weight for degree {degree} must be positive, got {weight}")]
    NonPositiveWeight { degree: u32, weight: f64 },
    #[error("weights sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),
    #[error("no critical weight exists for degree {0}")]
    NoCriticalWeight(u32),
    #[error("operation needs alpha^2 > 0 but the mixture is pure")]
    PureMixture,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("root bracket failed: {0}")]
    BracketFailure(String),
    #[error("dimension {0} is not supported here")]
    UnsupportedDimension(usize),
    #[error("argument {0} lies in the Airy edge region")]
    EdgeRegion(f64),
    #[error("angle {0} is too close to the edge of the oscillatory window")]
    EdgeWindow(f64),
    #[error("class {class} contradicts verdict {verdict}")]
    InconsistentClassification { class: String, verdict: String },
}

impl Error {
    /// Short variant name, as printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DuplicateDegree(_) => "DuplicateDegree",
            Error::NonPositiveWeight { .. } => "NonPositiveWeight",
            Error::NotNormalized(_) => "NotNormalized",
            Error::InvalidMixture(_) => "InvalidMixture",
            Error::NoCriticalWeight(_) => "NoCriticalWeight",
            Error::PureMixture => "PureMixture",
            Error::DomainError(_) => "DomainError",
            Error::BracketFailure(_) => "BracketFailure",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::EdgeRegion(_) => "EdgeRegion",
            Error::EdgeWindow(_) => "EdgeWindow",
            Error::InconsistentClassification { .. } => "InconsistentClassification",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
