use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The first-order orbit model no longer applies: `q_l k^2 / h^2` reached 1.
    #[error("model breakdown: epsilon = {epsilon:e} (space quantum too large for this orbit)")]
    ModelBreakdown { epsilon: f64 },

    /// Separation at or below the space quantum.
    #[error("singularity: separation {separation:e} m is not above the space quantum {q_l:e} m")]
    Singularity { separation: f64, q_l: f64 },

    #[error("integrator step size underflowed at theta = {theta} (h = {step:e})")]
    StepFailure { theta: f64, step: f64 },

    #[error("trajectory spans {found} perihelion passage(s), at least 2 are required")]
    InsufficientSpan { found: usize },

    #[error("ingestion error in record {record}: {reason}")]
    Ingest { record: String, reason: String },

    #[error("unknown planet '{0}'")]
    UnknownPlanet(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by the physics (domain, breakdown, singularity,
    /// integrator failure) as opposed to bad input data.
    pub fn is_model_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::ModelBreakdown { .. }
                | Error::Singularity { .. }
                | Error::StepFailure { .. }
                | Error::InsufficientSpan { .. }
        )
    }
}
