use thiserror::Error;

/// Errors raised anywhere in the extraction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("too many dominant normals: {0} (at most 254 fit in an 8-bit label)")]
    TooManyNormals(usize),

    #[error("open boundary: walk from point {start} could not close (stuck at point {stuck})")]
    OpenBoundary { start: usize, stuck: usize },

    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Wraps the error with the name of the pipeline stage that raised it.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
