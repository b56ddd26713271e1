use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate threshold probability {p} (must be < 1/2)")]
    DegenerateProbability { p: f64 },

    #[error("rate function vanishes at t = {t}; ratio undefined")]
    ZeroRate { t: f64 },

    #[error("pattern has {v} vertices, limit is {max}")]
    PatternTooLarge { v: usize, max: usize },

    #[error("instance size n = {n} exceeds cap {cap}")]
    InstanceTooLarge { n: usize, cap: usize },

    #[error("invalid delta {0}: must lie in [0, 1)")]
    InvalidDelta(f64),

    #[error("concentration bound requires a Gaussian law, got `{0}`")]
    NotGaussian(String),

    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },

    #[error("report inconsistent: {0}")]
    Report(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
