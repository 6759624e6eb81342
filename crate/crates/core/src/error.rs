use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unidentifiable data: {0}")]
    Unidentifiable(String),

    #[error("exact computation cap exceeded: m = {m} > cap {cap}")]
    CapExceeded { m: usize, cap: usize },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error(
        "rejection sampler starved: acceptance rate {acceptance:.3e} for tilt {tilt}; \
         use the alternative decomposition Y1*X instead"
    )]
    SamplerStarvation { acceptance: f64, tilt: f64 },

    #[error("insufficient sample size: {0}")]
    InsufficientSample(String),

    #[error("line {line}: {msg}")]
    Input { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
