use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("grid under-resolved: {nodes} nodes per axis cannot resolve level {kmax} (need at least {needed})")]
    Resolution {
        nodes: usize,
        kmax: usize,
        needed: usize,
    },

    #[error("kernel singularity: |sin 2t| = {value:.3e} below guard {guard:.1e}; use the spectral route")]
    Singularity { value: f64, guard: f64 },

    #[error("z = {re}{im:+}i lies within {dist:.3e} of the spectrum 2N0 + d")]
    SpectralPoint { re: f64, im: f64, dist: f64 },

    #[error("gap violation: distance {dist:.3e} to the nearest integer is below {required:.3e}")]
    GapViolation { dist: f64, required: f64 },

    #[error("time support touches the interval endpoints: {0}")]
    Truncation(String),

    #[error("signal not supported inside the periodic window: {0}")]
    Wraparound(String),

    #[error("all probes were annihilated (zero input norm)")]
    DegenerateProbe,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("callback error: {0}")]
    Callback(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
