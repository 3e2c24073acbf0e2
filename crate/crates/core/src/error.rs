use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("field has the wrong representation for this operation: {0}")]
    Representation(&'static str),

    /// A negative-order homogeneous quantity was requested for data whose
    /// zero mode does not vanish.
    #[error("ill-defined quantity: {0}")]
    IllDefined(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no convergence after {iterations} iterations (last change {last_change:.3e}, residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        last_change: f64,
        residual: f64,
        last_iterate: Option<Box<crate::spectral::Field>>,
    },

    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("requested time {0} is not covered by the trace")]
    OutsideTrace(f64),

    #[error("empty trace")]
    EmptyTrace,

    #[error("wrap-around time {wrap:.3} exceeded by requested time {t:.3}")]
    WrapAround { wrap: f64, t: f64 },

    #[error("weight construction failed: {0}")]
    Weight(String),

    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bad checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
