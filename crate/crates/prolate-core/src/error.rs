use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument x={x} outside [-1,1] (tolerance 1e-12)")]
    OutsideInterval { x: f64 },
    #[error("argument must be positive, got {x}")]
    NonPositive { x: f64 },
    #[error("quadrature order {m} outside supported range 1..=10000")]
    QuadratureOrder { m: usize },
    #[error("tridiagonal eigensolver failed to converge at index {index}")]
    EigenConvergence { index: usize },
    #[error("Legendre truncation cap reached (K={k}) before tail-mass tolerance was met")]
    TruncationCap { k: usize },
    #[error("mode index {n} exceeds basis n_max={n_max}")]
    IndexOutOfRange { n: usize, n_max: usize },
    #[error("|mu_{n}| flagged as lost to cancellation; outside evaluation unavailable")]
    LossOfSignificance { n: usize },
    #[error("evaluation at x=0 not supported by the analytic-extension series")]
    ZeroArgument,
    #[error("function kind does not support this operation: {what}")]
    UnsupportedKind { what: String },
    #[error("not enough data points: {what}")]
    Inconclusive { what: String },
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache format: {0}")]
    CacheFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
