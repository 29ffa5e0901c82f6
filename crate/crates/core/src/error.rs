use alloc::string::String;

/// Errors produced by the interpolation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("Kadec condition violated: amplitude {amplitude} must be below 1/4")]
    KadecViolation { amplitude: f64 },
    #[error("sites are not strictly increasing at window offset {index}")]
    NotIncreasing { index: usize },
    #[error("window of {len} sites is too small (need at least {needed})")]
    WindowTooSmall { len: usize, needed: usize },
    #[error("window of {len} sites exceeds the dense-solve cap {cap}")]
    WindowTooLarge { len: usize, cap: usize },
    #[error("scale parameter h = {0} must lie in (0, 1]")]
    BadH(f64),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("band window J must be at least 1")]
    BadWindow,
    #[error("a regularity sweep needs at least two parameter values")]
    BadSweep,
    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),
    #[error("collocation system is singular")]
    SingularSystem,
    #[error("operation requires a gaussian kernel")]
    UnsupportedKernel,
    #[error("order {k} exceeds the smoothness class {k_max} of {id}")]
    SmoothnessExceeded { id: &'static str, k: usize, k_max: usize },
    #[error("spectral tail not converged: remainder {remainder:e} vs head {head:e}")]
    TailNotConverged { remainder: f64, head: f64 },
    #[error("samples do not decay at the grid ends (end magnitude {end:e}, peak {peak:e})")]
    BoundaryLeakage { end: f64, peak: f64 },
    #[error("{needed} sites needed to cover the padded interval, cap is {cap}")]
    CoverageError { needed: usize, cap: usize },
    #[error("need at least {needed} trusted points, have {have}")]
    InsufficientData { needed: usize, have: usize },
    #[error("errors must be positive for a log-log fit (found {0})")]
    NonPositiveError(f64),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
