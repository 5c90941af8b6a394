//! Error type shared by every module of the crate.

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument is outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The adaptive quadrature exhausted its subdivision budget before the
    /// error estimate dropped below the requested tolerance.
    #[error(
        "quadrature did not converge: value {value:.6e}, error estimate \
         {error_estimate:.6e} > tolerance {tolerance:.6e} after {subdivisions} subdivisions"
    )]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    /// The fiber map has no positive maximizer for the given coefficients.
    #[error("no mountain-pass geometry on this fiber: {0}")]
    Geometry(String),

    /// A least-squares design matrix is numerically rank deficient.
    #[error("singular least-squares fit: {0}")]
    SingularFit(String),

    /// The Ritz Gram matrix is too ill-conditioned to trust.
    #[error("Gram matrix condition number {cond:.3e} exceeds {limit:.3e}; reduce the basis size")]
    IllConditionedGram { cond: f64, limit: f64 },

    /// A Rayleigh quotient denominator vanished.
    #[error("degenerate denominator in Rayleigh quotient")]
    DegenerateDenominator,

    /// Failure writing a report.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code for the CLI: 1 usage/domain, 2 is reserved for
    /// criterion failures (not an error variant), 3 quadrature or numerical
    /// linear-algebra failure, 4 missing mountain-pass geometry.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Io(_) => 1,
            Error::NonConvergence { .. }
            | Error::SingularFit(_)
            | Error::IllConditionedGram { .. } => 3,
            Error::Geometry(_) | Error::DegenerateDenominator => 4,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
