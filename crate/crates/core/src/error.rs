use thiserror::Error;

use crate::hyperseries::SeriesEvaluation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("denominator parameter {0} is zero or a negative integer")]
    InvalidDenominatorParam(f64),

    #[error("series diverges for the requested parameters")]
    DivergentSeries,

    /// The term budget ran out before the tolerance was met. The partial sum is attached.
    #[error("series not converged after {} terms (tail bound {:.3e})", partial.terms_used, partial.tail_bound)]
    NotConverged { partial: Box<SeriesEvaluation> },

    #[error("quadrature not converged: error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },

    #[error("elliptic modulus {0} out of range")]
    ModulusOutOfRange(f64),

    #[error("index out of range: S({d}, {alpha})")]
    IndexOutOfRange { d: i64, alpha: i64 },

    #[error("singular input: eta = 1 must go through the dedicated singular routine")]
    SingularInput,

    #[error("finite-difference noise {noise:.3e} exceeds residual scale {scale:.3e}")]
    StencilUnstable { noise: f64, scale: f64 },

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
