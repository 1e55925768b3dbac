use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at argument {0}")]
    Pole(f64),

    #[error("series did not converge within {terms} terms (z = {z})")]
    NonConvergence { terms: usize, z: f64 },

    #[error("invalid series parameters: {0}")]
    InvalidSeries(String),

    #[error("x = {0} lies outside the guarded interval")]
    Domain(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("energy {energy} does not lie in the band ({lower}, {upper})")]
    Band { energy: f64, lower: f64, upper: f64 },

    #[error("energy {energy} collides with eigenvalue E_{level} = {eigenvalue}")]
    Collision {
        energy: f64,
        level: usize,
        eigenvalue: f64,
    },

    #[error("seed function vanishes at x = {0}")]
    Singular(f64),

    #[error("transformation function changes sign near x = {x}")]
    NodeFound { x: f64 },

    #[error("node count inconclusive near x = {0}: touching zero without sign change")]
    Inconclusive(f64),

    #[error("energy {0} coincides with a factorization energy")]
    Degenerate(f64),

    #[error("integral diverges at endpoint {endpoint} (integrand exponent {exponent})")]
    Divergent { endpoint: f64, exponent: f64 },

    #[error("non-finite potential sample at x = {0}")]
    NonFinite(f64),
}

impl Error {
    /// Errors caused by inputs that violate a documented precondition.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Band { .. }
                | Error::Collision { .. }
                | Error::Pole(_)
                | Error::Domain(_)
                | Error::Degenerate(_)
                | Error::InvalidSeries(_)
        )
    }
}
