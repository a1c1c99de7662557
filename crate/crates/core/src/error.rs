use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The quantum numbers do not label a bound hydrogenic state.
    #[error("invalid orbital: {0}")]
    InvalidOrbital(String),

    #[error("pole at x = {0}")]
    Pole(f64),

    /// An iterative quadrature exhausted its order ladder without two
    /// successive estimates agreeing.
    #[error(
        "quadrature did not converge for {what}: order {previous_order} gave {previous}, \
         order {order} gave {estimate}"
    )]
    Convergence {
        what: String,
        previous_order: usize,
        previous: f64,
        order: usize,
        estimate: f64,
    },

    /// Two independent oracle routes disagree beyond their tolerance.
    #[error("oracle disagreement for {what}: {first} vs {second}")]
    OracleMismatch { what: String, first: f64, second: f64 },

    /// Adaptive integration hit its refinement limit.
    #[error("integration did not converge: {0}")]
    Integration(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("grid error: {0}")]
    Grid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
