use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the routine is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The evaluation point sits on a degeneracy (vanishing denominator,
    /// near-zero of the Airy function, ...).
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    /// A fractional power would have to be taken on its branch cut.
    #[error("branch ambiguity: {0}")]
    Branch(String),

    /// Adaptive quadrature ran out of budget. The best estimate so far is
    /// attached.
    #[error("quadrature did not converge after {panels} panels: best estimate {re:e}{im:+e}i, error {error:e}")]
    NonConvergence {
        re: f64,
        im: f64,
        error: f64,
        panels: usize,
    },

    /// The integrand grows along a rotated contour.
    #[error("contour error: {0}")]
    Contour(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
