use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid oscillator parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature failed to reach relative tolerance {tol:e} (estimated error {estimate:e}) for {what}")]
    Quadrature {
        what: String,
        tol: f64,
        estimate: f64,
    },

    #[error("{solver} did not converge after {iterations} iterations (last residual {residual:e})")]
    NonConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("singular denominator 1 - alpha_1 (m - 1) / 2 = {0:e} in the frequency recursion")]
    SingularDenominator(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
