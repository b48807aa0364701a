use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("probability {value} at index {index} lies outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("simplex needs at least 2 outcomes, got {0}")]
    BadDimension(usize),
    #[error("point violates constraint set `{label}` (residual {residual:e})")]
    InfeasiblePoint { label: String, residual: f64 },
    #[error("function is not evaluable at {0:?}")]
    DomainError(Vec<f64>),
    #[error("bad direction: {0}")]
    BadDirection(String),
    #[error("bad epsilon ladder: {0}")]
    BadLadder(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("a marginal variance is zero")]
    DegenerateMarginal,
    #[error("no observations")]
    EmptyData,
    #[error("r+(p, q, rho) is singular at p = {0}")]
    SingularP(f64),
    #[error("rho = 0 makes the whole square permissible")]
    SingularRho,
    #[error("rho = {0} is not one of -1, 0, 1")]
    UnsupportedRho(f64),
    #[error("optimizer did not converge at rho = {rho}: grid {grid} vs refined {refined}")]
    ConvergenceFailure { rho: f64, grid: f64, refined: f64 },
}
