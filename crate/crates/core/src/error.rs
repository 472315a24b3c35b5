use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what} = {x} outside the available range [{lo}, {hi}]")]
    OutOfRange { what: &'static str, x: f64, lo: f64, hi: f64 },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("integration exceeded {steps} steps")]
    StepBudget { steps: usize },
    #[error("manifold left the quadrant near x = {x}")]
    LeftQuadrant { x: f64 },
    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    Quadrature { estimate: f64, error: f64 },
    #[error("no sign change on [{lo}, {hi}]: f = {f_lo}, {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("{what}: no convergence after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
