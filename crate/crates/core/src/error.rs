use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the operator calculus.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("pole of Gamma at theta + m = {0}")]
    GammaPole(f64),
    #[error("outside the operation-rule domain: u*a = {0} must be < 1")]
    OutsideOperationRule(f64),
    #[error("outside the composition domain: a*b = {0} must be < 1")]
    OutsideComposition(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("ill-conditioned evaluation: {0}")]
    IllConditioned(String),
    #[error("root finder did not converge after {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        partial: Vec<Complex64>,
    },
    #[error("hypothesis violated at member {index}: {condition}")]
    Hypothesis { index: usize, condition: String },
    #[error("norm is infinite: c = {c} must exceed alpha = {alpha} (outside the A_alpha range)")]
    OutsideRange { c: f64, alpha: f64 },
    #[error("singular evaluation point: {0}")]
    Singular(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
