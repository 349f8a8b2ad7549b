//! Δ_θ, φ(Δ_θ), the exponential semigroup and its companions.

pub mod delta;
pub mod laguerre;
pub mod rule;
pub mod vandermonde;

pub use delta::{apply_delta, apply_phi_of_delta, exp_delta_closed, q_coefficient, OperatorSpec, Symbol};
pub use laguerre::{laguerre_poly, laguerre_rodrigues};
pub use rule::{operation_rule, ExpFactoredResult};
pub use vandermonde::vandermonde_residual;
