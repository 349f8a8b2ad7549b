//! Kernel functions and the quadrature realisation of exp(aΔ_θ).

pub mod kernel;
pub mod quadrature;
pub mod transform;

pub use kernel::{appell_partial_sum, w_theta, Kernel};
pub use quadrature::{gauss_laguerre_rule, moment_relative_error, QuadratureRule};
pub use transform::{exp_delta_integral, exp_delta_l_minus, ExpIntegral, Integrand, IntegralValue, DEFAULT_ORDER};
