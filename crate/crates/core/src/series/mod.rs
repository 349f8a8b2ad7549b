//! Polynomials, Laguerre product forms and Gamma utilities.

pub mod form;
pub mod gamma;
pub mod poly;

pub use form::{Expansion, FormClass, LaguerreForm};
pub use gamma::{gamma, gamma_theta, ln_gamma, ln_gamma_complex, ln_gamma_theta, recip_gamma};
pub use poly::Poly;
