//! Operator calculus on spaces of exponential-type entire functions.
//!
//! The central object is Δ_θ = θ d/dz + z d²/dz² and the operators φ(Δ_θ)
//! built from it, in particular the semigroup exp(aΔ_θ). Functions are carried
//! as polynomials or as finite Laguerre product forms C z^l e^{αz} Π(1 + β_j z).
//!
//! Polynomial algebra is generic over [`Scalar`]: use `f64` for floating work
//! and [`Rational`] when identities should hold with zero tolerance.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;

pub mod dd;
pub mod error;
pub mod evolution;
pub mod integral;
pub mod norms;
pub mod operator;
pub mod scalar;
pub mod series;
pub mod verify;
pub mod zeros;

pub use error::{Error, Result};
pub use scalar::{Scalar, ScalarMode};
pub use series::{LaguerreForm, Poly};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type PolyF32 = Poly<f32>;
pub type PolyF64 = Poly<f64>;
pub type PolyQ = Poly<Rational>;
pub type FormF64 = LaguerreForm<f64>;
pub type FormQ = LaguerreForm<Rational>;
pub type OperatorF64 = operator::OperatorSpec<f64>;
pub type OperatorQ = operator::OperatorSpec<Rational>;
