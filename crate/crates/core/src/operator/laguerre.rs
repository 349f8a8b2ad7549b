//! Laguerre polynomials L̃_n^{(θ−1)} = (−1)^n n! L_n^{(θ−1)} by two routes.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Poly;

use super::delta::exp_delta_closed;

/// exp(−Δ_θ) z^n.
pub fn laguerre_poly<T: Scalar>(n: usize, theta: &T) -> Poly<T> {
    exp_delta_closed(&-T::one(), theta, &Poly::monomial(n, T::one()))
}

/// (−1)^n z^{1−θ} e^z D^n (z^{θ+n−1} e^{−z}).
///
/// Differentiates the sum Σ c_p z^{θ−1+p} e^{−z} term by term n times, then
/// strips the common factor z^{θ−1} e^{−z}. Requires θ > 0.
pub fn laguerre_rodrigues<T: Scalar>(n: usize, theta: &T) -> Result<Poly<T>> {
    if *theta <= T::zero() {
        return Err(Error::Unsupported(format!(
            "Rodrigues route needs theta > 0, got {theta:?}"
        )));
    }
    // terms[p] is the coefficient of z^{θ−1+p} e^{−z}
    let mut terms = vec![T::zero(); n + 1];
    terms[n] = T::one();
    let shift = theta.clone() - T::one();
    for _ in 0..n {
        let mut next = vec![T::zero(); n + 1];
        for (p, c) in terms.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // power rule on z^{θ−1+p}
            if p > 0 {
                let power = shift.clone() + T::from_usize_exact(p);
                next[p - 1] = next[p - 1].clone() + c.clone() * power;
            }
            // derivative of e^{−z}
            next[p] = next[p].clone() - c.clone();
        }
        terms = next;
    }
    let p = Poly::new(terms);
    Ok(if n % 2 == 1 { -&p } else { p })
}
