//! The operation rule: exp(aΔ_θ) acting on e^{uz} g(z).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Poly;

use super::delta::exp_delta_closed;

/// prefactor · e^{exp_coefficient·z} · inner(z)
#[derive(Clone, Debug, PartialEq)]
pub struct ExpFactoredResult<T> {
    pub prefactor: T,
    pub exp_coefficient: T,
    pub inner: Poly<T>,
}

impl<T: Scalar> ExpFactoredResult<T> {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.prefactor.to_f64() * (self.exp_coefficient.to_f64() * z).exp() * self.inner.eval_complex(z)
    }

    /// Taylor series through degree n.
    pub fn series(&self, n: usize) -> Poly<T> {
        let mut e = Vec::with_capacity(n + 1);
        let mut term = self.prefactor.clone();
        for k in 0..=n {
            if k > 0 {
                term = term * self.exp_coefficient.clone() / T::from_usize_exact(k);
            }
            e.push(term.clone());
        }
        Poly::new(e).mul_truncated(&self.inner, n)
    }
}

/// exp(aΔ_θ)[e^{uz} g] = (1−ua)^{−θ} e^{uz/(1−ua)} h(z) with
/// h = exp(a(1−ua)Δ_θ)[g(z/(1−ua)²)].
///
/// Needs a > 0 and ua < 1. In exact arithmetic θ must be an integer so that
/// the prefactor stays rational.
pub fn operation_rule<T: Scalar>(a: &T, u: &T, theta: &T, g: &Poly<T>) -> Result<ExpFactoredResult<T>> {
    if *a <= T::zero() {
        return Err(Error::InvalidInput(format!("a must be positive, got {a:?}")));
    }
    factored_exp(a, u, theta, g)
}

/// Same as [`operation_rule`] but also accepts a = 0 (the identity).
pub(crate) fn factored_exp<T: Scalar>(a: &T, u: &T, theta: &T, g: &Poly<T>) -> Result<ExpFactoredResult<T>> {
    let ua = u.clone() * a.clone();
    if ua >= T::one() {
        return Err(Error::OutsideOperationRule(ua.to_f64()));
    }
    let s = T::one() - ua;
    let prefactor = s.pow_real(&-theta.clone()).ok_or_else(|| {
        Error::Unsupported(format!("(1-ua)^(-theta) is not exact for theta = {theta:?}"))
    })?;
    let exp_coefficient = u.clone() / s.clone();
    let squeeze = T::one() / (s.clone() * s.clone());
    let inner = exp_delta_closed(&(a.clone() * s), theta, &g.rescale_argument(&squeeze));
    Ok(ExpFactoredResult {
        prefactor,
        exp_coefficient,
        inner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    #[test]
    fn u_zero_reduces_to_semigroup() {
        let g = Poly::new(vec![1.0, -2.0, 0.5]);
        let r = operation_rule(&0.7, &0.0, &1.3, &g).unwrap();
        assert_eq!(r.prefactor, 1.0);
        assert_eq!(r.exp_coefficient, 0.0);
        assert_eq!(r.inner, exp_delta_closed(&0.7, &1.3, &g));
    }

    #[test]
    fn constant_inner_example() {
        let r = operation_rule(&ratio(1, 1), &ratio(-1, 1), &ratio(1, 1), &Poly::constant(ratio(1, 1))).unwrap();
        assert_eq!(r.prefactor, ratio(1, 2));
        assert_eq!(r.exp_coefficient, ratio(-1, 2));
        assert_eq!(r.inner, Poly::constant(ratio(1, 1)));
    }

    #[test]
    fn constant_g_gives_pure_exponential() {
        for &(a, u, theta) in &[(0.5, 1.2, 0.7), (2.0, -3.0, 2.5), (0.1, 9.0, 0.0)] {
            let r = operation_rule(&a, &u, &theta, &Poly::constant(1.0)).unwrap();
            assert_eq!(r.inner, Poly::constant(1.0));
            let s: f64 = 1.0 - u * a;
            assert!((r.prefactor - s.powf(-theta)).abs() < 1e-14);
            assert!((r.exp_coefficient - u / s).abs() < 1e-14);
        }
    }

    #[test]
    fn domain_errors() {
        let g = Poly::constant(1.0);
        assert_eq!(operation_rule(&1.0, &1.0, &1.0, &g), Err(Error::OutsideOperationRule(1.0)));
        assert!(operation_rule(&0.0, &-1.0, &1.0, &g).is_err());
        let gq = Poly::constant(ratio(1, 1));
        assert!(matches!(
            operation_rule(&ratio(1, 1), &ratio(-1, 1), &ratio(1, 2), &gq),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn series_matches_direct_application_exactly() {
        // exp(aΔ)[e^{uz} g] on the truncated series, compared below the cut
        let (a, u, theta) = (ratio(1, 5), ratio(-3, 2), ratio(2, 1));
        let g = Poly::new(vec![ratio(1, 1), ratio(2, 1), ratio(-1, 3)]);
        let n = 40;
        let r = operation_rule(&a, &u, &theta, &g).unwrap();
        let mut eu = Vec::new();
        let mut term = ratio(1, 1);
        for k in 0..=n + 30 {
            if k > 0 {
                term = term * u.clone() / BigRational::from_integer((k as i64).into());
            }
            eu.push(term.clone());
        }
        let f = Poly::new(eu).mul_truncated(&g, n + 30);
        let direct = exp_delta_closed(&a, &theta, &f);
        let lhs = r.series(8);
        for k in 0..=8 {
            let d = (lhs.coeff(k) - direct.coeff(k)).to_f64().abs();
            assert!(d < 1e-12, "k={k} diff={d}");
        }
    }
}
