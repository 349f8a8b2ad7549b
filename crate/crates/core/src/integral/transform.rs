//! exp(aΔ_θ) realised as an integral against the kernel K_θ.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use crate::operator::rule::factored_exp;
use crate::series::Poly;

use super::kernel::Kernel;
use super::quadrature::{gauss_laguerre_rule, QuadratureRule};

/// A function sampled by the integral route at the points a·s_i.
pub trait Integrand {
    fn eval_dd(&self, s: Dd) -> CDd;
}

impl Integrand for Poly<f64> {
    fn eval_dd(&self, s: Dd) -> CDd {
        let re = self
            .coeffs()
            .iter()
            .rev()
            .fold(Dd::ZERO, |acc, &c| acc * s + Dd::new(c));
        CDd::new(re, Dd::ZERO)
    }
}

impl<F: Fn(f64) -> Complex64> Integrand for F {
    fn eval_dd(&self, s: Dd) -> CDd {
        CDd::from(self(s.to_f64()))
    }
}

/// e^{−z/a} Σ_i w_i w_θ(s_i z/a) f(a s_i) for a fixed rule.
///
/// The sum is accumulated in double-double with per-term binary exponents;
/// the common factor Γ(θ) e^{−z/a} is applied once at the end.
pub fn exp_delta_integral(a: f64, f: &impl Integrand, z: Complex64, rule: &QuadratureRule) -> Result<Complex64> {
    if !(a > 0.0) {
        return Err(Error::InvalidInput(format!("integral route needs a > 0, got {a}")));
    }
    let kernel = Kernel::new(rule.theta());
    let x = z / a;
    let xd = CDd::from(x);
    let ad = Dd::new(a);
    let mut terms = Vec::with_capacity(rule.order());
    for (i, &s) in rule.nodes_dd().iter().enumerate() {
        let fv = f.eval_dd(ad * s);
        if fv == CDd::ZERO {
            continue;
        }
        let (wm, we) = kernel.w_dd(xd.scale(s));
        let (mm, me) = rule.scaled_weight(i);
        terms.push(((wm * fv).scale(mm), we + me));
    }
    let Some(top) = terms.iter().map(|t| t.1).max() else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let mut acc = CDd::ZERO;
    for (t, e) in terms {
        if e - top > -1000 {
            acc = acc + t.ldexp(e - top);
        }
    }
    let acc = acc.to_c64();
    if acc == Complex64::new(0.0, 0.0) {
        return Ok(acc);
    }
    Ok((acc.ln() + rule.mass().ln() - x + top as f64 * std::f64::consts::LN_2).exp())
}

/// Result of the order-doubling integral evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralValue {
    pub value: Complex64,
    pub order: usize,
    pub converged: bool,
}

/// Rules of orders 80, 160 and 320 for one θ, built on first use.
#[derive(Debug)]
pub struct ExpIntegral {
    theta: f64,
    rules: [OnceLock<QuadratureRule>; 3],
    tolerance: f64,
}

pub const DEFAULT_ORDER: usize = 80;
const ORDERS: [usize; 3] = [80, 160, 320];

impl ExpIntegral {
    /// θ = 0 is served by the closed form only.
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0) {
            return Err(Error::Unsupported(
                "integral route needs theta > 0; use the closed form at theta = 0".into(),
            ));
        }
        Ok(ExpIntegral {
            theta,
            rules: Default::default(),
            tolerance: 1e-10,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rule(&self, level: usize) -> &QuadratureRule {
        self.rules[level].get_or_init(|| {
            gauss_laguerre_rule(self.theta, ORDERS[level]).expect("theta checked at construction")
        })
    }

    /// Doubles the order from 80 until two successive values agree to 1e-10
    /// relative, stopping at 320.
    pub fn apply(&self, a: f64, f: &impl Integrand, z: Complex64) -> Result<IntegralValue> {
        let mut prev = exp_delta_integral(a, f, z, self.rule(0))?;
        for (level, &order) in ORDERS.iter().enumerate().skip(1) {
            let cur = exp_delta_integral(a, f, z, self.rule(level))?;
            if (cur - prev).norm() <= self.tolerance * cur.norm() {
                return Ok(IntegralValue {
                    value: cur,
                    order,
                    converged: true,
                });
            }
            prev = cur;
        }
        Ok(IntegralValue {
            value: prev,
            order: ORDERS[ORDERS.len() - 1],
            converged: false,
        })
    }

}

/// exp(aΔ_θ)[e^{uz} g](z) for u < 0 through the factored operation rule.
pub fn exp_delta_l_minus(a: f64, theta: f64, u: f64, g: &Poly<f64>, z: Complex64) -> Result<Complex64> {
    if !(u < 0.0) {
        return Err(Error::InvalidInput(format!("L-minus extension needs u < 0, got {u}")));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidInput(format!("a must be positive, got {a}")));
    }
    if theta < 0.0 {
        return Err(Error::InvalidInput("theta must be nonnegative".into()));
    }
    Ok(factored_exp(&a, &u, &theta, g)?.eval(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::exp_delta_closed;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_is_fixed() {
        for &theta in &[0.5, 1.0, 3.0] {
            let rule = gauss_laguerre_rule(theta, 80).unwrap();
            for &z in &[c(0.0, 0.0), c(1.5, -0.5), c(-2.0, 0.0)] {
                let v = exp_delta_integral(0.5, &|_: f64| c(1.0, 0.0), z, &rule).unwrap();
                assert!((v - 1.0).norm() < 1e-12, "theta={theta} z={z} v={v}");
            }
        }
    }

    #[test]
    fn monomials_match_closed_form() {
        let rule = gauss_laguerre_rule(2.0, 80).unwrap();
        for m in 0..=6 {
            let f = Poly::monomial(m, 1.0);
            let closed = exp_delta_closed(&0.5, &2.0, &f);
            for &z in &[c(1.0, 0.0), c(-1.5, 2.0)] {
                let v = exp_delta_integral(0.5, &f, z, &rule).unwrap();
                let want = closed.eval_complex(z);
                assert!((v - want).norm() <= 1e-10 * want.norm(), "m={m} z={z}");
            }
        }
    }

    #[test]
    fn small_a_needs_refinement() {
        let t = ExpIntegral::new(1.5).unwrap();
        let z = c(0.5, 0.0);
        let a = 1e-3;
        let v = t.apply(a, &Poly::new(vec![0.0, 1.0]), z).unwrap();
        let want = 0.5 + a * 1.5;
        assert!(((v.value.re - want) / want).abs() <= 1e-6, "{v:?}");
    }

    #[test]
    fn l_minus_examples() {
        let v = exp_delta_l_minus(1.0, 1.0, -1.0, &Poly::constant(1.0), c(0.0, 0.0)).unwrap();
        assert!((v - 0.5).norm() < 1e-15);

        // g = 1 + z: factored route against direct quadrature of e^{uz}(1+z)
        let g = Poly::new(vec![1.0, 1.0]);
        let t = ExpIntegral::new(1.0).unwrap();
        for &a in &[0.3, 1.0, 2.5] {
            for &z in &[c(0.0, 0.0), c(1.0, -1.0), c(-2.0, 0.5)] {
                let fact = exp_delta_l_minus(a, 1.0, -1.0, &g, z).unwrap();
                let quad = t
                    .apply(a, &|s: f64| c((-s).exp() * (1.0 + s), 0.0), z)
                    .unwrap()
                    .value;
                assert!((fact - quad).norm() <= 1e-8 * fact.norm(), "a={a} z={z}");
            }
        }
        // h(0) = 1 + aθ/(1+a) after rescaling; with θ = 1, a = 2: (1/3)(1 + 2/3)
        let v = exp_delta_l_minus(2.0, 1.0, -1.0, &g, c(0.0, 0.0)).unwrap();
        assert!((v.re - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn l_minus_continuity_at_zero_u() {
        let g = Poly::new(vec![0.5, -1.0, 2.0]);
        let z = c(0.7, 0.2);
        let closed = exp_delta_closed(&0.8, &1.2, &g).eval_complex(z);
        let near = exp_delta_l_minus(0.8, 1.2, -1e-9, &g, z).unwrap();
        assert!((near - closed).norm() < 1e-7);
        assert!(exp_delta_l_minus(0.8, 1.2, 0.5, &g, z).is_err());
    }

    #[test]
    fn theta_zero_is_closed_form_only() {
        assert!(matches!(ExpIntegral::new(0.0), Err(Error::Unsupported(_))));
    }
}
