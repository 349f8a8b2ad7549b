//! Δ_θ = (θ + zD)D and power series in it.

use std::fmt;
use std::sync::Arc;

use crate::scalar::Scalar;
use crate::series::Poly;

/// q_θ^{(m,k)}: the coefficient in Δ_θ^k z^m = q z^{m−k}.
///
/// Built as Π_{i<k} (m−i)(θ+m−1−i); zero for k > m.
pub fn q_coefficient<T: Scalar>(theta: &T, m: usize, k: usize) -> T {
    if k > m {
        return T::zero();
    }
    (0..k).fold(T::one(), |acc, i| {
        let j = T::from_usize_exact(m - i);
        acc * j.clone() * (theta.clone() + j - T::one())
    })
}

/// (Δ_θ f)(z) = θ f′(z) + z f″(z)
pub fn apply_delta<T: Scalar>(theta: &T, f: &Poly<T>) -> Poly<T> {
    let d1 = f.differentiate();
    let d2 = d1.differentiate();
    &d1.scale(theta) + &d2.shift_up()
}

/// Coefficient source k ↦ φ^{(k)}(0)/k! for the symbol of φ(Δ_θ).
#[derive(Clone)]
pub enum Symbol<T> {
    Polynomial(Poly<T>),
    /// e^{s w}
    Exponential(T),
    Stream(Arc<dyn Fn(usize) -> T + Send + Sync>),
}

impl<T: fmt::Debug> fmt::Debug for Symbol<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Polynomial(p) => f.debug_tuple("Polynomial").field(p).finish(),
            Symbol::Exponential(s) => f.debug_tuple("Exponential").field(s).finish(),
            Symbol::Stream(_) => f.write_str("Stream(..)"),
        }
    }
}

/// An entire function φ of exponential type at most `type_bound`.
#[derive(Clone, Debug)]
pub struct OperatorSpec<T> {
    symbol: Symbol<T>,
    type_bound: f64,
}

impl<T: Scalar> OperatorSpec<T> {
    pub fn polynomial(p: Poly<T>) -> Self {
        OperatorSpec {
            symbol: Symbol::Polynomial(p),
            type_bound: 0.0,
        }
    }

    pub fn exponential(s: T) -> Self {
        let type_bound = s.to_f64().abs();
        OperatorSpec {
            symbol: Symbol::Exponential(s),
            type_bound,
        }
    }

    /// `coeff(k)` must return φ^{(k)}(0)/k!; `type_bound` is the exponential
    /// type the caller vouches for.
    pub fn stream(coeff: impl Fn(usize) -> T + Send + Sync + 'static, type_bound: f64) -> Self {
        OperatorSpec {
            symbol: Symbol::Stream(Arc::new(coeff)),
            type_bound,
        }
    }

    pub fn identity() -> Self {
        Self::polynomial(Poly::constant(T::one()))
    }

    pub fn symbol(&self) -> &Symbol<T> {
        &self.symbol
    }

    pub fn type_bound(&self) -> f64 {
        self.type_bound
    }

    /// φ^{(k)}(0)/k!
    pub fn coefficient(&self, k: usize) -> T {
        match &self.symbol {
            Symbol::Polynomial(p) => p.coeff(k),
            Symbol::Exponential(s) => {
                (1..=k).fold(T::one(), |acc, i| acc * s.clone() / T::from_usize_exact(i))
            }
            Symbol::Stream(f) => f(k),
        }
    }

    /// The first `n` coefficients.
    pub fn coefficients(&self, n: usize) -> Vec<T> {
        match &self.symbol {
            Symbol::Exponential(s) => {
                let mut out = Vec::with_capacity(n);
                let mut term = T::one();
                for k in 0..n {
                    if k > 0 {
                        term = term * s.clone() / T::from_usize_exact(k);
                    }
                    out.push(term.clone());
                }
                out
            }
            _ => (0..n).map(|k| self.coefficient(k)).collect(),
        }
    }
}

/// φ(Δ_θ) f for a polynomial f.
///
/// For each output degree n the k-sum runs over k ≤ deg f − n with
/// q_θ^{(n+k,k)} carried as a running product.
pub fn apply_phi_of_delta<T: Scalar>(phi: &OperatorSpec<T>, theta: &T, f: &Poly<T>) -> Poly<T> {
    let Some(deg) = f.degree() else {
        return Poly::zero();
    };
    let phi_c = phi.coefficients(deg + 1);
    let fc = f.coeffs();
    let mut out = Vec::with_capacity(deg + 1);
    for n in 0..=deg {
        let mut q = T::one();
        let mut acc = T::zero();
        for k in 0..=(deg - n) {
            if k > 0 {
                // q_θ^{(n+k,k)} = q_θ^{(n+k−1,k−1)}·(n+k)(θ+n+k−1)
                let j = T::from_usize_exact(n + k);
                q = q * j.clone() * (theta.clone() + j - T::one());
            }
            if !phi_c[k].is_zero() && !fc[n + k].is_zero() {
                acc = acc + phi_c[k].clone() * fc[n + k].clone() * q.clone();
            }
        }
        out.push(acc);
    }
    Poly::new(out)
}

/// exp(aΔ_θ) f via the finite closed-form sum; any real a (negative included).
pub fn exp_delta_closed<T: Scalar>(a: &T, theta: &T, f: &Poly<T>) -> Poly<T> {
    apply_phi_of_delta(&OperatorSpec::exponential(a.clone()), theta, f)
}
