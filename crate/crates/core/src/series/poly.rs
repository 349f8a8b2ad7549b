use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::scalar::Scalar;

/// Polynomial f(z) = Σ c_k z^k stored by Taylor coefficients.
///
/// The trailing coefficient is nonzero; the zero polynomial has no
/// coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// c·z^n
    pub fn monomial(n: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// c·Π(z − r_j)
    pub fn from_roots(c: T, roots: &[T]) -> Self {
        let mut p = Self::constant(c);
        for r in roots {
            p = &p * &Self::new(vec![-r.clone(), T::one()]);
        }
        p
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of z^k (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// f^{(k)}(0) = k!·c_k
    pub fn derivative_at_zero(&self, k: usize) -> T {
        let mut v = self.coeff(k);
        for i in 2..=k {
            v = v * T::from_usize_exact(i);
        }
        v
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation at a complex point (coefficients rounded to f64).
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64())
    }

    pub fn differentiate(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_usize_exact(k))
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// z·f(z)
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// f(c·z)
    pub fn rescale_argument(&self, c: &T) -> Self {
        let mut pow = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * pow.clone());
            pow = pow * c.clone();
        }
        Self::new(out)
    }

    /// f(z²)
    pub fn compose_square(&self) -> Self {
        let mut out = vec![T::zero(); 2 * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[2 * k] = c.clone();
        }
        Self::new(out)
    }

    /// Terms of degree ≤ n.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n + 1).cloned().collect())
    }

    /// Product truncated at degree n.
    pub fn mul_truncated(&self, other: &Self, n: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(n + 1);
        let mut out = vec![T::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn to_f64(&self) -> Poly<f64> {
        Poly::new(self.coeffs.iter().map(Scalar::to_f64).collect())
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "coeffs": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>() })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| "expected an object with a \"coeffs\" array".to_string())?;
        let coeffs = arr
            .iter()
            .enumerate()
            .map(|(i, c)| T::from_json(c).ok_or_else(|| format!("coeffs[{i}]: not a scalar: {c}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }
}

impl Poly<f64> {
    /// Largest |c_k|.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Σ |c_k| |z|^k, the natural magnitude scale of f near |z|.
    pub fn abs_eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        match (self.degree(), rhs.degree()) {
            (Some(a), Some(b)) => self.mul_truncated(rhs, a + b),
            _ => Poly::zero(),
        }
    }
}

impl<T: Scalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl<T: Scalar> Serialize for Poly<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Poly<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Poly::from_json(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn p(c: &[f64]) -> Poly<f64> {
        Poly::new(c.to_vec())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[1.0, 2.0, 1.0]).eval_complex(Complex64::new(-1.0, 0.0)), Complex64::new(0.0, 0.0));
        assert_eq!(Poly::<f64>::zero().eval_complex(Complex64::new(5.0, 2.0)), Complex64::new(0.0, 0.0));
        let z = Complex64::new(3.0, 4.0);
        assert_eq!(p(&[0.0, 1.0]).eval_complex(z), z);
        assert_eq!(p(&[1.0, 2.0, 1.0]).eval(&-1.0), 0.0);
    }

    #[test]
    fn differentiate_examples() {
        assert_eq!(p(&[1.0, 2.0, 1.0]).differentiate(), p(&[2.0, 2.0]));
        assert!(p(&[7.0]).differentiate().is_zero());
        assert_eq!(p(&[0.0, 0.0, 0.0, 1.0]).differentiate(), p(&[0.0, 0.0, 3.0]));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let q = p(&[1.0, 0.0, 0.0]);
        assert_eq!(q.degree(), Some(0));
        assert_eq!(p(&[0.0, 0.0]).degree(), None);
    }

    #[test]
    fn exact_derivatives_at_zero() {
        let q: Poly<BigRational> = Poly::new(vec![ratio(1, 2), ratio(0, 1), ratio(1, 6)]);
        assert_eq!(q.derivative_at_zero(2), ratio(1, 3));
        assert_eq!(q.derivative_at_zero(0), ratio(1, 2));
        assert_eq!(q.derivative_at_zero(5), ratio(0, 1));
    }

    #[test]
    fn json_shapes() {
        let q = p(&[1.0, -0.5]);
        assert_eq!(q.to_json().to_string(), r#"{"coeffs":[1,-0.5]}"#);
        let back: Poly<f64> = serde_json::from_str(r#"{"coeffs":[1,-0.5,0]}"#).unwrap();
        assert_eq!(back, q);
        let exact: Poly<BigRational> = serde_json::from_str(r#"{"coeffs":["1/3", 2]}"#).unwrap();
        assert_eq!(exact.to_json().to_string(), r#"{"coeffs":["1/3","2"]}"#);
        assert!(Poly::<f64>::from_json(&serde_json::json!({"coeffs": [1, "x"]})).is_err());
        assert!(Poly::<f64>::from_json(&serde_json::json!([1, 2])).is_err());
    }

    #[test]
    fn from_roots_and_rescale() {
        let q = Poly::from_roots(2.0, &[-1.0, -2.0]);
        assert_eq!(q, p(&[4.0, 6.0, 2.0]));
        assert_eq!(q.rescale_argument(&2.0), p(&[4.0, 12.0, 8.0]));
        assert_eq!(p(&[1.0, 3.0]).compose_square(), p(&[1.0, 0.0, 3.0]));
    }
}
