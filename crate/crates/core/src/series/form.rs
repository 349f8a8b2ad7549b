use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// f(z) = C z^l e^{αz} Π_j (1 + β_j z) with finitely many β_j ≥ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct LaguerreForm<T> {
    c: T,
    l: usize,
    alpha: T,
    betas: Vec<T>,
}

/// Which Laguerre family a form belongs to (by the sign of α).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormClass {
    /// α > 0
    Plus,
    /// α = 0 (also a member of the plus class)
    Zero,
    /// α < 0
    Minus,
}

/// Result of [`LaguerreForm::expand`].
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion<T> {
    pub poly: Poly<T>,
    /// Set when the degree cap was below the order of the zero at the origin.
    pub degenerate: bool,
}

impl<T: Scalar> LaguerreForm<T> {
    /// Betas are sorted descending; a negative beta is rejected.
    pub fn new(c: T, l: usize, alpha: T, mut betas: Vec<T>) -> Result<Self> {
        if betas.iter().any(|b| *b < T::zero()) {
            return Err(Error::InvalidInput("betas must be nonnegative".into()));
        }
        betas.sort_by(|a, b| b.partial_cmp(a).expect("comparable betas"));
        Ok(LaguerreForm { c, l, alpha, betas })
    }

    /// e^{αz}
    pub fn exponential(alpha: T) -> Self {
        LaguerreForm {
            c: T::one(),
            l: 0,
            alpha,
            betas: Vec::new(),
        }
    }

    pub fn c(&self) -> &T {
        &self.c
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn alpha(&self) -> &T {
        &self.alpha
    }

    pub fn betas(&self) -> &[T] {
        &self.betas
    }

    pub fn class(&self) -> FormClass {
        if self.alpha.is_zero() {
            FormClass::Zero
        } else if self.alpha > T::zero() {
            FormClass::Plus
        } else {
            FormClass::Minus
        }
    }

    pub fn is_plus(&self) -> bool {
        self.alpha >= T::zero()
    }

    /// μ_k = Σ β_j^k
    pub fn mu(&self, k: u32) -> T {
        self.betas.iter().fold(T::zero(), |acc, b| {
            let mut p = T::one();
            for _ in 0..k {
                p = p * b.clone();
            }
            acc + p
        })
    }

    /// C z^l Π(1 + β_j z), i.e. the form with the exponential removed.
    pub fn polynomial_part(&self) -> Poly<T> {
        let mut p = Poly::monomial(self.l, self.c.clone());
        for b in &self.betas {
            p = &p * &Poly::new(vec![T::one(), b.clone()]);
        }
        p
    }

    /// Taylor coefficients through degree `n`.
    pub fn expand(&self, n: usize) -> Expansion<T> {
        if n < self.l {
            return Expansion {
                poly: Poly::zero(),
                degenerate: true,
            };
        }
        let budget = n - self.l;
        let mut poly = Poly::constant(self.c.clone());
        for b in &self.betas {
            poly = poly.mul_truncated(&Poly::new(vec![T::one(), b.clone()]), budget);
        }
        let mut exp = Vec::with_capacity(budget + 1);
        let mut term = T::one();
        for k in 0..=budget {
            if k > 0 {
                term = term * self.alpha.clone() / T::from_usize_exact(k);
            }
            exp.push(term.clone());
        }
        let mut out = poly.mul_truncated(&Poly::new(exp), budget);
        for _ in 0..self.l {
            out = out.shift_up();
        }
        Expansion {
            poly: out,
            degenerate: false,
        }
    }

    pub fn to_f64(&self) -> LaguerreForm<f64> {
        LaguerreForm {
            c: self.c.to_f64(),
            l: self.l,
            alpha: self.alpha.to_f64(),
            betas: self.betas.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "C": self.c.to_json(),
            "l": self.l,
            "alpha": self.alpha.to_json(),
            "betas": self.betas.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> std::result::Result<Self, String> {
        let field = |name: &str| v.get(name).ok_or_else(|| format!("missing field \"{name}\""));
        let c = T::from_json(field("C")?).ok_or("C: not a scalar")?;
        let l = field("l")?
            .as_u64()
            .ok_or("l: expected a nonnegative integer")? as usize;
        let alpha = T::from_json(field("alpha")?).ok_or("alpha: not a scalar")?;
        let betas = field("betas")?
            .as_array()
            .ok_or("betas: expected an array")?
            .iter()
            .enumerate()
            .map(|(i, b)| T::from_json(b).ok_or_else(|| format!("betas[{i}]: not a scalar")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        LaguerreForm::new(c, l, alpha, betas).map_err(|e| e.to_string())
    }
}

impl<T: Scalar> Serialize for LaguerreForm<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for LaguerreForm<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        LaguerreForm::from_json(&v).map_err(D::Error::custom)
    }
}
