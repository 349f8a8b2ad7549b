//! Scalar abstraction shared by the exact (rational) and floating routes.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::dd::Dd;

/// Field element usable as a polynomial coefficient.
///
/// Implemented for `f32`, `f64` and [`BigRational`]. The exact type lets the
/// algebraic identities be checked with zero tolerance.
pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is exact.
    const EXACT: bool;

    fn to_f64(&self) -> f64;

    /// Nearest double-double; floating types convert exactly.
    fn to_dd(&self) -> Dd {
        Dd::new(self.to_f64())
    }

    fn from_usize_exact(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize fits every scalar type")
    }

    /// `self^exponent` for a real exponent. Exact types only support integer
    /// exponents and return `None` otherwise.
    fn pow_real(&self, exponent: &Self) -> Option<Self>;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Option<Self>;
}

fn float_json(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        Value::from(x as i64)
    } else {
        serde_json::Number::from_f64(x)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(x.to_string()))
    }
}

fn parse_fraction(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => {
            if let Ok(p) = s.parse::<BigInt>() {
                return Some(BigRational::from_integer(p));
            }
            parse_decimal(s)
        }
    }
}

/// Exact value of a decimal literal such as `-1.25e-3`.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let int = if int.is_empty() || int == "-" || int == "+" { format!("{int}0") } else { int.to_string() };
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigRational::from_integer(10.into());
    let scale = num_traits::pow::Pow::pow(&ten, shift);
    Some(BigRational::from_integer(digits) * scale)
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn pow_real(&self, exponent: &Self) -> Option<Self> {
                Some(self.powf(*exponent))
            }

            fn to_json(&self) -> Value {
                float_json(*self as f64)
            }

            fn from_json(v: &Value) -> Option<Self> {
                match v {
                    Value::Number(n) => n.as_f64().map(|x| x as $t),
                    Value::String(s) => parse_fraction(s)
                        .map(|r| Scalar::to_f64(&r))
                        .map(|x| x as $t),
                    _ => None,
                }
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_dd(&self) -> Dd {
        let hi = Scalar::to_f64(self);
        match BigRational::from_float(hi) {
            Some(h) => Dd::new(hi) + Dd::new(Scalar::to_f64(&(self - h))),
            None => Dd::new(hi),
        }
    }

    fn pow_real(&self, exponent: &Self) -> Option<Self> {
        if !exponent.is_integer() {
            return None;
        }
        let e = exponent.to_integer().to_i32()?;
        if self.is_zero() && e < 0 {
            return None;
        }
        Some(num_traits::pow::Pow::pow(self, e))
    }

    fn to_json(&self) -> Value {
        if self.is_integer() {
            Value::String(self.numer().to_string())
        } else {
            Value::String(format!("{}/{}", self.numer(), self.denom()))
        }
    }

    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Some(BigRational::from_integer(i.into()))
                } else {
                    parse_fraction(&n.to_string())
                }
            }
            Value::String(s) => parse_fraction(s),
            _ => None,
        }
    }
}

/// Arithmetic route selected for a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    ExactRational,
    /// `precision` is the number of significant decimal digits reported.
    Floating { precision: u32 },
}

impl Default for ScalarMode {
    fn default() -> Self {
        ScalarMode::Floating { precision: 17 }
    }
}

impl ScalarMode {
    /// Exact mode needs Γ(θ + m) to be an integer factorial, so θ must be a
    /// positive integer.
    pub fn validate_theta(&self, theta: f64) -> crate::Result<()> {
        match self {
            ScalarMode::ExactRational if !(theta >= 1.0 && theta.fract() == 0.0) => {
                Err(crate::Error::Unsupported(format!(
                    "exact-rational mode requires a positive integer theta, got {theta}"
                )))
            }
            ScalarMode::Floating { precision } if *precision == 0 || *precision > 17 => Err(
                crate::Error::InvalidInput(format!("precision {precision} outside 1..=17")),
            ),
            _ => Ok(()),
        }
    }
}

/// Exact rational from an `f64` (binary expansion, no rounding).
pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Exact rational `p/q`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_json_roundtrip() {
        let r = ratio(-3, 4);
        let v = r.to_json();
        assert_eq!(v, Value::String("-3/4".into()));
        assert_eq!(BigRational::from_json(&v), Some(r));
        assert_eq!(
            BigRational::from_json(&serde_json::json!(0.5)),
            Some(ratio(1, 2))
        );
        assert_eq!(BigRational::from_json(&serde_json::json!(0.1)), Some(ratio(1, 10)));
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_fraction("-1.25e-3"), Some(ratio(-1, 800)));
        assert_eq!(parse_fraction(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_fraction("-.5"), Some(ratio(-1, 2)));
        assert_eq!(parse_fraction("3E2"), Some(ratio(300, 1)));
        assert_eq!(parse_fraction("2/6"), Some(ratio(1, 3)));
        assert_eq!(parse_fraction("abc"), None);
        assert_eq!(parse_fraction("1/0"), None);
    }

    #[test]
    fn exact_mode_needs_integer_theta() {
        assert!(ScalarMode::ExactRational.validate_theta(2.0).is_ok());
        assert!(ScalarMode::ExactRational.validate_theta(0.5).is_err());
        assert!(ScalarMode::ExactRational.validate_theta(0.0).is_err());
        assert!(ScalarMode::default().validate_theta(0.5).is_ok());
    }

    #[test]
    fn exact_pow_only_for_integer_exponents() {
        assert_eq!(ratio(1, 2).pow_real(&ratio(-2, 1)), Some(ratio(4, 1)));
        assert_eq!(ratio(1, 2).pow_real(&ratio(1, 2)), None);
    }
}
