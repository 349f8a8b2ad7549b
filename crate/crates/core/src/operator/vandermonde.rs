use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::gamma::ln_gamma_complex;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Relative residual of Γ(z+m+k)/(Γ(z+m)Γ(z+k)) = Σ_n C(m,n)C(k,n) n!/Γ(z+n).
pub fn vandermonde_residual(z: Complex64, m: usize, k: usize) -> Result<f64> {
    let nearest = z.re.round();
    if nearest <= 0.0 && (z - nearest).norm() < 1e-6 {
        return Err(Error::IllConditioned(format!(
            "z = {z} lies within 1e-6 of the Gamma pole {nearest}"
        )));
    }
    let lhs = (ln_gamma_complex(z + (m + k) as f64)
        - ln_gamma_complex(z + m as f64)
        - ln_gamma_complex(z + k as f64))
    .exp();
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut fact = 1.0;
    for n in 0..=m.min(k) {
        if n > 0 {
            fact *= n as f64;
        }
        let c = binomial(m, n) * binomial(k, n) * fact;
        rhs += c * (-ln_gamma_complex(z + n as f64)).exp();
    }
    Ok((lhs - rhs).norm() / lhs.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(vandermonde_residual(Complex64::new(1.5, 0.0), 0, 7).unwrap() < 1e-14);
        assert!(vandermonde_residual(Complex64::new(2.0, 0.0), 1, 1).unwrap() < 1e-14);
        assert!(vandermonde_residual(Complex64::new(1.5, 0.0), 2, 3).unwrap() <= 1e-12);
        assert!(vandermonde_residual(Complex64::new(1.5, 0.5), 12, 9).unwrap() <= 1e-12);
    }

    #[test]
    fn pole_is_flagged() {
        assert!(matches!(
            vandermonde_residual(Complex64::new(-2.0 + 1e-8, 0.0), 2, 2),
            Err(Error::IllConditioned(_))
        ));
        assert!(vandermonde_residual(Complex64::new(-2.5, 0.0), 2, 2).is_ok());
    }
}
