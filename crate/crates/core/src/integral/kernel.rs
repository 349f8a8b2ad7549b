//! w_θ(z) = Σ z^k/γ_θ(k) and K_θ(z, s) = e^{−z} w_θ(zs).

use num_complex::Complex64;

use crate::dd::{CDd, Dd};
use crate::operator::laguerre_poly;
use crate::series::gamma::{ln_gamma, recip_gamma};

const RESCALE_EXP: i32 = 600;
const RESCALE: f64 = 4.149_515_568_880_993e180; // 2^600
const MAX_TERMS: usize = 1_000_000;

/// Series evaluator for w_θ with a relative truncation tolerance.
///
/// Summation runs in double-double so that the cancellation at negative or
/// complex arguments (terms far larger than the sum) does not destroy the
/// result. The absolute error is about 1e-32 times the largest term, roughly
/// 1e-32·e^{2√|z|}, which covers every argument the quadrature route produces
/// for |z/a| up to a few dozen. Truncation happens once the term ratio |z|/((k+1)(θ+k)) is below
/// 1/2 and the geometric tail bound 2|t_{k+1}| is below `tolerance·|sum|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kernel {
    theta: f64,
    tolerance: f64,
}

/// mantissa · e^{ln_scale}
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub mantissa: Complex64,
    pub ln_scale: f64,
}

impl Scaled {
    pub fn value(self) -> Complex64 {
        self.mantissa * self.ln_scale.exp()
    }
}

impl Kernel {
    pub fn new(theta: f64) -> Self {
        Kernel {
            theta,
            tolerance: 1e-32,
        }
    }

    pub fn with_tolerance(theta: f64, tolerance: f64) -> Self {
        Kernel { theta, tolerance }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// w_θ(z) as mantissa and log-scale, safe for arguments where w_θ
    /// overflows f64.
    pub fn w_scaled(&self, z: Complex64) -> Scaled {
        let (m, e) = self.w_dd(CDd::from(z));
        Scaled {
            mantissa: m.to_c64(),
            ln_scale: e as f64 * std::f64::consts::LN_2,
        }
    }

    /// w_θ(z) = mantissa·2^exponent with a double-double argument.
    pub(crate) fn w_dd(&self, z: CDd) -> (CDd, i32) {
        let theta = self.theta;
        // first nonzero term: k0 = 0 unless θ = 0, where 1/γ_0(0) = 0
        let (mut k, mut term) = if theta == 0.0 {
            (1usize, z)
        } else {
            (0usize, CDd::from(Complex64::new(recip_gamma(theta), 0.0)))
        };
        let mut sum = CDd::ZERO;
        let mut exp = 0i32;
        let zabs = z.abs_f64();
        while k < MAX_TERMS {
            sum = sum + term;
            let denom_f = (k as f64 + 1.0) * (theta + k as f64);
            let ratio = if denom_f > 0.0 { zabs / denom_f } else { f64::INFINITY };
            // exact (k+1)(θ+k) in double-double
            let denom = (Dd::new(theta) + Dd::new(k as f64)).mul_f64(k as f64 + 1.0);
            term = (term * z).div_real(denom);
            k += 1;
            let t = term.abs_f64();
            if t == 0.0 {
                break;
            }
            if ratio < 0.5 && 2.0 * t <= self.tolerance * sum.abs_f64() {
                break;
            }
            if t > RESCALE {
                term = term.ldexp(-RESCALE_EXP);
                sum = sum.ldexp(-RESCALE_EXP);
                exp += RESCALE_EXP;
            }
        }
        (sum, exp)
    }

    pub fn w(&self, z: Complex64) -> Complex64 {
        self.w_scaled(z).value()
    }

    /// K_θ(z, s) = e^{−z} w_θ(zs)
    pub fn k(&self, z: Complex64, s: Complex64) -> Complex64 {
        let w = self.w_scaled(z * s);
        w.mantissa * (w.ln_scale - z).exp()
    }
}

/// w_θ(z) with the default tolerance.
pub fn w_theta(theta: f64, z: Complex64) -> Complex64 {
    Kernel::new(theta).w(z)
}

/// Σ_{n≤N} (z^n/n!) L̃_n^{(θ−1)}(s)/Γ(θ+n), the Appell partial sum of K_θ(z, s).
pub fn appell_partial_sum(theta: f64, z: Complex64, s: Complex64, n_max: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..=n_max {
        let lag = laguerre_poly(n, &theta).eval_complex(s);
        let ln_norm = crate::series::gamma::ln_factorial(n) + ln_gamma(theta + n as f64);
        acc += z.powu(n as u32) * lag * (-ln_norm).exp();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn examples() {
        for &theta in &[0.5, 1.0, 3.0] {
            let v = w_theta(theta, c(0.0, 0.0));
            assert!((v.re - recip_gamma(theta)).abs() < 1e-16);
        }
        // Σ 1/(k!)², i.e. I_0(2)
        assert!((w_theta(1.0, c(1.0, 0.0)).re - 2.279_585_302_336_067).abs() < 1e-15);
        assert_eq!(w_theta(0.0, c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn negative_argument_is_bessel_j() {
        // w_1(−x²/4) = J_0(x); J_0(40) = 0.00736689058423729...
        let v = w_theta(1.0, c(-400.0, 0.0));
        assert!((v.re - 0.007_366_890_584_237_29).abs() < 1e-15, "{v}");
        // w_1(−225) = J_0(30)
        let v = w_theta(1.0, c(-225.0, 0.0));
        assert!((v.re + 0.086_367_983_581_040_21).abs() < 1e-15, "{v}");
    }

    #[test]
    fn theta_zero_shift_identity() {
        // w_0(z) = z·w_2(z) because γ_0(k+1) = γ_2(k)
        for &z in &[c(0.3, 0.0), c(-2.0, 1.0), c(5.0, -3.0)] {
            let a = w_theta(0.0, z);
            let b = z * w_theta(2.0, z);
            assert!((a - b).norm() < 1e-14 * b.norm().max(1.0));
        }
    }

    #[test]
    fn scaled_evaluation_survives_overflow() {
        let k = Kernel::new(1.5);
        let big = k.w_scaled(c(2.0e5, 0.0));
        assert!(big.ln_scale > 0.0);
        // ln w_θ(x) ≈ 2√x for large x
        let lnw = big.mantissa.norm().ln() + big.ln_scale;
        assert!((lnw / (2.0 * (2.0e5f64).sqrt()) - 1.0).abs() < 0.02);
    }

    #[test]
    fn appell_expansion_converges_to_kernel() {
        let k = Kernel::new(1.0);
        for &z in &[c(3.0, 0.0), c(-2.0, 1.5), c(0.5, -3.0)] {
            for &s in &[c(3.0, 0.0), c(-1.0, 2.0), c(0.0, 0.0)] {
                let want = k.k(z, s);
                let got = appell_partial_sum(1.0, z, s, 40);
                assert!((got - want).norm() <= 1e-10, "z={z} s={s}");
            }
        }
    }
}
