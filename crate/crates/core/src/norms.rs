//! The norms ‖f‖_b = sup_k b^{−k}|f^{(k)}(0)| and N_b(f) = sup_z |f(z)| e^{−b|z|},
//! the constants relating them, and the operator-norm bound for φ(Δ_θ).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{apply_phi_of_delta, OperatorSpec, Symbol};
use crate::scalar::Scalar;
use crate::series::gamma::ln_factorial;
use crate::series::{LaguerreForm, Poly};

/// Relative slack used when comparing a norm against a bound.
pub const BOUND_SLACK: f64 = 1e-12;

/// A norm value with its truncation certificate: the true norm lies in
/// `[value, value + tail_bound]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormReport<T> {
    pub b: T,
    pub value: T,
    pub truncation_degree: usize,
    pub tail_bound: T,
}

/// ‖f‖_b for a polynomial. Exact in rational arithmetic.
pub fn norm_b<T: Scalar>(f: &Poly<T>, b: &T) -> Result<NormReport<T>> {
    if *b <= T::zero() {
        return Err(Error::InvalidInput(format!("b must be positive, got {b:?}")));
    }
    let mut value = T::zero();
    // factor_k = k!/b^k
    let mut factor = T::one();
    for (k, c) in f.coeffs().iter().enumerate() {
        if k > 0 {
            factor = factor * T::from_usize_exact(k) / b.clone();
        }
        let t = c.abs() * factor.clone();
        if t > value {
            value = t;
        }
    }
    Ok(NormReport {
        b: b.clone(),
        value,
        truncation_degree: f.degree().unwrap_or(0),
        tail_bound: T::zero(),
    })
}

const FORM_SCAN_CAP: usize = 200_000;

/// ‖f‖_b for a finite Laguerre form, scanning the Taylor coefficients
///
/// k! c_k = C Σ_i e_i α^{k−l−i} k!/(k−l−i)!
///
/// in log space until every term is past its peak and the summed majorant
/// has dropped below the running sup. The norm is finite iff b > |α|, or
/// b = |α| and f is a pure exponential.
pub fn norm_b_form(form: &LaguerreForm<f64>, b: f64) -> Result<NormReport<f64>> {
    if !(b > 0.0) {
        return Err(Error::InvalidInput(format!("b must be positive, got {b}")));
    }
    let alpha = *form.alpha();
    let c = *form.c();
    let l = form.l();
    let inner = LaguerreForm::new(1.0, 0, 0.0, form.betas().to_vec())?.polynomial_part();
    let e = inner.coeffs();
    let m = e.len() - 1;
    if alpha == 0.0 || c == 0.0 {
        return norm_b(&form.polynomial_part(), &b);
    }
    let abs_alpha = alpha.abs();
    if b < abs_alpha || (b == abs_alpha && l + m > 0) {
        return Err(Error::OutsideRange { c: b, alpha: abs_alpha });
    }
    if l + m == 0 {
        return Ok(NormReport {
            b,
            value: c.abs(),
            truncation_degree: 0,
            tail_bound: 0.0,
        });
    }
    let ln_e: Vec<f64> = e.iter().map(|x| x.ln()).collect();
    let (ln_alpha, ln_b, ln_c) = (abs_alpha.ln(), b.ln(), c.abs().ln());
    let mut value = 0.0f64;
    let mut k = l;
    loop {
        let ln_kf = ln_factorial(k);
        let top = (k - l).min(m);
        let logs: Vec<(f64, f64)> = (0..=top)
            .map(|i| {
                let j = k - l - i;
                let sign = if alpha < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
                let lt = ln_c + ln_e[i] + j as f64 * ln_alpha + ln_kf - ln_factorial(j) - k as f64 * ln_b;
                (lt, sign)
            })
            .collect();
        let peak = logs.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        let signed: f64 = logs.iter().map(|&(lt, s)| s * (lt - peak).exp()).sum();
        let majorant: f64 = logs.iter().map(|&(lt, _)| (lt - peak).exp()).sum::<f64>() * peak.exp();
        value = value.max(signed.abs() * peak.exp());
        // Every term decreases from k on once |α|(k+1) < (k−l−m+1)·b.
        let decreasing = k >= l + m && abs_alpha * ((k + 1) as f64) < ((k - l - m + 1) as f64) * b;
        if decreasing && majorant <= value {
            return Ok(NormReport {
                b,
                value,
                truncation_degree: k,
                tail_bound: 0.0,
            });
        }
        if k >= FORM_SCAN_CAP {
            return Ok(NormReport {
                b,
                value,
                truncation_degree: k,
                tail_bound: (majorant - value).max(0.0),
            });
        }
        k += 1;
    }
}

/// Per-member Laguerre form data (C_n, l_n, α_n, β_j(n)) of a sequence.
#[derive(Clone, Debug, Default)]
pub struct SequenceParams {
    pub members: Vec<LaguerreForm<f64>>,
}

/// sup_{k ≥ l} C (k/a)^l (a/b)^k, attained at an integer next to l/ln(b/a).
fn peak_bound(c: f64, l: usize, a: f64, b: f64) -> f64 {
    let term = |k: usize| c * (l as f64 * (k as f64 / a).ln() + k as f64 * (a / b).ln()).exp();
    if l == 0 {
        return c;
    }
    let star = l as f64 / (b / a).ln();
    let lo = (star.floor() as usize).max(l);
    let hi = (star.ceil() as usize).max(l);
    term(lo).max(term(hi))
}

/// Uniform bound K on ‖f_n‖_b for a sequence of forms with |α_n| + μ₁(n) ≤ a,
/// |C_n| ≤ C and l_n ≤ l.
///
/// Members with l_n < l are bounded with their own exponent: (k/a)^l does not
/// dominate (k/a)^{l_n} when k < a. K is the largest of these peaks.
pub fn sequence_bound(params: &SequenceParams, a: f64, c: f64, l: usize, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > a) {
        return Err(Error::InvalidInput(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    let mut exponents = vec![l];
    for (n, f) in params.members.iter().enumerate() {
        let growth = f.alpha().abs() + f.mu(1);
        if growth > a * (1.0 + BOUND_SLACK) {
            return Err(Error::Hypothesis {
                index: n,
                condition: format!("|alpha| + mu_1 = {growth} exceeds a = {a}"),
            });
        }
        if f.c().abs() > c * (1.0 + BOUND_SLACK) {
            return Err(Error::Hypothesis {
                index: n,
                condition: format!("|C_n| = {} exceeds C = {c}", f.c().abs()),
            });
        }
        if f.l() > l {
            return Err(Error::Hypothesis {
                index: n,
                condition: format!("l_n = {} exceeds l = {l}", f.l()),
            });
        }
        exponents.push(f.l());
    }
    exponents.sort_unstable();
    exponents.dedup();
    Ok(exponents.into_iter().map(|e| peak_bound(c, e, a, b)).fold(0.0, f64::max))
}

/// sup_k C_k(b, ε) with C_k = (k!/k^k)(1 − ε/b)^k e^k and C_0 = 1.
pub fn sandwich_constant(b: f64, eps: f64) -> Result<f64> {
    if !(b > 0.0 && eps > 0.0 && eps < b) {
        return Err(Error::InvalidInput(format!("need 0 < eps < b, got b = {b}, eps = {eps}")));
    }
    let ln_q = (1.0 - eps / b).ln() + 1.0;
    let ln_ck = |k: usize| ln_factorial(k) - k as f64 * (k as f64).ln() + k as f64 * ln_q;
    let mut best = 0.0f64;
    let mut prev = 0.0f64;
    let mut falling = 0;
    let mut k = 1;
    while falling < 10 {
        let cur = ln_ck(k);
        best = best.max(cur);
        falling = if cur < prev { falling + 1 } else { 0 };
        prev = cur;
        k += 1;
    }
    Ok(best.exp())
}

/// N_c(f) for a form with α ≥ 0 and C > 0, where M_f(r) = f(r).
///
/// The sup of ln f(r) − cr sits where c = α + l/r + Σ β_j/(1 + β_j r); the
/// right side is decreasing in r, so the root is bracketed and bisected.
pub fn norm_n_laguerre(form: &LaguerreForm<f64>, c: f64) -> Result<f64> {
    let alpha = *form.alpha();
    let cc = *form.c();
    if !(alpha >= 0.0 && cc > 0.0) {
        return Err(Error::InvalidInput("N-norm needs alpha >= 0 and C > 0".into()));
    }
    if c <= alpha {
        return Err(Error::OutsideRange { c, alpha });
    }
    let l = form.l() as f64;
    let betas = form.betas();
    let slope = |r: f64| {
        let s: f64 = betas.iter().map(|b| b / (1.0 + b * r)).sum();
        alpha - c + l / r + s
    };
    let log_f = |r: f64| {
        let lz = if form.l() == 0 { 0.0 } else { l * r.ln() };
        cc.ln() + lz + (alpha - c) * r + betas.iter().map(|b| (b * r).ln_1p()).sum::<f64>()
    };
    if form.l() == 0 && alpha + form.mu(1) <= c {
        return Ok(cc);
    }
    let mut hi = 1.0;
    while slope(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..400 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(log_f(0.5 * (lo + hi)).exp())
}

/// Both sides of N_b(f) ≤ ‖f‖_b ≤ C(b,ε) N_{b−ε}(f).
#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub n_b: f64,
    pub norm_b: f64,
    pub constant: f64,
    pub n_b_minus_eps: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

pub fn sandwich_check(form: &LaguerreForm<f64>, b: f64, eps: f64) -> Result<SandwichReport> {
    let n_b = norm_n_laguerre(form, b)?;
    let report = norm_b_form(form, b)?;
    let constant = sandwich_constant(b, eps)?;
    let n_low = norm_n_laguerre(form, b - eps)?;
    Ok(SandwichReport {
        n_b,
        norm_b: report.value,
        constant,
        n_b_minus_eps: n_low,
        lower_holds: n_b <= report.value * (1.0 + BOUND_SLACK),
        upper_holds: report.value + report.tail_bound <= constant * n_low * (1.0 + BOUND_SLACK),
    })
}

/// ‖φ‖_a for a symbol.
pub fn symbol_norm(phi: &OperatorSpec<f64>, a: f64) -> Result<f64> {
    match phi.symbol() {
        Symbol::Polynomial(p) => Ok(norm_b(p, &a)?.value),
        Symbol::Exponential(s) => {
            if s.abs() <= a {
                Ok(1.0)
            } else {
                Err(Error::OutsideRange { c: a, alpha: s.abs() })
            }
        }
        Symbol::Stream(_) => {
            if phi.type_bound() >= a {
                return Err(Error::OutsideRange { c: a, alpha: phi.type_bound() });
            }
            Ok((0..1000)
                .map(|k| {
                    let c = phi.coefficient(k).abs();
                    if c == 0.0 {
                        0.0
                    } else {
                        (c.ln() + ln_factorial(k) - k as f64 * a.ln()).exp()
                    }
                })
                .fold(0.0, f64::max))
        }
    }
}

/// Outcome of comparing ‖φ(Δ_θ)f‖_c with (1 − ab)^{−θ}‖φ‖_a‖f‖_b.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub c: f64,
    pub g_norm: f64,
    pub phi_norm: f64,
    pub f_norm: f64,
    pub bound: f64,
    pub satisfied: bool,
}

pub fn operator_bound_check(phi: &OperatorSpec<f64>, f: &Poly<f64>, a: f64, b: f64, theta: f64) -> Result<BoundReport> {
    if !(a > 0.0 && b > 0.0 && theta >= 0.0) {
        return Err(Error::InvalidInput(format!("need a, b > 0 and theta >= 0, got a = {a}, b = {b}, theta = {theta}")));
    }
    if a * b >= 1.0 {
        return Err(Error::OutsideComposition(a * b));
    }
    let g = apply_phi_of_delta(phi, &theta, f);
    let c = b / (1.0 - a * b);
    let g_norm = norm_b(&g, &c)?.value;
    let phi_norm = symbol_norm(phi, a)?;
    let f_norm = norm_b(f, &b)?.value;
    let bound = (1.0 - a * b).powf(-theta) * phi_norm * f_norm;
    Ok(BoundReport {
        c,
        g_norm,
        phi_norm,
        f_norm,
        bound,
        satisfied: g_norm <= bound * (1.0 + BOUND_SLACK),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::Rational;
    use approx::assert_relative_eq;

    #[test]
    fn norm_of_normalised_monomial_is_exact() {
        for &(p, q) in &[(1i64, 2i64), (1, 1), (2, 1)] {
            let a = ratio(p, q);
            let mut fact = Rational::from_integer(1.into());
            for n in 0..=30usize {
                if n > 0 {
                    fact *= Rational::from_integer(n.into());
                }
                let f = Poly::monomial(n, Rational::from_integer(1.into()) / fact.clone());
                let r = norm_b(&f, &a).unwrap();
                let expected = num_traits::pow::Pow::pow(&a, -(n as i32));
                assert_eq!(r.value, expected, "n = {n}");
            }
        }
    }

    #[test]
    fn norm_b_examples() {
        assert_eq!(norm_b(&Poly::constant(-3.0), &0.7).unwrap().value, 3.0);
        assert_eq!(norm_b(&Poly::new(vec![0.0, 1.0]), &2.0).unwrap().value, 0.5);
        let mut c = vec![1.0];
        for k in 1..=40 {
            c.push(c[k - 1] / k as f64);
        }
        assert_relative_eq!(norm_b(&Poly::new(c), &2.0).unwrap().value, 1.0);
        assert!(norm_b(&Poly::constant(1.0), &0.0).is_err());
    }

    #[test]
    fn mu_examples() {
        let f = LaguerreForm::new(1.0, 0, 0.0, vec![0.25, 0.5]).unwrap();
        assert_eq!(f.mu(1), 0.75);
        assert_eq!(f.mu(2), 0.3125);
        assert_eq!(LaguerreForm::exponential(1.0).mu(3), 0.0);
    }

    #[test]
    fn form_norm_matches_truncated_expansion() {
        let f = LaguerreForm::new(1.5, 2, 0.7, vec![2.0, 0.3]).unwrap();
        for &b in &[0.8, 1.0, 3.0] {
            let r = norm_b_form(&f, b).unwrap();
            let direct = norm_b(&f.expand(120).poly, &b).unwrap().value;
            assert_relative_eq!(r.value, direct, max_relative = 1e-12);
            assert_eq!(r.tail_bound, 0.0);
        }
        assert!(matches!(norm_b_form(&f, 0.5), Err(Error::OutsideRange { .. })));
        let e = LaguerreForm::exponential(2.0);
        assert_eq!(norm_b_form(&e, 2.0).unwrap().value, 1.0);
        assert_relative_eq!(norm_b_form(&LaguerreForm::exponential(-1.0), 2.0).unwrap().value, 1.0);
    }

    #[test]
    fn sequence_bound_examples() {
        let empty = SequenceParams::default();
        assert_eq!(sequence_bound(&empty, 1.0, 3.0, 0, 2.0).unwrap(), 3.0);
        assert_relative_eq!(
            sequence_bound(&empty, 1.0, 1.0, 1, std::f64::consts::E).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-15
        );
        assert_relative_eq!(sequence_bound(&empty, 1.0, 2.0, 2, 2.0).unwrap(), 2.25, max_relative = 1e-15);
    }

    #[test]
    fn sequence_bound_reports_failed_hypothesis() {
        let params = SequenceParams {
            members: vec![
                LaguerreForm::new(1.0, 0, 0.2, vec![0.1]).unwrap(),
                LaguerreForm::new(1.0, 0, 0.5, vec![0.6]).unwrap(),
            ],
        };
        match sequence_bound(&params, 1.0, 1.0, 0, 2.0) {
            Err(Error::Hypothesis { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        let params = SequenceParams {
            members: vec![LaguerreForm::new(1.0, 3, 0.0, vec![]).unwrap()],
        };
        assert!(matches!(sequence_bound(&params, 1.0, 1.0, 2, 2.0), Err(Error::Hypothesis { index: 0, .. })));
    }

    #[test]
    fn sequence_bound_dominates_members() {
        let members = vec![
            LaguerreForm::new(1.0, 0, 0.3, vec![0.5, 0.2]).unwrap(),
            LaguerreForm::new(-0.8, 1, 0.0, vec![1.0]).unwrap(),
            LaguerreForm::new(0.5, 2, -0.4, vec![0.6]).unwrap(),
        ];
        let params = SequenceParams { members: members.clone() };
        for &b in &[1.2, 2.0, 5.0] {
            let k = sequence_bound(&params, 1.0, 1.0, 2, b).unwrap();
            for f in &members {
                assert!(norm_b_form(f, b).unwrap().value <= k * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn sandwich_constant_examples() {
        assert_relative_eq!(sandwich_constant(2.0, 1.0).unwrap(), std::f64::consts::E / 2.0, max_relative = 1e-14);
        assert_relative_eq!(sandwich_constant(1.0, 1.0 - 1e-9).unwrap(), 1.0);
        let brute = (0..200)
            .map(|k| {
                let k = k as f64;
                (ln_factorial(k as usize) - k * k.ln().max(0.0) + k * ((2.0f64 / 3.0).ln() + 1.0)).exp()
            })
            .fold(0.0, f64::max);
        assert_relative_eq!(sandwich_constant(3.0, 1.0).unwrap(), brute, max_relative = 1e-13);
    }

    #[test]
    fn n_norm_examples() {
        assert_eq!(norm_n_laguerre(&LaguerreForm::exponential(0.5), 1.0).unwrap(), 1.0);
        let lin = LaguerreForm::new(1.0, 0, 0.0, vec![2.0]).unwrap();
        assert_eq!(norm_n_laguerre(&lin, 2.5).unwrap(), 1.0);
        let c = 0.5;
        assert_relative_eq!(
            norm_n_laguerre(&lin, c).unwrap(),
            (2.0 / c) * (c / 2.0 - 1.0f64).exp(),
            max_relative = 1e-11
        );
        let sq = LaguerreForm::new(1.0, 0, 0.0, vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(norm_n_laguerre(&sq, 1.0).unwrap(), 4.0 / std::f64::consts::E, max_relative = 1e-11);
        assert!(matches!(norm_n_laguerre(&LaguerreForm::exponential(1.0), 1.0), Err(Error::OutsideRange { .. })));
    }

    #[test]
    fn n_norm_with_zero_at_origin() {
        // z e^{-z} peaks at r = 1 when c = 1 and α = 0
        let f = LaguerreForm::new(1.0, 1, 0.0, vec![]).unwrap();
        assert_relative_eq!(norm_n_laguerre(&f, 1.0).unwrap(), (-1.0f64).exp(), max_relative = 1e-11);
    }

    #[test]
    fn sandwich_holds_on_examples() {
        let f = LaguerreForm::new(1.0, 1, 0.3, vec![1.5, 0.4]).unwrap();
        let r = sandwich_check(&f, 2.0, 0.8).unwrap();
        assert!(r.lower_holds && r.upper_holds, "{r:?}");
    }

    #[test]
    fn bound_check_examples() {
        let f = Poly::new(vec![1.0, -2.0, 0.5, 0.25]);
        let id = operator_bound_check(&OperatorSpec::identity(), &f, 0.5, 0.5, 1.0).unwrap();
        assert!(id.satisfied);
        let phi = OperatorSpec::polynomial(Poly::new(vec![0.3, -1.0, 0.2]));
        let r = operator_bound_check(&phi, &Poly::constant(2.0), 0.5, 0.5, 1.0).unwrap();
        assert_relative_eq!(r.g_norm, 0.6);
        assert!(r.satisfied);
        assert!(matches!(
            operator_bound_check(&phi, &f, 2.0, 0.5, 1.0),
            Err(Error::OutsideComposition(_))
        ));
    }
}
