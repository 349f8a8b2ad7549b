//! Polynomial roots, membership in 𝒫⁺ (real nonpositive zeros only), and the
//! trial harness that certifies zero preservation under κ + Δ_θ, φ(Δ_θ) and
//! exp(aΔ_θ).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use crate::operator::{apply_delta, exp_delta_closed};
use crate::scalar::Scalar;
use crate::series::Poly;

/// Default scale-relative tolerance for zero-location verdicts.
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Bound on max |p(r)| / Σ|c_k||r|^k for an accepted root set.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

const ABERTH_MAX_ITER: usize = 500;
const CLUSTER_RADIUS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMethod {
    Aberth,
    Companion,
    /// Aberth iteration repeated in double-double arithmetic.
    ExtendedAberth,
}

/// All roots of a polynomial, repeated by multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// max over roots of |p(r)| / Σ|c_k||r|^k
    pub residual: f64,
    pub method: RootMethod,
}

impl RootSet {
    /// Roots within 1e-6 of each other merged, with their counts.
    pub fn clusters(&self) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for &r in &self.roots {
            match out.iter_mut().find(|(c, _)| (c - r).norm() <= CLUSTER_RADIUS * (1.0 + r.norm())) {
                Some(entry) => entry.1 += 1,
                None => out.push((r, 1)),
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "roots": self.roots.iter().map(|r| json!([r.re, r.im])).collect::<Vec<_>>(),
            "residual": self.residual,
            "method": self.method,
        })
    }
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn abs_scale(c: &[f64], r: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * r + a.abs())
}

fn residual_of(c: &[f64], roots: &[Complex64]) -> f64 {
    roots
        .iter()
        .map(|&r| {
            let s = abs_scale(c, r.norm());
            if s == 0.0 {
                0.0
            } else {
                horner(c, r).0.norm() / s
            }
        })
        .fold(0.0, f64::max)
}

fn initial_guesses(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let radius = (c[0].abs() / c[n].abs()).powf(1.0 / n as f64);
    (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect()
}

/// Aberth–Ehrlich iteration; returns the iterates and whether all converged.
fn aberth(c: &[f64]) -> (Vec<Complex64>, bool) {
    let n = c.len() - 1;
    let mut z = initial_guesses(c);
    let mut done = vec![false; n];
    for _ in 0..ABERTH_MAX_ITER {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner(c, z[i]);
            if p.norm() <= 4.0 * f64::EPSILON * abs_scale(c, z[i].norm()) {
                done[i] = true;
                continue;
            }
            let newton = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = newton / (1.0 - newton * repulsion);
            if !w.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() <= 2.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return (z, true);
        }
    }
    (z, false)
}

fn companion_roots(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex64> = m.complex_eigenvalues().iter().copied().collect();
    for r in &mut roots {
        for _ in 0..3 {
            let (p, dp) = horner(c, *r);
            let step = p / dp;
            if step.is_finite() {
                *r -= step;
            }
        }
    }
    roots
}

fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Every complex root of `p` (degree ≥ 1).
///
/// Exact zeros at the origin are split off first. The remaining factor goes
/// through Aberth–Ehrlich iteration and, if that stalls, through the
/// eigenvalues of the companion matrix.
pub fn roots(p: &Poly<f64>) -> Result<RootSet> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidInput("root finding needs degree >= 1".into())),
    };
    let c = p.coeffs();
    let zeros = c.iter().take_while(|&&x| x == 0.0).count();
    let core = &c[zeros..];
    let mut found = vec![Complex64::new(0.0, 0.0); zeros];
    let mut method = RootMethod::Aberth;
    if core.len() > 1 {
        let (z, converged) = aberth(core);
        let z = if converged && residual_of(core, &z) <= RESIDUAL_TOLERANCE {
            z
        } else {
            method = RootMethod::Companion;
            let alt = companion_roots(core);
            let res = residual_of(core, &alt);
            if !(res <= RESIDUAL_TOLERANCE) {
                return Err(Error::NonConvergence {
                    iterations: ABERTH_MAX_ITER,
                    partial: alt,
                });
            }
            alt
        };
        found.extend(z);
    }
    debug_assert_eq!(found.len(), deg);
    sort_roots(&mut found);
    Ok(RootSet {
        residual: residual_of(c, &found),
        roots: found,
        method,
    })
}

fn horner_dd(c: &[Dd], z: CDd) -> (CDd, CDd) {
    let mut p = CDd::ZERO;
    let mut dp = CDd::ZERO;
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + CDd::new(a, Dd::ZERO);
    }
    (p, dp)
}

/// Aberth iteration in double-double, started from f64 roots of the same
/// polynomial. Zeros at the origin must already be split off.
fn refine_dd(c: &[Dd], start: &[Complex64]) -> Vec<Complex64> {
    let n = start.len();
    let mut z: Vec<CDd> = start.iter().map(|&r| CDd::from(r)).collect();
    for _ in 0..80 {
        let mut biggest = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner_dd(c, z[i]);
            if p == CDd::ZERO {
                continue;
            }
            let newton = p / dp;
            let mut repulsion = CDd::ZERO;
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d != CDd::ZERO {
                        repulsion = repulsion + CDd::ONE / d;
                    }
                }
            }
            let w = CDd::ONE - newton * repulsion;
            let w = newton / w;
            if !w.to_c64().is_finite() {
                continue;
            }
            z[i] = z[i] - w;
            biggest = biggest.max(w.abs_f64() / z[i].abs_f64().max(f64::MIN_POSITIVE));
        }
        if biggest < 1e-30 {
            break;
        }
    }
    z.into_iter().map(CDd::to_c64).collect()
}

/// Extended-precision root set from double-double coefficients.
fn roots_dd(c: &[Dd], seed: &RootSet) -> RootSet {
    let zeros = c.iter().take_while(|x| x.hi == 0.0).count();
    let core = &c[zeros..];
    let mut start: Vec<Complex64> = seed.roots.iter().copied().filter(|r| r.norm() != 0.0).collect();
    start.truncate(core.len() - 1);
    let mut found = vec![Complex64::new(0.0, 0.0); zeros];
    found.extend(refine_dd(core, &start));
    sort_roots(&mut found);
    let c64: Vec<f64> = c.iter().map(|x| x.to_f64()).collect();
    RootSet {
        residual: residual_of(&c64, &found),
        roots: found,
        method: RootMethod::ExtendedAberth,
    }
}

/// Scale-relative distance of a root set from the nonpositive real axis:
/// (max |Im r|, max(Re r, 0)) divided by 1 + max |r|.
pub fn axis_excess(rs: &RootSet) -> (f64, f64) {
    let scale = 1.0 + rs.roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let im = rs.roots.iter().map(|r| r.im.abs()).fold(0.0, f64::max);
    let re = rs.roots.iter().map(|r| r.re.max(0.0)).fold(0.0, f64::max);
    (im / scale, re / scale)
}

/// Roots of `p` with a double-double recheck when the f64 roots leave the
/// nonpositive axis by more than `tol`.
pub fn certified_roots<T: Scalar>(p: &Poly<T>, tol: f64) -> Result<RootSet> {
    let rs = roots(&p.to_f64())?;
    let (im, re) = axis_excess(&rs);
    if im <= tol && re <= tol {
        return Ok(rs);
    }
    let c: Vec<Dd> = p.coeffs().iter().map(Scalar::to_dd).collect();
    Ok(roots_dd(&c, &rs))
}

/// True iff every root lies within `tol·(1 + max|r|)` of the nonpositive
/// real axis. Nonzero constants have no roots and qualify.
pub fn classify_p_plus<T: Scalar>(p: &Poly<T>, tol: f64) -> Result<bool> {
    match p.degree() {
        None => Err(Error::InvalidInput("classification needs a nonzero polynomial".into())),
        Some(0) => Ok(true),
        Some(_) => {
            let (im, re) = axis_excess(&certified_roots(p, tol)?);
            Ok(im <= tol && re <= tol)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The output vanished identically.
    VacuousPass,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self != Verdict::Fail
    }
}

/// Zero locations of an operator output, with the verdict at `tolerance`.
#[derive(Clone, Debug)]
pub struct PreservationReport {
    pub input_class: &'static str,
    pub output: Poly<f64>,
    pub output_roots: RootSet,
    pub max_imag: f64,
    pub max_real_part: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl PreservationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "input_class": self.input_class,
            "output": self.output.to_json(),
            "output_roots": self.output_roots.to_json(),
            "max_imag": self.max_imag,
            "max_real_part": self.max_real_part,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        })
    }
}

fn certify<T: Scalar>(out: &Poly<T>, tol: f64) -> Result<PreservationReport> {
    let empty = RootSet {
        roots: Vec::new(),
        residual: 0.0,
        method: RootMethod::Aberth,
    };
    let (rs, verdict) = match out.degree() {
        None => (empty, Verdict::VacuousPass),
        Some(0) => (empty, Verdict::Pass),
        Some(_) => {
            let rs = certified_roots(out, tol)?;
            let (im, re) = axis_excess(&rs);
            let v = if im <= tol && re <= tol { Verdict::Pass } else { Verdict::Fail };
            (rs, v)
        }
    };
    let (max_imag, max_real_part) = axis_excess(&rs);
    Ok(PreservationReport {
        input_class: "P+",
        output: out.to_f64(),
        output_roots: rs,
        max_imag,
        max_real_part,
        tolerance: tol,
        verdict,
    })
}

fn require_p_plus<T: Scalar>(p: &Poly<T>, what: &str, tol: f64) -> Result<()> {
    if p.is_zero() || !classify_p_plus(p, tol)? {
        return Err(Error::InvalidInput(format!("{what} is not in P+")));
    }
    Ok(())
}

/// (κ + Δ_θ)p for p ∈ 𝒫⁺.
pub fn preservation_trial<T: Scalar>(p: &Poly<T>, kappa: &T, theta: &T, tol: f64) -> Result<PreservationReport> {
    if *kappa < T::zero() || *theta < T::zero() {
        return Err(Error::InvalidInput("kappa and theta must be nonnegative".into()));
    }
    require_p_plus(p, "input", tol)?;
    let out = &p.scale(kappa) + &apply_delta(theta, p);
    certify(&out, tol)
}

/// φ(Δ_θ)f for φ, f ∈ 𝒫⁺, applied as the product of stages (κ_j + Δ_θ)
/// where −κ_j runs over the roots of φ.
pub fn phi_preservation_trial<T: Scalar>(phi: &Poly<T>, f: &Poly<T>, theta: &T, tol: f64) -> Result<PreservationReport> {
    if *theta < T::zero() {
        return Err(Error::InvalidInput("theta must be nonnegative".into()));
    }
    require_p_plus(phi, "phi", tol)?;
    require_p_plus(f, "f", tol)?;
    let out = staged_phi(phi, f, theta, tol)?;
    certify(&out, tol)
}

fn staged_phi<T: Scalar>(phi: &Poly<T>, f: &Poly<T>, theta: &T, tol: f64) -> Result<Poly<T>> {
    let lead = phi.leading().cloned().unwrap_or_else(T::zero);
    let mut g = f.clone();
    if phi.degree().unwrap_or(0) > 0 {
        for r in certified_roots(phi, tol)?.roots {
            let kappa = T::from_f64((-r.re).max(0.0)).expect("finite root");
            g = &g.scale(&kappa) + &apply_delta(theta, &g);
        }
    }
    Ok(g.scale(&lead))
}

/// exp(aΔ_θ)f for f ∈ 𝒫⁺ and a ≥ 0.
pub fn exp_preservation_trial<T: Scalar>(a: &T, theta: &T, f: &Poly<T>, tol: f64) -> Result<PreservationReport> {
    if *a < T::zero() || *theta < T::zero() {
        return Err(Error::InvalidInput("a and theta must be nonnegative".into()));
    }
    require_p_plus(f, "input", tol)?;
    certify(&exp_delta_closed(a, theta, f), tol)
}

/// A random member of 𝒫⁺ of degree ≤ `max_degree`: roots −exp(U[−3, 3]),
/// up to two zeros at the origin, leading coefficient in [0.5, 2].
pub fn random_p_plus<T: Scalar>(rng: &mut impl Rng, max_degree: usize) -> Poly<T> {
    let origin = rng.random_range(0..=2usize.min(max_degree));
    let others = rng.random_range(0..=max_degree - origin);
    let roots: Vec<T> = (0..others)
        .map(|_| T::from_f64(-rng.random_range(-3.0f64..=3.0).exp()).expect("finite"))
        .collect();
    let lead = T::from_f64(rng.random_range(0.5f64..=2.0)).expect("finite");
    let mut p = Poly::from_roots(lead, &roots);
    for _ in 0..origin {
        p = p.shift_up();
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn root_examples() {
        let r = roots(&Poly::new(vec![2.0, 3.0, 1.0])).unwrap();
        assert!(close(r.roots[0], Complex64::new(-2.0, 0.0), 1e-14));
        assert!(close(r.roots[1], Complex64::new(-1.0, 0.0), 1e-14));
        let r = roots(&Poly::new(vec![1.0, 0.0, 1.0])).unwrap();
        for want in [Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0)] {
            assert!(r.roots.iter().any(|&z| close(z, want, 1e-14)));
        }
        let r = roots(&Poly::new(vec![1.0, 3.0, 3.0, 1.0])).unwrap();
        assert_eq!(r.roots.len(), 3);
        assert!(r.residual <= 1e-10);
        assert!(r.roots.iter().all(|&z| close(z, Complex64::new(-1.0, 0.0), 1e-4)));
        let r = roots(&Poly::new(vec![1.0, 2.0, 1.0])).unwrap();
        assert_eq!(r.clusters(), vec![(r.roots[0], 2)]);
        assert!(roots(&Poly::constant(1.0)).is_err());
    }

    #[test]
    fn zero_roots_are_split_exactly() {
        let r = roots(&Poly::new(vec![0.0, 0.0, 2.0, 1.0])).unwrap();
        assert_eq!(r.roots.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(close(r.roots[0], Complex64::new(-2.0, 0.0), 1e-14));
    }

    #[test]
    fn wide_spread_roots() {
        let rts: Vec<f64> = (0..12).map(|k| -(-3.0 + 0.5 * k as f64).exp()).collect();
        let p = Poly::from_roots(1.0, &rts);
        let r = roots(&p).unwrap();
        assert!(r.residual <= RESIDUAL_TOLERANCE);
        for (got, want) in r.roots.iter().zip(rts.iter().rev()) {
            assert!((got.re - want).abs() <= 1e-8 * want.abs(), "{got} vs {want}");
        }
    }

    #[test]
    fn classification_examples() {
        assert!(classify_p_plus(&Poly::new(vec![1.0, 3.0, 2.0]), 1e-7).unwrap());
        assert!(!classify_p_plus(&Poly::new(vec![1.0, 0.0, 1.0]), 1e-7).unwrap());
        assert!(classify_p_plus(&Poly::monomial(3, 1.0), 1e-7).unwrap());
        assert!(!classify_p_plus(&Poly::new(vec![-1.0, 1.0]), 1e-7).unwrap());
    }

    #[test]
    fn extended_recheck_resolves_a_cluster() {
        // (1+z)^4 (2+z): the fourfold root scatters by ~1e-4 in f64
        let p = Poly::from_roots(Rational::from_integer(1.into()), &[-1, -1, -1, -1, -2].map(|x| Rational::from_integer(x.into())));
        assert!(classify_p_plus(&p, 1e-7).unwrap());
    }

    #[test]
    fn preservation_examples() {
        let p = Poly::new(vec![1.0, 2.0, 1.0]);
        let r = preservation_trial(&p, &0.0, &1.0, 1e-7).unwrap();
        assert_eq!(r.output, Poly::new(vec![2.0, 4.0, 2.0]).truncate(1));
        assert!(close(r.output_roots.roots[0], Complex64::new(-0.5, 0.0), 1e-15));
        assert_eq!(r.verdict, Verdict::Pass);

        let r = preservation_trial(&Poly::constant(3.0), &2.0, &1.0, 1e-7).unwrap();
        assert_eq!(r.output, Poly::constant(6.0));
        assert_eq!(r.verdict, Verdict::Pass);

        let r = preservation_trial(&Poly::constant(3.0), &0.0, &1.0, 1e-7).unwrap();
        assert_eq!(r.verdict, Verdict::VacuousPass);

        let r = preservation_trial(&Poly::monomial(2, 1.0), &0.0, &0.5, 1e-7).unwrap();
        assert_eq!(r.output, Poly::monomial(1, 3.0));
        assert_eq!(r.output_roots.roots, vec![Complex64::new(0.0, 0.0)]);

        assert!(preservation_trial(&Poly::new(vec![1.0, 0.0, 1.0]), &0.0, &1.0, 1e-7).is_err());
    }

    #[test]
    fn phi_preservation_examples() {
        let f = Poly::new(vec![1.0, 2.0, 1.0]);
        let r = phi_preservation_trial(&Poly::new(vec![1.0, 1.0]), &f, &1.0, 1e-7).unwrap();
        let want = [3.0, 6.0, 1.0];
        for (a, b) in r.output.coeffs().iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(r.verdict, Verdict::Pass);
        let r = phi_preservation_trial(&Poly::constant(2.5), &f, &1.0, 1e-7).unwrap();
        assert_eq!(r.output, f.scale(&2.5));
        assert!(phi_preservation_trial(&Poly::new(vec![1.0, 0.0, 1.0]), &f, &1.0, 1e-7).is_err());
    }

    #[test]
    fn exp_preservation_examples() {
        let f = Poly::monomial(2, 1.0);
        let r = exp_preservation_trial(&1.0, &1.0, &f, 1e-7).unwrap();
        assert_eq!(r.output, Poly::new(vec![2.0, 4.0, 1.0]));
        let s = 2f64.sqrt();
        assert!(close(r.output_roots.roots[0], Complex64::new(-2.0 - s, 0.0), 1e-14));
        assert!(close(r.output_roots.roots[1], Complex64::new(-2.0 + s, 0.0), 1e-14));
        let r = exp_preservation_trial(&0.0, &1.0, &f, 1e-7).unwrap();
        assert_eq!(r.output, f);
        let r = exp_preservation_trial(&0.7, &2.0, &Poly::monomial(1, 1.0), 1e-7).unwrap();
        assert!(close(r.output_roots.roots[0], Complex64::new(-1.4, 0.0), 1e-14));
    }

    #[test]
    fn random_members_classify() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p: Poly<Rational> = random_p_plus(&mut rng, 12);
            assert!(p.degree().unwrap() <= 12);
            assert!(classify_p_plus(&p, 1e-7).unwrap());
        }
    }
}
