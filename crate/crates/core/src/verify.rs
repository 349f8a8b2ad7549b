//! Property and oracle suites. Each suite runs a fixed grid or a seeded batch
//! of random trials and reports the worst error against its tolerance.
//!
//! Random trials draw from a ChaCha8 stream selected by (seed, trial index),
//! so results do not depend on thread scheduling.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::evolution::{default_dt, pde_residual, radial_identity_check, stabilization_profile, InitialData};
use crate::integral::{exp_delta_integral, gauss_laguerre_rule, moment_relative_error};
use crate::norms::{norm_b, operator_bound_check, sandwich_check};
use crate::operator::{exp_delta_closed, laguerre_poly, laguerre_rodrigues, vandermonde_residual, OperatorSpec};
use crate::scalar::{rational, ratio};
use crate::series::{LaguerreForm, Poly};
use crate::zeros::{exp_preservation_trial, phi_preservation_trial, preservation_trial, random_p_plus, DEFAULT_TOLERANCE};
use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Laguerre,
    Semigroup,
    Integral,
    Preservation,
    PhiPreservation,
    ExpPreservation,
    Bound,
    NormIdentity,
    Sandwich,
    Vandermonde,
    Pde,
    Stabilization,
    Quadrature,
    Radial,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Laguerre,
        Suite::Semigroup,
        Suite::Integral,
        Suite::Preservation,
        Suite::PhiPreservation,
        Suite::ExpPreservation,
        Suite::Bound,
        Suite::NormIdentity,
        Suite::Sandwich,
        Suite::Vandermonde,
        Suite::Pde,
        Suite::Stabilization,
        Suite::Quadrature,
        Suite::Radial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Laguerre => "laguerre",
            Suite::Semigroup => "semigroup",
            Suite::Integral => "integral",
            Suite::Preservation => "preservation",
            Suite::PhiPreservation => "phi-preservation",
            Suite::ExpPreservation => "exp-preservation",
            Suite::Bound => "bound",
            Suite::NormIdentity => "norm-identity",
            Suite::Sandwich => "sandwich",
            Suite::Vandermonde => "vandermonde",
            Suite::Pde => "pde",
            Suite::Stabilization => "stabilization",
            Suite::Quadrature => "quadrature",
            Suite::Radial => "radial",
        }
    }

    /// Trial count used when none is given. Grid suites ignore the count.
    pub fn default_trials(self) -> usize {
        match self {
            Suite::Semigroup | Suite::Vandermonde | Suite::Radial => 200,
            Suite::Preservation | Suite::PhiPreservation | Suite::ExpPreservation => 1000,
            Suite::Bound => 500,
            Suite::Sandwich => 50,
            _ => 0,
        }
    }

    pub fn is_randomized(self) -> bool {
        self.default_trials() > 0
    }

    pub fn statement(self) -> &'static str {
        match self {
            Suite::Laguerre => "exp(-Δθ)z^n matches the Rodrigues route for n <= 15",
            Suite::Semigroup => "exp(aΔθ)exp(a'Δθ)f = exp((a+a')Δθ)f for deg f <= 12, a, a' in [-1, 1]",
            Suite::Integral => "quadrature route of exp(aΔθ)z^m matches the closed form at Q = 80",
            Suite::Preservation => "(κ + Δθ) keeps zeros real and nonpositive",
            Suite::PhiPreservation => "staged φ(Δθ) keeps zeros real and nonpositive",
            Suite::ExpPreservation => "exp(aΔθ), a >= 0, keeps zeros real and nonpositive",
            Suite::Bound => "‖φ(Δθ)f‖_c <= (1-ab)^(-θ)‖φ‖_a‖f‖_b with c = b/(1-ab)",
            Suite::NormIdentity => "‖z^n/n!‖_a = a^(-n) exactly for n <= 30",
            Suite::Sandwich => "N_b(f) <= ‖f‖_b <= C(b,ε)N_(b-ε)(f) on Laguerre forms",
            Suite::Vandermonde => "Vandermonde-type Gamma convolution holds for m, k <= 12",
            Suite::Pde => "frames solve ∂_t f = Δθ f on a 10 x 10 (t, z) grid",
            Suite::Stabilization => "e^(-z) evolved with θ = 1 decays on |z| <= 1",
            Suite::Quadrature => "Gauss rules integrate s^j exactly for j <= 2Q-1",
            Suite::Radial => "(Δθ f)(z²) = ¼[((2θ-1)/z)g' + g''] with g(z) = f(z²)",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteConfig {
    pub trials: Option<usize>,
    pub seed: u64,
    /// Override for the suite's tolerance.
    pub tolerance: Option<f64>,
    /// Keep one JSON record per trial.
    pub records: bool,
}


#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub failures: usize,
    pub max_error: f64,
    pub tolerance: f64,
    /// Descriptions of the first few failures.
    pub notes: Vec<String>,
    pub records: Vec<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "statement": self.suite.statement(),
            "trials": self.trials,
            "failures": self.failures,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "passed": self.passed(),
            "notes": self.notes,
        })
    }
}

struct Outcome {
    error: f64,
    ok: bool,
    note: String,
    record: Option<Value>,
}

impl Outcome {
    fn within(error: f64, tol: f64, note: impl Into<String>) -> Self {
        Outcome {
            error,
            ok: error <= tol,
            note: note.into(),
            record: None,
        }
    }

    fn from_result(r: Result<Outcome>, note: &str) -> Self {
        r.unwrap_or_else(|e| Outcome {
            error: f64::INFINITY,
            ok: false,
            note: format!("{note}: {e}"),
            record: None,
        })
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_trials(n: usize, seed: u64, f: impl Fn(usize, &mut ChaCha8Rng) -> Outcome + Sync) -> Vec<Outcome> {
    (0..n)
        .into_par_iter()
        .map(|i| f(i, &mut trial_rng(seed, i)))
        .collect()
}

fn summarize(suite: Suite, tolerance: f64, outcomes: Vec<Outcome>, keep_records: bool) -> SuiteReport {
    let trials = outcomes.len();
    let failures = outcomes.iter().filter(|o| !o.ok).count();
    let max_error = outcomes.iter().map(|o| o.error).fold(0.0, f64::max);
    let notes = outcomes.iter().filter(|o| !o.ok).take(5).map(|o| o.note.clone()).collect();
    let records = if keep_records {
        outcomes.into_iter().filter_map(|o| o.record).collect()
    } else {
        Vec::new()
    };
    SuiteReport {
        suite,
        trials,
        failures,
        max_error,
        tolerance,
        notes,
        records,
    }
}

fn random_poly(rng: &mut impl Rng, max_degree: usize) -> Poly<f64> {
    let d = rng.random_range(0..=max_degree);
    Poly::new((0..=d).map(|_| rng.random_range(-1.0..=1.0)).collect())
}

/// Largest coefficientwise |x_k − y_k| / scale_k.
fn scaled_gap(x: &Poly<f64>, y: &Poly<f64>, scale: &Poly<f64>) -> f64 {
    (0..=scale.degree().unwrap_or(0))
        .map(|k| {
            let s = scale.coeff(k);
            let d = (x.coeff(k) - y.coeff(k)).abs();
            if s == 0.0 {
                if d == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                d / s
            }
        })
        .fold(0.0, f64::max)
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    let trials = cfg.trials.unwrap_or(suite.default_trials());
    let seed = cfg.seed;
    let tol = |default: f64| cfg.tolerance.unwrap_or(default);
    match suite {
        Suite::Laguerre => {
            let t = tol(1e-10);
            summarize(suite, t, laguerre_outcomes(t), false)
        }
        Suite::Semigroup => {
            let t = tol(1e-9);
            summarize(suite, t, random_trials(trials, seed, |i, rng| semigroup_trial(i, rng, t)), false)
        }
        Suite::Integral => {
            let t = tol(1e-8);
            summarize(suite, t, integral_outcomes(t), false)
        }
        Suite::Preservation | Suite::PhiPreservation | Suite::ExpPreservation => {
            let t = tol(DEFAULT_TOLERANCE);
            let outcomes = random_trials(trials, seed, |i, rng| {
                Outcome::from_result(preservation_outcome(suite, i, rng, t), &format!("trial {i}"))
            });
            summarize(suite, t, outcomes, cfg.records)
        }
        Suite::Bound => {
            let outcomes = random_trials(trials, seed, |i, rng| Outcome::from_result(bound_trial(rng), &format!("trial {i}")));
            summarize(suite, 1.0 + crate::norms::BOUND_SLACK, outcomes, false)
        }
        Suite::NormIdentity => summarize(suite, 0.0, norm_identity_outcomes(), false),
        Suite::Sandwich => {
            let outcomes = random_trials(trials, seed, |i, rng| Outcome::from_result(sandwich_trial(i, rng), &format!("trial {i}")));
            summarize(suite, 1.0 + crate::norms::BOUND_SLACK, outcomes, false)
        }
        Suite::Vandermonde => {
            let t = tol(1e-10);
            let outcomes = random_trials(trials, seed, |i, rng| {
                let z = if i % 10 == 0 {
                    Complex64::new(1.5, 0.5)
                } else {
                    Complex64::new(rng.random_range(0.5..=5.0), 0.0)
                };
                let (m, k) = (rng.random_range(0..=12), rng.random_range(0..=12));
                let note = format!("z = {z}, m = {m}, k = {k}");
                Outcome::from_result(vandermonde_residual(z, m, k).map(|e| Outcome::within(e, t, &note)), &note)
            });
            summarize(suite, t, outcomes, false)
        }
        Suite::Pde => {
            let t = tol(1e-8);
            summarize(suite, t, pde_outcomes(seed, t), false)
        }
        Suite::Stabilization => {
            let t = tol(1.1e-3);
            summarize(suite, t, vec![stabilization_outcome(t)], false)
        }
        Suite::Quadrature => {
            let t = tol(1e-10);
            summarize(suite, t, quadrature_outcomes(t), false)
        }
        Suite::Radial => {
            let t = tol(1e-10);
            let outcomes = random_trials(trials, seed, |_, rng| {
                let f = random_poly(rng, 10);
                let theta = rng.random_range(0.0..=3.0);
                let z = Complex64::from_polar(rng.random_range(0.05..=2.0), rng.random_range(0.0..std::f64::consts::TAU));
                let note = format!("f = {f}, theta = {theta}, z = {z}");
                Outcome::from_result(radial_identity_check(&f, theta, z).map(|e| Outcome::within(e, t, &note)), &note)
            });
            summarize(suite, t, outcomes, false)
        }
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|&s| run_suite(s, cfg)).collect()
}

fn laguerre_outcomes(tol: f64) -> Vec<Outcome> {
    let mut out = Vec::new();
    for &theta in &[0.5, 1.0, 2.0, 3.5] {
        for n in 0..=15 {
            let note = format!("floating theta = {theta}, n = {n}");
            let a: Poly<f64> = laguerre_poly(n, &theta);
            let r = laguerre_rodrigues(n, &theta).map(|b: Poly<f64>| {
                let e = (0..=n)
                    .map(|k| (a.coeff(k) - b.coeff(k)).abs() / b.coeff(k).abs())
                    .fold(0.0, f64::max);
                Outcome::within(e, tol, &note)
            });
            out.push(Outcome::from_result(r, &note));
        }
    }
    for theta in [1i64, 2] {
        let th = ratio(theta, 1);
        for n in 0..=15 {
            let note = format!("exact theta = {theta}, n = {n}");
            let r = laguerre_rodrigues(n, &th).map(|b| {
                let e = if laguerre_poly(n, &th) == b { 0.0 } else { f64::INFINITY };
                Outcome::within(e, 0.0, &note)
            });
            out.push(Outcome::from_result(r, &note));
        }
    }
    out
}

fn random_rational(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    ratio(rng.random_range(-num..=num), rng.random_range(1..=den))
}

fn semigroup_trial(i: usize, rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let d = rng.random_range(0..=12usize);
    let fq = Poly::new((0..=d).map(|_| random_rational(rng, 9, 9)).collect());
    let (aq, bq) = (random_rational(rng, 32, 32), random_rational(rng, 32, 32));
    let (aq, bq) = (clamp_unit(aq), clamp_unit(bq));
    let one = ratio(1, 1);
    let exact_ok = exp_delta_closed(&aq, &one, &exp_delta_closed(&bq, &one, &fq)) == exp_delta_closed(&(aq.clone() + bq.clone()), &one, &fq);

    let f = random_poly(rng, 12);
    let (a, b) = (rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
    let theta = rng.random_range(0.0..=3.0);
    let two = exp_delta_closed(&a, &theta, &exp_delta_closed(&b, &theta, &f));
    let one_step = exp_delta_closed(&(a + b), &theta, &f);
    let abs_f = Poly::new(f.coeffs().iter().map(|c| c.abs()).collect());
    let scale = exp_delta_closed(&a.abs(), &theta, &exp_delta_closed(&b.abs(), &theta, &abs_f));
    let e = scaled_gap(&two, &one_step, &scale);
    let note = format!("trial {i}: a = {a}, a' = {b}, theta = {theta}, exact agreement = {exact_ok}");
    let mut o = Outcome::within(if exact_ok { e } else { f64::INFINITY }, tol, note);
    o.ok &= exact_ok;
    o
}

fn clamp_unit(x: Rational) -> Rational {
    let one = ratio(1, 1);
    if x > one {
        one
    } else if x < -one.clone() {
        -one
    } else {
        x
    }
}

/// Error of the quadrature route relative to |closed| or, near a zero of the
/// closed form, relative to Σ|c_k||z|^k.
pub fn integral_error(value: Complex64, closed: &Poly<f64>, z: Complex64) -> f64 {
    let w = closed.eval_complex(z);
    let scale = closed.abs_eval(z.norm());
    let denom = if w.norm() < 1e-3 * scale { scale } else { w.norm() };
    (value - w).norm() / denom
}

/// The z grid used by the integral suite: radii 0..4, sixteen directions.
pub fn integral_grid() -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    for r in [0.5, 1.0, 2.0, 3.0, 4.0] {
        for k in 0..16 {
            out.push(Complex64::from_polar(r, k as f64 * std::f64::consts::PI / 8.0));
        }
    }
    out
}

fn integral_outcomes(tol: f64) -> Vec<Outcome> {
    let grid = integral_grid();
    let cases: Vec<(f64, f64, usize)> = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .flat_map(|&th| [0.25, 0.5, 1.0].iter().flat_map(move |&a| (0..=10).map(move |m| (th, a, m))))
        .collect();
    let rules: Vec<_> = [0.5, 1.0, 2.0, 4.0]
        .par_iter()
        .map(|&th| gauss_laguerre_rule(th, 80).expect("theta > 0"))
        .collect();
    cases
        .par_iter()
        .map(|&(theta, a, m)| {
            let rule = &rules[[0.5, 1.0, 2.0, 4.0].iter().position(|&x| x == theta).unwrap()];
            let f = Poly::monomial(m, 1.0);
            let closed = exp_delta_closed(&a, &theta, &f);
            let mut worst = (0.0f64, Complex64::new(0.0, 0.0));
            for &z in &grid {
                let e = match exp_delta_integral(a, &f, z, rule) {
                    Ok(v) => integral_error(v, &closed, z),
                    Err(_) => f64::INFINITY,
                };
                if !(e <= worst.0) {
                    worst = (e, z);
                }
            }
            Outcome::within(worst.0, tol, format!("theta = {theta}, a = {a}, m = {m}, z = {}", worst.1))
        })
        .collect()
}

fn preservation_outcome(suite: Suite, i: usize, rng: &mut ChaCha8Rng, tol: f64) -> Result<Outcome> {
    let theta_f = rng.random_range(0.0..=3.0);
    let theta = rational(theta_f);
    let (report, input) = match suite {
        Suite::Preservation => {
            let p: Poly<Rational> = random_p_plus(rng, 12);
            let kappa_f = rng.random_range(0.0..=3.0);
            let r = preservation_trial(&p, &rational(kappa_f), &theta, tol)?;
            (r, json!({"p": p.to_f64().to_json(), "kappa": kappa_f, "theta": theta_f}))
        }
        Suite::PhiPreservation => {
            let phi: Poly<Rational> = random_p_plus(rng, 8);
            let f: Poly<Rational> = random_p_plus(rng, 8);
            let r = phi_preservation_trial(&phi, &f, &theta, tol)?;
            (r, json!({"phi": phi.to_f64().to_json(), "f": f.to_f64().to_json(), "theta": theta_f}))
        }
        _ => {
            let f: Poly<Rational> = random_p_plus(rng, 12);
            let a_f = rng.random_range(0.0..=2.0);
            let r = exp_preservation_trial(&rational(a_f), &theta, &f, tol)?;
            (r, json!({"f": f.to_f64().to_json(), "a": a_f, "theta": theta_f}))
        }
    };
    let error = report.max_imag.max(report.max_real_part);
    let record = json!({"suite": suite.name(), "trial": i, "input": input, "report": report.to_json()});
    Ok(Outcome {
        error,
        ok: report.verdict.passed(),
        note: format!("trial {i}: {input}"),
        record: Some(record),
    })
}

/// Error is ‖g‖_c divided by the bound, so a pass means error ≤ 1 + slack.
fn bound_trial(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let phi = random_poly(rng, 10);
    let f = random_poly(rng, 10);
    let a: f64 = rng.random_range(0.1..=2.0);
    let b = rng.random_range(0.05..(0.99 / a).min(3.0));
    let theta = rng.random_range(0.0..=3.0);
    let r = operator_bound_check(&OperatorSpec::polynomial(phi.clone()), &f, a, b, theta)?;
    let ratio = if r.bound == 0.0 { 0.0 } else { r.g_norm / r.bound };
    Ok(Outcome {
        error: ratio,
        ok: r.satisfied,
        note: format!("phi = {phi}, f = {f}, a = {a}, b = {b}, theta = {theta}"),
        record: None,
    })
}

fn norm_identity_outcomes() -> Vec<Outcome> {
    let mut out = Vec::new();
    for (p, q) in [(1, 2), (1, 1), (2, 1)] {
        let a = ratio(p, q);
        let mut fact = ratio(1, 1);
        for n in 0..=30usize {
            if n > 0 {
                fact *= ratio(n as i64, 1);
            }
            let f = Poly::monomial(n, ratio(1, 1) / fact.clone());
            let expected = num_traits::pow::Pow::pow(&a, -(n as i32));
            let ok = norm_b(&f, &a).map(|r| r.value == expected).unwrap_or(false);
            out.push(Outcome::within(if ok { 0.0 } else { f64::INFINITY }, 0.0, format!("a = {p}/{q}, n = {n}")));
        }
    }
    out
}

/// Error is the larger of the two sandwich ratios; a pass means ≤ 1 + slack.
fn sandwich_trial(i: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let c = rng.random_range(0.5..=2.0);
    let l = rng.random_range(0..=3usize);
    let alpha = if i.is_multiple_of(5) { 0.0 } else { rng.random_range(0.0..=1.0) };
    let nb = rng.random_range(0..=4usize);
    let betas = (0..nb).map(|_| rng.random_range(0.0..=2.0)).collect();
    let form = LaguerreForm::new(c, l, alpha, betas)?;
    let b = alpha + rng.random_range(0.5..=3.0);
    let eps = rng.random_range(0.05..=0.95) * (b - alpha);
    let r = sandwich_check(&form, b, eps)?;
    let error = (r.n_b / r.norm_b).max(r.norm_b / (r.constant * r.n_b_minus_eps));
    Ok(Outcome {
        error,
        ok: r.lower_holds && r.upper_holds,
        note: format!("form = {}, b = {b}, eps = {eps}", form.to_json()),
        record: None,
    })
}

/// The five initial data of the evolution suite as (data, θ).
pub fn pde_cases(seed: u64) -> Vec<(InitialData<f64>, f64)> {
    let mut rng = trial_rng(seed, usize::MAX);
    let deg10 = Poly::new((0..=10).map(|_| rng.random_range(-1.0..=1.0)).collect());
    vec![
        (InitialData { epsilon: 0.0, h: Poly::new(vec![0.0, 1.0]) }, 1.5),
        (InitialData { epsilon: 0.0, h: deg10 }, 0.5),
        (InitialData { epsilon: 1.0, h: Poly::constant(1.0) }, 1.0),
        (InitialData { epsilon: 1.0, h: Poly::new(vec![1.0, 1.0]) }, 2.0),
        (InitialData { epsilon: 0.5, h: Poly::from_roots(1.0, &[0.0, -1.0, -2.0]) }, 0.0),
    ]
}

fn pde_outcomes(seed: u64, tol: f64) -> Vec<Outcome> {
    let cases = pde_cases(seed);
    let ts: Vec<f64> = (1..=10).map(|i| 0.2 * i as f64).collect();
    let zs: Vec<Complex64> = (1..=10).map(|j| Complex64::from_polar(0.25 * j as f64, 0.7 * j as f64)).collect();
    cases
        .par_iter()
        .enumerate()
        .flat_map_iter(|(c, (data, theta))| {
            let ts = &ts;
            zs.iter().flat_map(move |&z| {
                ts.iter().map(move |&t| {
                    let note = format!("case {c}, t = {t}, z = {z}");
                    Outcome::from_result(
                        pde_residual(data, *theta, t, z, default_dt(t)).map(|e| Outcome::within(e, tol, &note)),
                        &note,
                    )
                })
            })
        })
        .collect()
}

/// Time grid of the stabilization suite: 0, ½ and 31 log-spaced points on [1, 1000].
pub fn stabilization_times() -> Vec<f64> {
    let mut t = vec![0.0, 0.5];
    t.extend((0..=30).map(|k| 10f64.powf(k as f64 / 10.0)));
    t
}

fn stabilization_outcome(tol: f64) -> Outcome {
    let data = InitialData {
        epsilon: 1.0,
        h: Poly::constant(1.0),
    };
    let r = stabilization_profile(&data, 1.0, &stabilization_times(), 1.0).map(|p| {
        let last = p.rows.last().map(|r| r.1).unwrap_or(f64::INFINITY);
        let monotone = p.decreasing_from(1.0);
        let mut o = Outcome::within(last, tol, format!("sup at t = 1000 is {last:e}, decreasing for t >= 1: {monotone}"));
        o.ok &= monotone;
        o
    });
    Outcome::from_result(r, "stabilization")
}

fn quadrature_outcomes(tol: f64) -> Vec<Outcome> {
    [16usize, 80]
        .iter()
        .flat_map(|&q| [0.5, 1.0, 2.0, 4.0].into_iter().map(move |th| (q, th)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(q, theta)| {
            let note = format!("Q = {q}, theta = {theta}");
            let r = gauss_laguerre_rule(theta, q).map(|rule| {
                let e = (0..2 * q).map(|j| moment_relative_error(&rule, j)).fold(0.0, f64::max);
                Outcome::within(e, tol, &note)
            });
            Outcome::from_result(r, &note)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn trials_are_reproducible() {
        let cfg = SuiteConfig {
            trials: Some(20),
            seed: 11,
            ..Default::default()
        };
        let a = run_suite(Suite::Bound, &cfg);
        let b = run_suite(Suite::Bound, &cfg);
        assert_eq!(a.max_error, b.max_error);
        assert!(a.passed());
    }

    #[test]
    fn records_are_kept_on_request() {
        let cfg = SuiteConfig {
            trials: Some(5),
            records: true,
            ..Default::default()
        };
        let r = run_suite(Suite::Preservation, &cfg);
        assert_eq!(r.records.len(), 5);
        assert_eq!(r.records[3]["trial"], 3);
    }
}
