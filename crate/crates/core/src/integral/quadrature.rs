//! Generalized Gauss–Laguerre rules for the weight s^{θ−1} e^{−s} on [0, ∞).
//!
//! Golub–Welsch: the nodes are the eigenvalues of the Jacobi matrix with
//! diagonal 2k + θ and off-diagonal √(k(k+θ−1)). Eigenvalues come from Sturm
//! bisection followed by Newton steps on the monic recurrence; the first
//! eigenvector component is formed from the orthonormal recurrence so that
//! tiny weights keep full relative accuracy.

use std::fmt::Write as _;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::series::gamma::{gamma, ln_gamma};

/// Nodes and weights of one rule.
///
/// Nodes and weights are kept in double-double: the integral route sums
/// terms that cancel by several orders of magnitude, so f64 rounding of the
/// rule alone would cap its accuracy. Each weight is stored as
/// Γ(θ)·mantissa·2^exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    theta: f64,
    nodes_dd: Vec<Dd>,
    weight_mantissa: Vec<Dd>,
    weight_exponent: Vec<i32>,
    mass: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    log_weights: Vec<f64>,
}

const RESCALE_EXP: i32 = 500;
const RESCALE: f64 = 3.273_390_607_896_142e150; // 2^500

impl QuadratureRule {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights; entries can underflow to zero for very high orders, where
    /// [`Self::log_weights`] remains usable.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub(crate) fn nodes_dd(&self) -> &[Dd] {
        &self.nodes_dd
    }

    /// Γ(θ), the common factor of all weights.
    pub(crate) fn mass(&self) -> f64 {
        self.mass
    }

    /// (mantissa, exponent) with w_i = Γ(θ)·mantissa·2^exponent.
    pub(crate) fn scaled_weight(&self, i: usize) -> (Dd, i32) {
        (self.weight_mantissa[i], self.weight_exponent[i])
    }

    /// Σ w_i f(s_i) ≈ ∫₀^∞ s^{θ−1} e^{−s} f(s) ds
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * f(s))
            .sum()
    }

    /// "node,weight" rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,weight\n");
        for (s, w) in self.nodes.iter().zip(&self.weights) {
            let _ = writeln!(out, "{s:e},{w:e}");
        }
        out
    }
}

fn diag(theta: f64, k: usize) -> f64 {
    2.0 * k as f64 + theta
}

/// β_k = k(k + θ − 1), the squared off-diagonal entry.
fn offdiag_sq(theta: f64, k: usize) -> f64 {
    k as f64 * (k as f64 + theta - 1.0)
}

fn diag_dd(theta: f64, k: usize) -> Dd {
    Dd::new(theta) + Dd::new(2.0 * k as f64)
}

fn offdiag_sq_dd(theta: f64, k: usize) -> Dd {
    (Dd::new(theta) + Dd::new(k as f64 - 1.0)).mul_f64(k as f64)
}

/// Number of eigenvalues of the order-q Jacobi matrix below x.
fn sturm_count(theta: f64, q: usize, x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for k in 0..q {
        d = if k == 0 {
            diag(theta, 0) - x
        } else {
            diag(theta, k) - x - offdiag_sq(theta, k) / d
        };
        if d == 0.0 {
            d = -f64::EPSILON * (x.abs() + 1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Newton correction p_q(x)/p_q'(x) from the monic recurrence.
fn newton_step(theta: f64, q: usize, x: Dd) -> Dd {
    let (mut p_prev, mut p) = (Dd::ZERO, Dd::ONE);
    let (mut d_prev, mut d) = (Dd::ZERO, Dd::ZERO);
    for k in 0..q {
        let b = if k == 0 { Dd::ZERO } else { offdiag_sq_dd(theta, k) };
        let xa = x - diag_dd(theta, k);
        let p_next = xa * p - b * p_prev;
        let d_next = p + xa * d - b * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        if p.hi.abs().max(d.hi.abs()) > RESCALE {
            p = p.ldexp(-RESCALE_EXP);
            p_prev = p_prev.ldexp(-RESCALE_EXP);
            d = d.ldexp(-RESCALE_EXP);
            d_prev = d_prev.ldexp(-RESCALE_EXP);
        }
    }
    if d.hi == 0.0 {
        Dd::ZERO
    } else {
        p / d
    }
}

/// Σ_{k<q} p̂_k(x)² for the orthonormal polynomials of the normalised
/// weight, as (mantissa, binary exponent).
fn christoffel_sum(theta: f64, q: usize, x: Dd, inv_sqrt_beta: &[Dd], sqrt_beta: &[Dd]) -> (Dd, i32) {
    let (mut prev, mut cur) = (Dd::ZERO, Dd::ONE);
    let mut sum = Dd::ONE;
    let mut exp = 0;
    for k in 1..q {
        let mut t = (x - diag_dd(theta, k - 1)) * cur;
        if k >= 2 {
            t = t - sqrt_beta[k - 1] * prev;
        }
        let next = t * inv_sqrt_beta[k];
        prev = cur;
        cur = next;
        sum = sum + cur * cur;
        if cur.hi.abs() > RESCALE {
            prev = prev.ldexp(-RESCALE_EXP);
            cur = cur.ldexp(-RESCALE_EXP);
            sum = sum.ldexp(-2 * RESCALE_EXP);
            exp += 2 * RESCALE_EXP;
        }
    }
    (sum, exp)
}

/// Builds the order-`q` rule for θ > 0.
/// |Σ w_i s_i^j / Γ(θ+j) − 1|, summed in log space so that high moments
/// do not overflow. Γ(θ+j) comes from the recurrence on ln Γ(θ).
pub fn moment_relative_error(rule: &QuadratureRule, j: usize) -> f64 {
    let target = (0..j).fold(ln_gamma(rule.theta()), |acc, i| acc + (rule.theta() + i as f64).ln());
    let s: f64 = rule
        .nodes()
        .iter()
        .zip(rule.log_weights())
        .map(|(&x, &lw)| (lw + j as f64 * x.ln() - target).exp())
        .sum();
    (s - 1.0).abs()
}

pub fn gauss_laguerre_rule(theta: f64, q: usize) -> Result<QuadratureRule> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Unsupported(format!(
            "quadrature needs theta > 0 (weight s^(theta-1) e^(-s) is not integrable at theta = {theta})"
        )));
    }
    if q == 0 {
        return Err(Error::InvalidInput("quadrature order must be positive".into()));
    }
    // Gershgorin upper bound
    let mut upper: f64 = 0.0;
    for k in 0..q {
        let left = if k > 0 { offdiag_sq(theta, k).sqrt() } else { 0.0 };
        let right = if k + 1 < q { offdiag_sq(theta, k + 1).sqrt() } else { 0.0 };
        upper = upper.max(diag(theta, k) + left + right);
    }
    let sqrt_beta: Vec<Dd> = (0..q.max(1))
        .map(|k| if k == 0 { Dd::ZERO } else { offdiag_sq_dd(theta, k).sqrt() })
        .collect();
    let inv_sqrt_beta: Vec<Dd> = sqrt_beta
        .iter()
        .map(|&b| if b.hi == 0.0 { Dd::ZERO } else { Dd::ONE / b })
        .collect();

    let mass = gamma(theta);
    let ln_mass = ln_gamma(theta);
    let mut rule = QuadratureRule {
        theta,
        nodes_dd: Vec::with_capacity(q),
        weight_mantissa: Vec::with_capacity(q),
        weight_exponent: Vec::with_capacity(q),
        mass,
        nodes: Vec::with_capacity(q),
        weights: Vec::with_capacity(q),
        log_weights: Vec::with_capacity(q),
    };
    for i in 0..q {
        let (mut lo, mut hi) = (0.0, upper);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(theta, q, mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = Dd::new(0.5 * (lo + hi));
        let slack = 4.0 * (hi - lo) + 1e-12 * hi;
        for _ in 0..4 {
            let cand = x - newton_step(theta, q, x);
            // a Newton step that leaves the bisection bracket means the
            // iteration was already at its accuracy floor
            if cand.hi > lo - slack && cand.hi < hi + slack && cand.hi > 0.0 {
                x = cand;
            } else {
                break;
            }
        }
        let (s, e) = christoffel_sum(theta, q, x, &inv_sqrt_beta, &sqrt_beta);
        let mantissa = Dd::ONE / s;
        let lw = ln_mass - s.hi.ln() - e as f64 * std::f64::consts::LN_2;
        rule.nodes_dd.push(x);
        rule.nodes.push(x.to_f64());
        rule.weight_mantissa.push(mantissa);
        rule.weight_exponent.push(-e);
        rule.weights.push(mass * mantissa.ldexp(-e).to_f64());
        rule.log_weights.push(lw);
    }
    Ok(rule)
}
