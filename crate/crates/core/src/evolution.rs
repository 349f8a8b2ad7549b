//! The initial value problem ∂_t f = θ ∂_z f + z ∂_z² f, f(0, ·) = e^{−εz} h,
//! solved by the semigroup exp(tΔ_θ) in factored form.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::exp_delta_closed;
use crate::operator::rule::factored_exp;
use crate::scalar::Scalar;
use crate::series::Poly;

/// g(z) = e^{−εz} h(z) with ε ≥ 0 and polynomial h.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialData<T> {
    pub epsilon: T,
    pub h: Poly<T>,
}

/// f(t, z) = prefactor · e^{exp_coefficient·z} · inner(z).
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFrame<T> {
    pub t: T,
    pub prefactor: T,
    pub exp_coefficient: T,
    pub inner: Poly<T>,
}

impl<T: Scalar> SolutionFrame<T> {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.prefactor.to_f64() * (self.exp_coefficient.to_f64() * z).exp() * self.inner.eval_complex(z)
    }

    /// Δ_θ f in the same factored shape. With β the exponential coefficient,
    /// Δ_θ(e^{βz}h) = e^{βz}[θ(βh + h′) + z(β²h + 2βh′ + h″)].
    pub fn apply_delta(&self, theta: &T) -> SolutionFrame<T> {
        let beta = &self.exp_coefficient;
        let h = &self.inner;
        let h1 = h.differentiate();
        let h2 = h1.differentiate();
        let first = &h.scale(beta) + &h1;
        let two_beta = beta.clone() + beta.clone();
        let second = &(&h.scale(&(beta.clone() * beta.clone())) + &h1.scale(&two_beta)) + &h2;
        SolutionFrame {
            t: self.t.clone(),
            prefactor: self.prefactor.clone(),
            exp_coefficient: beta.clone(),
            inner: &first.scale(theta) + &second.shift_up(),
        }
    }

    /// Taylor series of the frame through degree n.
    pub fn series(&self, n: usize) -> Poly<T> {
        let mut e = Vec::with_capacity(n + 1);
        let mut term = self.prefactor.clone();
        for k in 0..=n {
            if k > 0 {
                term = term * self.exp_coefficient.clone() / T::from_usize_exact(k);
            }
            e.push(term.clone());
        }
        Poly::new(e).mul_truncated(&self.inner, n)
    }

    /// The frame read as fresh initial data (needs a nonpositive exponential
    /// coefficient).
    pub fn as_initial_data(&self) -> Result<InitialData<T>> {
        if self.exp_coefficient > T::zero() {
            return Err(Error::InvalidInput("frame has a growing exponential factor".into()));
        }
        Ok(InitialData {
            epsilon: -self.exp_coefficient.clone(),
            h: self.inner.scale(&self.prefactor),
        })
    }
}

/// f(t, ·) = exp(tΔ_θ) g.
///
/// For ε > 0 this is the operation rule with u = −ε and a = t:
/// prefactor (1 + εt)^{−θ} and exponential coefficient −ε/(1 + εt).
pub fn evolve<T: Scalar>(data: &InitialData<T>, theta: &T, t: &T) -> Result<SolutionFrame<T>> {
    if *t < T::zero() {
        return Err(Error::InvalidInput(format!("t must be nonnegative, got {t:?}")));
    }
    if data.epsilon < T::zero() {
        return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
    }
    if data.epsilon.is_zero() {
        return Ok(SolutionFrame {
            t: t.clone(),
            prefactor: T::one(),
            exp_coefficient: T::zero(),
            inner: exp_delta_closed(t, theta, &data.h),
        });
    }
    let r = factored_exp(t, &-data.epsilon.clone(), theta, &data.h)?;
    Ok(SolutionFrame {
        t: t.clone(),
        prefactor: r.prefactor,
        exp_coefficient: r.exp_coefficient,
        inner: r.inner,
    })
}

/// Residual of ∂_t f = Δ_θ f at (t, z), relative to max(1, |Δ_θ f|).
///
/// Δ_θ f is exact (differentiation of the frame). ∂_t f is the central
/// difference at step dt with one Richardson step, so the truncation error is
/// O(dt⁴).
pub fn pde_residual(data: &InitialData<f64>, theta: f64, t: f64, z: Complex64, dt: f64) -> Result<f64> {
    if !(t > 0.0 && dt > 0.0 && dt < t) {
        return Err(Error::InvalidInput(format!("need 0 < dt < t, got t = {t}, dt = {dt}")));
    }
    let at = |s: f64| evolve(data, &theta, &s).map(|f| f.eval(z));
    let central = |h: f64| -> Result<Complex64> { Ok((at(t + h)? - at(t - h)?) / (2.0 * h)) };
    let time = (4.0 * central(0.5 * dt)? - central(dt)?) / 3.0;
    let space = evolve(data, &theta, &t)?.apply_delta(&theta).eval(z);
    Ok((time - space).norm() / space.norm().max(1.0))
}

/// Default time step of [`pde_residual`] for a given t.
pub fn default_dt(t: f64) -> f64 {
    t / 1000.0
}

const CIRCLE_SAMPLES: usize = 256;

/// sup over |z| ≤ R of |f| for a frame, taken on the circle |z| = R.
///
/// The circle is sampled at 256 points and the best sample refined by a
/// golden-section search between its neighbours.
pub fn disk_sup<T: Scalar>(frame: &SolutionFrame<T>, r: f64) -> f64 {
    let at = |phi: f64| frame.eval(Complex64::from_polar(r, phi)).norm();
    if r == 0.0 {
        return at(0.0);
    }
    let step = std::f64::consts::TAU / CIRCLE_SAMPLES as f64;
    let (best_i, best) = (0..CIRCLE_SAMPLES)
        .map(|i| (i, at(i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let (mut lo, mut hi) = ((best_i as f64 - 1.0) * step, (best_i as f64 + 1.0) * step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
    let (mut f1, mut f2) = (at(x1), at(x2));
    for _ in 0..60 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = at(x2);
        }
    }
    best.max(f1).max(f2)
}

/// sup_{|z| ≤ R} |f(t, z)| over a time grid.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizationProfile {
    pub radius: f64,
    pub rows: Vec<(f64, f64)>,
    /// First index from which the values strictly decrease.
    pub monotone_from: usize,
}

impl StabilizationProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,sup_norm\n");
        for (t, s) in &self.rows {
            out.push_str(&format!("{t},{s:e}\n"));
        }
        out
    }

    /// True when the profile decreases strictly over every t ≥ `from`.
    pub fn decreasing_from(&self, from: f64) -> bool {
        self.rows
            .windows(2)
            .filter(|w| w[0].0 >= from)
            .all(|w| w[1].1 < w[0].1)
    }
}

/// Decay profile of the solution on the disk of radius `r`.
///
/// Requires ε > 0 and θ > 0: at θ = 0 the factor (1 + εt)^{−θ} is constant
/// and the frame tends to a nonzero limit, so no decay claim is made there.
pub fn stabilization_profile(data: &InitialData<f64>, theta: f64, times: &[f64], r: f64) -> Result<StabilizationProfile> {
    if !(data.epsilon > 0.0) {
        return Err(Error::InvalidInput("stabilization needs epsilon > 0".into()));
    }
    if !(theta > 0.0) {
        return Err(Error::Unsupported("stabilization is only certified for theta > 0".into()));
    }
    if !(r >= 0.0) {
        return Err(Error::InvalidInput(format!("radius must be nonnegative, got {r}")));
    }
    let rows = times
        .par_iter()
        .map(|&t| Ok((t, disk_sup(&evolve(data, &theta, &t)?, r))))
        .collect::<Result<Vec<_>>>()?;
    let mut monotone_from = rows.len().saturating_sub(1);
    while monotone_from > 0 && rows[monotone_from].1 < rows[monotone_from - 1].1 {
        monotone_from -= 1;
    }
    Ok(StabilizationProfile {
        radius: r,
        rows,
        monotone_from,
    })
}

/// Residual of (Δ_θ f)(z²) = ¼[((2θ − 1)/z) g′(z) + g″(z)] with g(z) = f(z²),
/// relative to max(1, |left side|).
pub fn radial_identity_check(f: &Poly<f64>, theta: f64, z: Complex64) -> Result<f64> {
    if z.norm() == 0.0 {
        return Err(Error::Singular("the radial identity divides by z".into()));
    }
    let lhs = crate::operator::apply_delta(&theta, f).eval_complex(z * z);
    let g1 = f.compose_square().differentiate();
    let g2 = g1.differentiate();
    let rhs = 0.25 * ((2.0 * theta - 1.0) / z * g1.eval_complex(z) + g2.eval_complex(z));
    Ok((lhs - rhs).norm() / lhs.norm().max(1.0))
}
