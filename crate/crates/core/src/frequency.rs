//! Effective-frequency self-consistency problems.
//!
//! The Gaussian-matching frequency at time step `tau` is
//! `omega_g(tau) = omega * sqrt(B(2^m g / (tau^(m-1) omega^(2m))))`. At zero
//! temperature it solves `w = omega * sqrt(B(2 g w^(m-1) / omega^(2m)))`; at
//! finite `beta` it is coupled to the stationarity condition
//! `n_c = (beta omega_g / 2) coth(beta omega_g / 2)` with `tau = beta / n_c`.
//! Below the temperature scale the frequency expands in powers of
//! `y = exp(-beta omega_g)`; its coefficients follow from Taylor-expanding
//! `B` about `x0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::OscillatorParams;
use crate::quadrature::{big_b, big_b_derivatives};
use crate::roots::{brent, damped_fixed_point};
use crate::series::{BetaPolynomial, CoefficientSeries};

/// Default truncation order of every low-temperature expansion.
pub const DEFAULT_ORDER: usize = 12;

const RESIDUAL_TOL: f64 = 1e-12;
const SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct FrequencySolution {
    pub params: OscillatorParams,
    /// Zero-temperature effective frequency.
    pub omega_bar: f64,
    /// `2 g omega_bar^(m-1) / omega^(2m)`, the argument of `B` at `omega_bar`.
    pub x0: f64,
    /// `2 / omega_bar`, the zero-temperature time step.
    pub tau_bar: f64,
    /// `B(x0), B'(x0), ..., B^(N)(x0)`.
    pub b_derivs: Vec<f64>,
    /// `omega_1 ... omega_N` (index 0 holds `omega_1`).
    pub omega_coeffs: Vec<f64>,
}

impl FrequencySolution {
    pub fn order(&self) -> usize {
        self.omega_coeffs.len()
    }

    /// `omega_n` with the 1-based index used throughout the expansions.
    pub fn omega_n(&self, n: usize) -> f64 {
        self.omega_coeffs[n - 1]
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThermalSolution {
    pub beta: f64,
    /// Stationary (continuous) number of time slices.
    pub n_c: f64,
    /// `beta / n_c`.
    pub tau_c: f64,
    /// `omega_g(tau_c)`.
    pub omega_g_beta: f64,
}

impl ThermalSolution {
    /// Relative residual of `n_c = (beta omega_g / 2) coth(beta omega_g / 2)`.
    pub fn residual(&self) -> f64 {
        let half = 0.5 * self.beta * self.omega_g_beta;
        let rhs = half / half.tanh();
        (self.n_c - rhs).abs() / rhs
    }
}

/// Argument of `B` at zero temperature for trial frequency `w`.
pub fn x_of_omega(params: &OscillatorParams, w: f64) -> f64 {
    let m = params.m as i32;
    2.0 * params.g * w.powi(m - 1) / params.omega.powi(2 * m)
}

/// `omega_g(tau)` at a finite time step.
pub fn omega_g_at_tau(params: &OscillatorParams, tau: f64) -> Result<f64> {
    let m = params.m as i32;
    if params.g == 0.0 {
        return Ok(params.omega);
    }
    let x = 2f64.powi(m) * params.g / (tau.powi(m - 1) * params.omega.powi(2 * m));
    Ok(params.omega * big_b(params.m, x)?.sqrt())
}

/// Relative residual of the zero-temperature fixed-point equation at `w`.
pub fn omega_bar_residual(params: &OscillatorParams, w: f64) -> Result<f64> {
    let rhs = params.omega * big_b(params.m, x_of_omega(params, w))?.sqrt();
    Ok((w - rhs).abs() / w)
}

/// Solve the zero-temperature fixed point for `omega_bar` alone.
pub fn solve_omega_bar_frequency(params: &OscillatorParams) -> Result<f64> {
    if params.g == 0.0 {
        return Ok(params.omega);
    }
    let ln_omega = params.omega.ln();
    // Work in u = ln w; errors inside the map surface as NaN and force the
    // bracketing fallback, which re-evaluates with error propagation.
    let phi = |u: f64| match big_b(params.m, x_of_omega(params, u.exp())) {
        Ok(b) => ln_omega + 0.5 * b.ln(),
        Err(_) => f64::NAN,
    };
    if let Some(u) = damped_fixed_point(phi, ln_omega, 1e-15, 200) {
        let w = u.exp();
        if omega_bar_residual(params, w)? <= RESIDUAL_TOL {
            return Ok(w);
        }
    }
    // phi(u) >= ln omega, so the root lies above ln omega.
    let lo = ln_omega;
    let mut hi = ln_omega + 1.0;
    let mut guard = 0;
    while hi - phi(hi) <= 0.0 {
        hi += (hi - lo).max(1.0);
        guard += 1;
        if guard > 60 {
            return Err(Error::NonConvergence {
                solver: "omega_bar bracket",
                iterations: guard,
                residual: f64::NAN,
            });
        }
    }
    let u = brent(|u| u - phi(u), lo, hi, 1e-16, 200)?;
    let w = u.exp();
    let residual = omega_bar_residual(params, w)?;
    if residual > RESIDUAL_TOL {
        return Err(Error::NonConvergence {
            solver: "omega_bar",
            iterations: 200,
            residual,
        });
    }
    Ok(w)
}

/// Zero-temperature frequency with the default expansion order.
pub fn solve_omega_bar(params: &OscillatorParams) -> Result<FrequencySolution> {
    solve_omega_bar_to_order(params, DEFAULT_ORDER)
}

/// Zero-temperature frequency together with `B` derivatives and the
/// expansion coefficients `omega_1 ... omega_order`.
pub fn solve_omega_bar_to_order(params: &OscillatorParams, order: usize) -> Result<FrequencySolution> {
    let omega_bar = solve_omega_bar_frequency(params)?;
    let x0 = x_of_omega(params, omega_bar);
    let b_derivs = big_b_derivatives(params.m, x0, order)?;
    let mut fs = FrequencySolution {
        params: *params,
        omega_bar,
        x0,
        tau_bar: 2.0 / omega_bar,
        b_derivs,
        omega_coeffs: Vec::new(),
    };
    fs.omega_coeffs = omega_coefficients(&fs, params, order)?;
    Ok(fs)
}

/// Coefficient of `y^n` in `(sum_{l>=1} seq[l-1] y^l)^k`, using only the
/// entries available in `seq`.
fn power_coefficient(seq: &[f64], k: usize, n: usize) -> f64 {
    if k == 0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    // pow[j] = coefficient of y^j in the current power, j = 0..=n
    let mut pow = vec![0.0; n + 1];
    for (l, &s) in seq.iter().enumerate().take(n) {
        pow[l + 1] = s;
    }
    for _ in 1..k {
        let mut next = vec![0.0; n + 1];
        for (j, &p) in pow.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for (l, &s) in seq.iter().enumerate() {
                let idx = j + l + 1;
                if idx > n {
                    break;
                }
                next[idx] += p * s;
            }
        }
        pow = next;
    }
    pow[n]
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `omega_1 ... omega_{n_max}` from the Taylor expansion of `B` about `x0`.
///
/// With `w_n = omega_n / omega_bar`, the factor `(omega_g / omega_bar) coth`
/// is `1 + sum a_n y^n`, the argument of `B` is `x0 (1 + sum b_n y^n)`, the
/// ratio `B / B(x0)` is `1 + sum c_n y^n`, and `omega_g / omega_bar` is its
/// square root. Every sum with fewer than two factors vanishes, which makes
/// the recursion explicit in `omega_n`.
pub fn omega_coefficients(fs: &FrequencySolution, params: &OscillatorParams, n_max: usize) -> Result<Vec<f64>> {
    if fs.b_derivs.len() <= n_max {
        return Err(Error::Domain(format!(
            "need B derivatives to order {n_max}, have {}",
            fs.b_derivs.len().saturating_sub(1)
        )));
    }
    let m1 = (params.m - 1) as f64;
    let b0 = fs.b_derivs[0];
    // alpha[n] = B_n x0^n / (n! B_0), beta_half[n] = binom(1/2, n)
    let mut alpha = vec![0.0; n_max + 1];
    let mut beta_half = vec![1.0; n_max + 1];
    let mut fact = 1.0;
    for n in 1..=n_max {
        fact *= n as f64;
        alpha[n] = fs.b_derivs[n] * fs.x0.powi(n as i32) / (fact * b0);
        beta_half[n] = beta_half[n - 1] * (0.5 - (n - 1) as f64) / n as f64;
    }
    let denom = 1.0 - 0.5 * alpha[1] * m1;
    if denom.abs() < SINGULAR_TOL {
        return Err(Error::SingularDenominator(denom));
    }
    let amp = fs.omega_bar / denom;

    let mut w = Vec::with_capacity(n_max);
    let mut a = Vec::with_capacity(n_max);
    let mut b = Vec::with_capacity(n_max);
    let mut c = Vec::with_capacity(n_max);
    let mut omegas = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let s_n = 1.0 + w.iter().sum::<f64>();
        let t_n: f64 = (2..params.m as usize)
            .map(|k| binomial(params.m as usize - 1, k) * power_coefficient(&a, k, n))
            .sum();
        let u_n: f64 = 0.5 * (2..=n).map(|k| alpha[k] * power_coefficient(&b, k, n)).sum::<f64>();
        let v_n: f64 = (2..=n).map(|k| beta_half[k] * power_coefficient(&c, k, n)).sum();
        let omega_n = amp * (alpha[1] * m1 * s_n + 0.5 * alpha[1] * t_n + u_n + v_n);
        let w_n = omega_n / fs.omega_bar;
        let a_n = w_n + 2.0 * s_n;
        let b_n = m1 * a_n + t_n;
        let c_n = alpha[1] * b_n + 2.0 * u_n;
        w.push(w_n);
        a.push(a_n);
        b.push(b_n);
        c.push(c_n);
        omegas.push(omega_n);
    }
    Ok(omegas)
}

/// `Δω_g = omega_g - omega_bar` as a series in `y0 = exp(-beta omega_bar)`.
///
/// Solves `Δω = sum_n omega_n y0^n exp(-beta n Δω)` by substitution; each
/// pass fixes one further order.
pub fn delta_omega_series(omega_coeffs: &[f64], order: usize) -> CoefficientSeries {
    let mut coeffs = vec![0.0];
    coeffs.extend(omega_coeffs.iter().take(order));
    let mut d_omega = CoefficientSeries::zero(order);
    for _ in 0..order {
        let y = (-&d_omega).mul_beta().exp().mul_y0();
        d_omega = y.compose(&coeffs);
    }
    d_omega
}

/// `Q_1(beta) ... Q_{n_max}(beta)`, the polynomial coefficients of `Δω_g`.
pub fn q_polynomials(omega_coeffs: &[f64], n_max: usize) -> Vec<BetaPolynomial> {
    assert!(
        omega_coeffs.len() >= n_max,
        "need {n_max} frequency coefficients, have {}",
        omega_coeffs.len()
    );
    let s = delta_omega_series(omega_coeffs, n_max.max(1));
    (1..=n_max).map(|n| s.term(n).clone()).collect()
}

/// Finite-temperature solution of the coupled stationarity condition.
pub fn solve_thermal(params: &OscillatorParams, beta: f64) -> Result<ThermalSolution> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    let rhs_tau = |omega_g: f64| 2.0 * (0.5 * beta * omega_g).tanh() / omega_g;
    let finish = |tau: f64| -> Result<ThermalSolution> {
        let omega_g = omega_g_at_tau(params, tau)?;
        Ok(ThermalSolution {
            beta,
            n_c: beta / tau,
            tau_c: tau,
            omega_g_beta: omega_g,
        })
    };
    if params.g == 0.0 {
        return finish(rhs_tau(params.omega));
    }
    // t = ln tau
    let phi = |t: f64| match omega_g_at_tau(params, t.exp()) {
        Ok(w) => rhs_tau(w).ln(),
        Err(_) => f64::NAN,
    };
    let guess = solve_omega_bar_frequency(params).map(|w| (2.0 / w).min(beta)).unwrap_or(beta);
    if let Some(t) = damped_fixed_point(phi, guess.ln(), 1e-15, 200) {
        let sol = finish(t.exp())?;
        if sol.residual() <= RESIDUAL_TOL {
            return Ok(sol);
        }
    }
    // tanh(z) < z places the root below ln beta.
    let hi = beta.ln();
    let mut lo = hi.min(guess.ln()) - 1.0;
    let mut guard = 0;
    while lo - phi(lo) >= 0.0 {
        lo -= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NonConvergence {
                solver: "thermal bracket",
                iterations: guard,
                residual: f64::NAN,
            });
        }
    }
    let t = brent(|t| t - phi(t), lo, hi, 1e-16, 200)?;
    let sol = finish(t.exp())?;
    let residual = sol.residual();
    if residual > RESIDUAL_TOL {
        return Err(Error::NonConvergence {
            solver: "thermal",
            iterations: 200,
            residual,
        });
    }
    Ok(sol)
}
