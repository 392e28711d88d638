//! Low-temperature expansion of the model partition function and the
//! energy levels read off from it.
//!
//! Writing `Z = exp(-beta E_0) P` with `y0 = exp(-beta omega_bar)`, every
//! ingredient of `P` is a truncated series in `y0` with polynomial-in-`beta`
//! coefficients:
//!
//! * `Δω = omega_g - omega_bar` and `y = y0 exp(-beta Δω)`,
//! * `ΔR = (coth(beta omega_g / 2) - 1) / 2 = y / (1 - y)`,
//! * `ΔA = ln sqrt((omega_g / omega_bar) / coth)`,
//! * `Δτ = tau_c - tau_bar` and `ΔB = ln(I_g / Ī_g)` through the potential
//!   moments `Ī_n = ∫ V^n exp(-tau_bar V) dx`,
//! * `S`, bilinear and trilinear in `Δω`, `ΔT = ΔA + ΔB` and `ΔR`,
//! * `P = exp(beta S) (1 + ΔR) = 1 + sum_n P_n(beta) y0^n`.
//!
//! Level `n` is `E_0 + n omega_bar - P_n1` where `P_n1` is the linear
//! `beta` coefficient of `P_n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frequency::{delta_omega_series, solve_omega_bar_to_order, FrequencySolution, DEFAULT_ORDER};
use crate::params::OscillatorParams;
use crate::partition::{model_partition, GroundState};
use crate::quadrature::v_moment;
use crate::series::CoefficientSeries;

/// Highest level the default pipeline reports.
pub const DEFAULT_N_MAX: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct SeriesBundle {
    pub d_omega: CoefficientSeries,
    /// `y = exp(-beta omega_g)` as a series in `y0`.
    pub y: CoefficientSeries,
    pub d_r: CoefficientSeries,
    pub d_a: CoefficientSeries,
    pub d_tau: CoefficientSeries,
    pub d_b: CoefficientSeries,
    pub d_t: CoefficientSeries,
    pub s: CoefficientSeries,
    pub p: CoefficientSeries,
    /// `c_1 ... c_7` multiplying the terms of `S`.
    pub c: [f64; 7],
}

/// Everything the expansion needs, kept together for diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ModelExpansion {
    pub params: OscillatorParams,
    pub frequency: FrequencySolution,
    pub ground: GroundState,
    /// `Ī_0 ... Ī_N`
    pub v_moments: Vec<f64>,
    pub bundle: SeriesBundle,
}

impl ModelExpansion {
    pub fn order(&self) -> usize {
        self.bundle.p.order()
    }

    /// `P_n1`, the linear `beta` coefficient of the `y0^n` term of `P`.
    pub fn p_n1(&self, n: usize) -> f64 {
        self.bundle.p.term(n).coeff(1)
    }

    /// `exp(-beta E_0) sum_n P_n(beta) y0^n` at truncation order.
    pub fn ln_z_series(&self, beta: f64) -> f64 {
        let y0 = (-beta * self.ground.omega_bar).exp();
        -beta * self.ground.e0 + self.bundle.p.evaluate(beta, y0).ln()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub params: OscillatorParams,
    pub e0: f64,
    pub omega_bar: f64,
    /// `P_11 ... P_{n_max,1}` (index 0 holds `P_11`).
    pub p_n1: Vec<f64>,
    /// `E_0 ... E_{n_max}`.
    pub levels: Vec<f64>,
    pub truncation_order: usize,
}

/// `ΔR = sum_{n>=1} y0^n exp(-beta n Δω)`, a geometric sum in
/// `y = y0 exp(-beta Δω)`.
pub fn build_delta_r(d_omega: &CoefficientSeries) -> (CoefficientSeries, CoefficientSeries) {
    let order = d_omega.order();
    let y = (-d_omega).mul_beta().exp().mul_y0();
    let mut geometric = vec![1.0; order + 1];
    geometric[0] = 0.0;
    let d_r = y.compose(&geometric);
    (y, d_r)
}

/// `(ΔA, Δτ, ΔB, ΔT)` from the frequency shift, the occupation factor and
/// the potential moments `Ī_0 ... Ī_N`.
pub fn build_delta_t(
    omega_bar: f64,
    d_omega: &CoefficientSeries,
    d_r: &CoefficientSeries,
    v_moments: &[f64],
) -> (CoefficientSeries, CoefficientSeries, CoefficientSeries, CoefficientSeries) {
    let order = d_omega.order();
    let tau_bar = 2.0 / omega_bar;
    let rel_omega = d_omega.scale(1.0 / omega_bar);
    let two_r = d_r.scale(2.0);
    let d_a = (&rel_omega.log1p() - &two_r.log1p()).scale(0.5);

    // tau_c = tau_bar / ((omega_g / omega_bar) coth)
    let product = &rel_omega.with_constant(1.0) * &two_r.with_constant(1.0);
    let d_tau = product.recip().scale(tau_bar).with_constant(0.0);

    // I_g / Ī_0 - 1 = sum_{n>=1} (-Δτ)^n Ī_n / (n! Ī_0)
    let mut coeffs = vec![0.0; order + 1];
    let mut fact = 1.0;
    for n in 1..=order {
        fact *= n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[n] = sign * v_moments[n] / (fact * v_moments[0]);
    }
    let d_b = d_tau.compose(&coeffs).log1p();
    let d_t = &d_a + &d_b;
    (d_a, d_tau, d_b, d_t)
}

/// The coefficients `c_1 ... c_7` of `S` given `L = ln(sqrt(omega_bar / pi) Ī_g)`.
pub fn s_coefficients(omega_bar: f64, ln_norm: f64) -> [f64; 7] {
    [
        0.5 * (ln_norm - 1.0),
        0.5 * omega_bar,
        omega_bar * ln_norm,
        0.5,
        ln_norm,
        omega_bar,
        1.0,
    ]
}

/// Assemble `S` and `P = exp(beta S) (1 + ΔR)`.
pub fn build_s_and_p(
    ground: &GroundState,
    d_omega: &CoefficientSeries,
    d_t: &CoefficientSeries,
    d_r: &CoefficientSeries,
) -> (CoefficientSeries, CoefficientSeries, [f64; 7]) {
    let c = s_coefficients(ground.omega_bar, ground.ln_norm);
    let w_t = d_omega * d_t;
    let w_r = d_omega * d_r;
    let t_r = d_t * d_r;
    let w_t_r = &w_t * d_r;
    let terms = [d_omega, d_t, d_r, &w_t, &w_r, &t_r, &w_t_r];
    let mut s = CoefficientSeries::zero(d_omega.order());
    for (ci, term) in c.iter().zip(terms) {
        s = &s + &term.scale(*ci);
    }
    let p = &s.mul_beta().exp() * &d_r.with_constant(1.0);
    (s, p, c)
}

/// Build the full expansion of `Z` to truncation order `order`.
pub fn build_expansion(params: &OscillatorParams, order: usize) -> Result<ModelExpansion> {
    if order < 1 {
        return Err(Error::Domain("truncation order must be at least 1".into()));
    }
    let frequency = solve_omega_bar_to_order(params, order)?;
    let ground = GroundState::from_omega_bar(params, frequency.omega_bar)?;
    let v_moments = (0..=order as u32)
        .map(|n| v_moment(params, frequency.tau_bar, n))
        .collect::<Result<Vec<_>>>()?;

    let d_omega = delta_omega_series(&frequency.omega_coeffs, order);
    let (y, d_r) = build_delta_r(&d_omega);
    let (d_a, d_tau, d_b, d_t) = build_delta_t(frequency.omega_bar, &d_omega, &d_r, &v_moments);
    let (s, p, c) = build_s_and_p(&ground, &d_omega, &d_t, &d_r);
    Ok(ModelExpansion {
        params: *params,
        frequency,
        ground,
        v_moments,
        bundle: SeriesBundle {
            d_omega,
            y,
            d_r,
            d_a,
            d_tau,
            d_b,
            d_t,
            s,
            p,
            c,
        },
    })
}

/// Model levels `E_0 ... E_{n_max}` from a truncation-`order` expansion.
pub fn extract_spectrum(params: &OscillatorParams, n_max: usize, order: usize) -> Result<SpectrumResult> {
    if order < n_max + 1 {
        return Err(Error::Domain(format!(
            "truncation order {order} too small for n_max = {n_max} (need at least n_max + 1)"
        )));
    }
    let exp = build_expansion(params, order)?;
    Ok(spectrum_from_expansion(&exp, n_max))
}

/// Levels with the default truncation order.
pub fn model_spectrum(params: &OscillatorParams, n_max: usize) -> Result<SpectrumResult> {
    extract_spectrum(params, n_max, DEFAULT_ORDER.max(n_max + 1))
}

pub fn spectrum_from_expansion(exp: &ModelExpansion, n_max: usize) -> SpectrumResult {
    let e0 = exp.ground.e0;
    let omega_bar = exp.ground.omega_bar;
    let p_n1: Vec<f64> = (1..=n_max).map(|n| exp.p_n1(n)).collect();
    let levels = std::iter::once(e0)
        .chain(
            p_n1.iter()
                .enumerate()
                .map(|(i, p)| e0 + (i + 1) as f64 * omega_bar - p),
        )
        .collect();
    SpectrumResult {
        params: exp.params,
        e0,
        omega_bar,
        p_n1,
        levels,
        truncation_order: exp.order(),
    }
}

/// Relative gap `|Z_series - Z_direct| / Z_direct` at one temperature.
pub fn series_z_consistency(params: &OscillatorParams, beta: f64, order: usize) -> Result<f64> {
    let exp = build_expansion(params, order)?;
    consistency_gap(&exp, beta)
}

pub fn consistency_gap(exp: &ModelExpansion, beta: f64) -> Result<f64> {
    let direct = model_partition(&exp.params, beta)?;
    Ok((exp.ln_z_series(beta) - direct.ln_z).exp_m1().abs())
}
